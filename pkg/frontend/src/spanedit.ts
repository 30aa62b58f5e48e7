/** Token-snapped span editing.
 *
 * Scoring is token-level, so a hand-drawn character selection snaps outward
 * to the covered tokens; selections touching no token are rejected rather
 * than producing an unscoreable zero-length span.
 */

export function snapToTokens(
  tokens: [number, number][],
  anchor: number,
  focus: number,
): [number, number] | null {
  const lo = Math.min(anchor, focus);
  const hi = Math.max(anchor, focus);
  if (lo === hi) {
    return null; // zero-length selection
  }
  let start = -1;
  let end = -1;
  for (const [s, e] of tokens) {
    if (s < hi && lo < e) {
      if (start < 0) start = s;
      end = e;
    }
  }
  return start < 0 ? null : [start, end];
}

/** Snap a selection expressed in token indices (click-to-click). */
export function tokenIndexSpan(
  tokens: [number, number][],
  firstIndex: number,
  lastIndex: number,
): [number, number] | null {
  const lo = Math.min(firstIndex, lastIndex);
  const hi = Math.max(firstIndex, lastIndex);
  const first = tokens[lo];
  const last = tokens[hi];
  if (first === undefined || last === undefined) return null;
  return [first[0], last[1]];
}
