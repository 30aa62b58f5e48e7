/** Context rendering: token cells with gold/model highlight flags.
 *
 * Offsets come straight from the server's token table, so what the analyst
 * sees is exactly what the scorer counted.
 */

import type { DocumentData } from './types.js';

export interface TokenCell {
  index: number;
  /** Character offsets into the document text (server token table). */
  start: number;
  end: number;
  surface: string;
  /** Text between this token and the next cell (whitespace/punctuation). */
  gap: string;
  gold: boolean;
  pred: boolean;
  masked: boolean;
  /** True when the token belongs to the discrepancy under review. */
  inRange: boolean;
}

/** Cells for tokens [range.start - width, range.end + width), clipped. */
export function contextCells(
  doc: DocumentData,
  range: [number, number],
  width: number,
): TokenCell[] {
  const [rangeStart, rangeEnd] = range;
  const lo = Math.max(0, rangeStart - width);
  const hi = Math.min(doc.tokens.length, rangeEnd + width);
  const cells: TokenCell[] = [];
  for (let i = lo; i < hi; i++) {
    const token = doc.tokens[i];
    if (token === undefined) continue;
    const [start, end] = token;
    const next = i + 1 < hi ? doc.tokens[i + 1] : undefined;
    cells.push({
      index: i,
      start,
      end,
      surface: doc.text.slice(start, end),
      gap: next === undefined ? '' : doc.text.slice(end, next[0]),
      gold: doc.gold[i] === 1,
      pred: doc.pred[i] === 1,
      masked: doc.mask[i] === 1,
      inRange: i >= rangeStart && i < rangeEnd,
    });
  }
  return cells;
}

/** Character span covered by a token range, per the server's table. */
export function rangeOffsets(
  doc: DocumentData,
  range: [number, number],
): [number, number] {
  const first = doc.tokens[range[0]];
  const last = doc.tokens[range[1] - 1];
  if (first === undefined || last === undefined) {
    throw new Error(`token range ${range} outside document`);
  }
  return [first[0], last[1]];
}
