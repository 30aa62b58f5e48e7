/** Keyboard mapping: the whole adjudication flow works without a mouse.
 *
 *   j / ArrowDown   next item          k / ArrowUp   previous item
 *   o               next open item
 *   g               keep gold          m             accept model
 *   e               edit span (then Enter confirms, Escape cancels)
 *   1..9            toggle taxonomy label for the pending decision
 *   x               export (Enter confirms force when items remain open)
 */

import type { Decision } from './types.js';

export type KeyAction =
  | { type: 'next' }
  | { type: 'prev' }
  | { type: 'nextOpen' }
  | { type: 'decide'; decision: Decision }
  | { type: 'toggleLabel'; slot: number }
  | { type: 'editMode' }
  | { type: 'confirm' }
  | { type: 'cancel' }
  | { type: 'export' }
  | { type: 'none' };

export function keyToAction(key: string, editing: boolean): KeyAction {
  if (editing) {
    if (key === 'Enter') return { type: 'confirm' };
    if (key === 'Escape') return { type: 'cancel' };
    return { type: 'none' };
  }
  switch (key) {
    case 'j':
    case 'ArrowDown':
      return { type: 'next' };
    case 'k':
    case 'ArrowUp':
      return { type: 'prev' };
    case 'o':
      return { type: 'nextOpen' };
    case 'g':
      return { type: 'decide', decision: 'keep_gold' };
    case 'm':
      return { type: 'decide', decision: 'accept_model' };
    case 'e':
      return { type: 'editMode' };
    case 'x':
      return { type: 'export' };
    default: {
      const digit = Number.parseInt(key, 10);
      if (digit >= 1 && digit <= 9) {
        return { type: 'toggleLabel', slot: digit - 1 };
      }
      return { type: 'none' };
    }
  }
}
