import { describe, expect, it } from 'vitest';

import { contextCells, rangeOffsets } from '../src/highlight.js';
import { runReport } from './fixtures.js';

const report = runReport();

describe('highlight offsets', () => {
  it('token range offsets reproduce every discrepancy surface exactly', () => {
    for (const disc of report.discrepancies) {
      const doc = report.documents[disc.doc_id]!;
      const [start, end] = rangeOffsets(doc, disc.token_range);
      expect(doc.text.slice(start, end)).toBe(disc.surface);
    }
  });

  it('cell offsets equal the server token table', () => {
    for (const disc of report.discrepancies) {
      const doc = report.documents[disc.doc_id]!;
      for (const cell of contextCells(doc, disc.token_range, 6)) {
        const serverToken = doc.tokens[cell.index]!;
        expect([cell.start, cell.end]).toEqual(serverToken);
        expect(cell.surface).toBe(doc.text.slice(serverToken[0], serverToken[1]));
      }
    }
  });

  it('cells plus gaps reconstruct the context slice', () => {
    const disc = report.discrepancies[0]!;
    const doc = report.documents[disc.doc_id]!;
    const cells = contextCells(doc, disc.token_range, 6);
    const rebuilt = cells.map((c) => c.surface + c.gap).join('');
    const first = cells[0]!;
    const last = cells[cells.length - 1]!;
    expect(rebuilt).toBe(doc.text.slice(first.start, last.end));
  });

  it('highlight flags mirror the gold/pred label vectors', () => {
    const disc = report.discrepancies[0]!;
    const doc = report.documents[disc.doc_id]!;
    for (const cell of contextCells(doc, disc.token_range, 4)) {
      expect(cell.gold).toBe(doc.gold[cell.index] === 1);
      expect(cell.pred).toBe(doc.pred[cell.index] === 1);
    }
  });

  it('in-range flags cover exactly the discrepancy tokens', () => {
    for (const disc of report.discrepancies) {
      const doc = report.documents[disc.doc_id]!;
      const cells = contextCells(doc, disc.token_range, 3);
      const inRange = cells.filter((c) => c.inRange).map((c) => c.index);
      const expected = [];
      for (let i = disc.token_range[0]; i < disc.token_range[1]; i++) expected.push(i);
      expect(inRange).toEqual(expected);
    }
  });

  it('window clips at document edges', () => {
    const disc = report.discrepancies[0]!;
    const doc = report.documents[disc.doc_id]!;
    const cells = contextCells(doc, disc.token_range, 10_000);
    expect(cells.length).toBe(doc.tokens.length);
  });
});
