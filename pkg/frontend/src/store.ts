/** Session state for one review run.
 *
 * Adjudications apply optimistically and roll back on a revision conflict;
 * annotation state is never mutated except through the adjudicate endpoint,
 * so reloading always reproduces the server's view.
 */

import { RevisionConflictError, type ApiClient } from './api.js';
import type {
  Decision,
  KindCounts,
  ExportResult,
  ReviewItem,
  Taxonomy,
} from './types.js';

export interface SessionProgress {
  total: number;
  adjudicated: number;
  open: number;
  /** Taxonomy tallies by kind; with multi-labelling these sum to >= adjudicated. */
  byLabel: Record<string, KindCounts>;
  labelTotal: number;
}

export interface AdjudicateOutcome {
  ok: boolean;
  conflict: boolean;
}

export class ReviewSession {
  items: ReviewItem[] = [];
  taxonomy: Taxonomy = { slugs: [], labels: {} };
  cursor = 0;
  /** Labels toggled for the next decision on the current item. */
  pendingLabels: string[] = [];
  /** Set after a revision conflict: local state may be stale. */
  reloadNeeded = false;

  constructor(
    private readonly api: ApiClient,
    readonly runId: string,
  ) {}

  async load(state = 'all'): Promise<void> {
    const [items, taxonomy] = await Promise.all([
      this.api.discrepancies(this.runId, state),
      this.api.taxonomy(),
    ]);
    // queue order: by document, then offset within it
    items.sort((a, b) =>
      a.doc_id === b.doc_id
        ? a.token_range[0] - b.token_range[0]
        : a.doc_id < b.doc_id
          ? -1
          : 1,
    );
    this.items = items;
    this.taxonomy = taxonomy;
    this.cursor = 0;
    this.pendingLabels = [];
    this.reloadNeeded = false;
  }

  current(): ReviewItem | undefined {
    return this.items[this.cursor];
  }

  next(): void {
    if (this.cursor + 1 < this.items.length) this.cursor += 1;
  }

  prev(): void {
    if (this.cursor > 0) this.cursor -= 1;
  }

  /** Advance to the next open item at or after the cursor, if any. */
  nextOpen(): void {
    for (let i = 0; i < this.items.length; i++) {
      const probe = (this.cursor + i) % this.items.length;
      const item = this.items[probe];
      if (item !== undefined && item.adjudication === 'open') {
        this.cursor = probe;
        return;
      }
    }
  }

  toggleLabel(slot: number): void {
    const slug = this.taxonomy.slugs[slot];
    if (slug === undefined) return;
    const at = this.pendingLabels.indexOf(slug);
    if (at >= 0) {
      this.pendingLabels.splice(at, 1);
    } else {
      this.pendingLabels.push(slug);
    }
  }

  progress(): SessionProgress {
    const byLabel: Record<string, KindCounts> = {};
    let adjudicated = 0;
    let labelTotal = 0;
    for (const item of this.items) {
      if (item.adjudication === 'open') continue;
      adjudicated += 1;
      for (const label of item.taxonomy_labels) {
        const cell = (byLabel[label] ??= { false_negative: 0, false_positive: 0 });
        cell[item.kind] += 1;
        labelTotal += 1;
      }
    }
    return {
      total: this.items.length,
      adjudicated,
      open: this.items.length - adjudicated,
      byLabel,
      labelTotal,
    };
  }

  async adjudicate(
    decision: Decision,
    editedSpan?: [number, number],
  ): Promise<AdjudicateOutcome> {
    const item = this.current();
    if (item === undefined) return { ok: false, conflict: false };
    if (decision === 'edited' && editedSpan === undefined) {
      return { ok: false, conflict: false };
    }
    const before: ReviewItem = { ...item, taxonomy_labels: [...item.taxonomy_labels] };
    const labels = [...this.pendingLabels];

    // optimistic local update
    item.adjudication = decision;
    item.taxonomy_labels = labels;
    item.edited_span = editedSpan ?? null;
    item.revision = before.revision + 1;

    try {
      const confirmed = await this.api.adjudicate(this.runId, item.index, {
        decision,
        revision: before.revision,
        taxonomy_labels: labels,
        ...(editedSpan !== undefined ? { edited_span: editedSpan } : {}),
      });
      item.revision = confirmed.revision;
      this.pendingLabels = [];
      this.nextOpen();
      return { ok: true, conflict: false };
    } catch (error) {
      Object.assign(item, before); // rollback
      if (error instanceof RevisionConflictError) {
        this.reloadNeeded = true;
        return { ok: false, conflict: true };
      }
      throw error;
    }
  }

  exportRun(force: boolean): Promise<ExportResult> {
    return this.api.exportRun(this.runId, force);
  }
}
