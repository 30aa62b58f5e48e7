import { describe, expect, it } from 'vitest';

import { ReviewSession } from '../src/store.js';
import { MockApi } from './mockApi.js';
import { runReport, taxonomy } from './fixtures.js';

function freshSession() {
  const api = new MockApi(runReport(), taxonomy());
  return { api, session: new ReviewSession(api, 'run') };
}

describe('review session', () => {
  it('orders the queue by document then offset', async () => {
    const { session } = freshSession();
    await session.load();
    for (let i = 1; i < session.items.length; i++) {
      const prev = session.items[i - 1]!;
      const cur = session.items[i]!;
      const ordered =
        prev.doc_id < cur.doc_id ||
        (prev.doc_id === cur.doc_id && prev.token_range[0] <= cur.token_range[0]);
      expect(ordered).toBe(true);
    }
  });

  it('open filter hides adjudicated items', async () => {
    const { api, session } = freshSession();
    await session.load();
    await session.adjudicate('keep_gold');
    const open = await api.discrepancies('run', 'open');
    expect(open.length).toBe(session.items.length - 1);
  });

  it('adjudication is optimistic and confirmed by the server revision', async () => {
    const { session } = freshSession();
    await session.load();
    const item = session.current()!;
    session.toggleLabel(0);
    const outcome = await session.adjudicate('keep_gold');
    expect(outcome).toEqual({ ok: true, conflict: false });
    expect(item.adjudication).toBe('keep_gold');
    expect(item.revision).toBe(1);
    expect(item.taxonomy_labels).toEqual([session.taxonomy.slugs[0]]);
    expect(session.pendingLabels).toEqual([]);
  });

  it('rolls back and flags reload on revision conflict', async () => {
    const { api, session } = freshSession();
    await session.load();
    const item = session.current()!;
    // another session wins the race
    await api.adjudicate('run', item.index, {
      decision: 'accept_model',
      revision: 0,
      taxonomy_labels: [],
    });
    const outcome = await session.adjudicate('keep_gold');
    expect(outcome).toEqual({ ok: false, conflict: true });
    expect(item.adjudication).toBe('open'); // rolled back to what we knew
    expect(item.revision).toBe(0);
    expect(session.reloadNeeded).toBe(true);
    await session.load();
    expect(session.reloadNeeded).toBe(false);
    const reloaded = session.items.find((i) => i.index === item.index)!;
    expect(reloaded.adjudication).toBe('accept_model');
    expect(reloaded.revision).toBe(1);
  });

  it('reload reproduces server state exactly', async () => {
    const { api, session } = freshSession();
    await session.load();
    session.toggleLabel(2);
    await session.adjudicate('accept_model');
    await session.adjudicate('keep_gold');
    const fresh = new ReviewSession(api, 'run');
    await fresh.load();
    expect(fresh.items).toEqual(session.items);
  });

  it('edited decision requires a span', async () => {
    const { session } = freshSession();
    await session.load();
    const outcome = await session.adjudicate('edited');
    expect(outcome.ok).toBe(false);
    expect(session.current()!.adjudication).toBe('open');
  });

  it('progress counts multi-label tallies past adjudicated', async () => {
    const { session } = freshSession();
    await session.load();
    session.toggleLabel(0);
    session.toggleLabel(1);
    await session.adjudicate('keep_gold');
    const progress = session.progress();
    expect(progress.adjudicated).toBe(1);
    expect(progress.labelTotal).toBe(2);
    expect(progress.open).toBe(progress.total - 1);
  });

  it('nextOpen skips adjudicated items', async () => {
    const { session } = freshSession();
    await session.load();
    await session.adjudicate('keep_gold'); // advances to next open
    expect(session.current()!.adjudication).toBe('open');
    expect(session.cursor).toBe(1);
  });
});
