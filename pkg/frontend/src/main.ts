/** DOM wiring: thin layer over ReviewSession; all logic lives in the
 * importable modules so it stays testable without a browser. */

import { ExportBlockedError, HttpApiClient } from './api.js';
import { contextCells } from './highlight.js';
import { keyToAction } from './keyboard.js';
import { snapToTokens, tokenIndexSpan } from './spanedit.js';
import { ReviewSession } from './store.js';
import type { DocumentData, ReviewItem, RunReport } from './types.js';

const api = new HttpApiClient();
let session: ReviewSession | null = null;
let report: RunReport | null = null;
let editing = false;
let editAnchor: number | null = null;
let editSpan: [number, number] | null = null;
const CONTEXT_WIDTH = 6;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function must(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

async function loadRunList(): Promise<void> {
  const runs = await api.runs();
  const list = must('runs');
  list.replaceChildren();
  for (const run of runs) {
    const button = el('button', 'run-button');
    button.textContent = `${run.run_id} — ${run.adjudicated}/${run.total}`;
    button.addEventListener('click', () => void openRun(run.run_id));
    list.append(button);
  }
  if (runs.length === 0) {
    list.append(el('p', 'empty', 'No discrepancy reports found.'));
  }
}

async function openRun(runId: string): Promise<void> {
  session = new ReviewSession(api, runId);
  await session.load();
  const response = await fetch(`/reports/discrepancies/${runId}.json`).catch(() => null);
  report = response && response.ok ? ((await response.json()) as RunReport) : null;
  must('run-title').textContent = runId;
  render();
}

function doc(item: ReviewItem): DocumentData | null {
  return report?.documents[item.doc_id] ?? null;
}

function renderContext(item: ReviewItem): HTMLElement {
  const container = el('p', 'context');
  const data = doc(item);
  if (!data) {
    container.textContent = item.context;
    return container;
  }
  const cells = contextCells(data, item.token_range, CONTEXT_WIDTH);
  cells.forEach((cell, position) => {
    const classes = ['token'];
    if (cell.gold) classes.push('gold');
    if (cell.pred) classes.push('model');
    if (cell.inRange) classes.push('focus');
    if (cell.masked) classes.push('masked');
    if (editSpan && cell.start >= editSpan[0] && cell.end <= editSpan[1]) {
      classes.push('edit-pick');
    }
    const span = el('span', classes.join(' '), cell.surface);
    span.dataset.index = String(cell.index);
    if (editing) {
      span.addEventListener('click', () => pickEditToken(cell.index));
    }
    container.append(span);
    if (position < cells.length - 1) container.append(document.createTextNode(cell.gap));
  });
  return container;
}

function pickEditToken(index: number): void {
  const item = session?.current();
  const data = item && doc(item);
  if (!item || !data) return;
  if (editAnchor === null) {
    editAnchor = index;
    editSpan = tokenIndexSpan(data.tokens, index, index);
  } else {
    editSpan = tokenIndexSpan(data.tokens, editAnchor, index);
  }
  render();
}

function renderTaxonomy(): HTMLElement {
  const box = el('div', 'taxonomy');
  if (!session) return box;
  session.taxonomy.slugs.forEach((slug, i) => {
    const active = session!.pendingLabels.includes(slug);
    const button = el('button', active ? 'label active' : 'label');
    button.textContent = `${i + 1}. ${session!.taxonomy.labels[slug] ?? slug}`;
    button.addEventListener('click', () => {
      session!.toggleLabel(i);
      render();
    });
    box.append(button);
  });
  return box;
}

function render(): void {
  if (!session) return;
  const queue = must('queue');
  queue.replaceChildren();
  session.items.forEach((item, i) => {
    const card = el('div', i === session!.cursor ? 'card current' : 'card');
    card.append(el('span', `badge ${item.kind}`, item.kind.replace('_', ' ')));
    card.append(el('span', 'surface', item.surface));
    card.append(el('span', `state ${item.adjudication}`, item.adjudication));
    card.addEventListener('click', () => {
      session!.cursor = i;
      render();
    });
    queue.append(card);
  });

  const detail = must('detail');
  detail.replaceChildren();
  const item = session.current();
  if (!item) {
    detail.append(el('p', 'empty', 'No discrepancies in this run.'));
  } else {
    const head = el('div', 'detail-head');
    head.append(el('span', `badge ${item.kind}`, item.kind.replace('_', ' ')));
    head.append(el('span', 'doc', `${item.doc_id} · tokens ${item.token_range[0]}–${item.token_range[1] - 1}`));
    head.append(el('span', 'rev', `rev ${item.revision}`));
    detail.append(head);
    detail.append(renderContext(item));
    detail.append(renderTaxonomy());
    const hint = editing
      ? 'EDIT: click tokens to select, Enter to confirm, Escape to cancel'
      : 'g keep gold · m accept model · e edit span · 1-9 labels · j/k move · x export';
    detail.append(el('p', 'hint', hint));
  }

  const progress = session.progress();
  must('progress').textContent =
    `${progress.adjudicated}/${progress.total} adjudicated` +
    (session.reloadNeeded ? ' — STALE, press r to reload' : '');
}

async function handleExport(): Promise<void> {
  if (!session) return;
  try {
    const result = await session.exportRun(false);
    must('status').textContent = `exported to ${result.path}`;
  } catch (error) {
    if (error instanceof ExportBlockedError) {
      const force = window.confirm(
        `${error.remainingOpen} items still open. Export anyway (open = keep gold)?`,
      );
      if (force) {
        const result = await session.exportRun(true);
        must('status').textContent = `exported (forced) to ${result.path}`;
      }
    } else {
      must('status').textContent = String(error);
    }
  }
}

async function dispatch(key: string): Promise<void> {
  if (!session) return;
  if (key === 'r' && session.reloadNeeded) {
    await session.load();
    render();
    return;
  }
  const action = keyToAction(key, editing);
  switch (action.type) {
    case 'next':
      session.next();
      break;
    case 'prev':
      session.prev();
      break;
    case 'nextOpen':
      session.nextOpen();
      break;
    case 'toggleLabel':
      session.toggleLabel(action.slot);
      break;
    case 'decide':
      await session.adjudicate(action.decision);
      break;
    case 'editMode':
      editing = true;
      editAnchor = null;
      editSpan = null;
      break;
    case 'confirm':
      if (editSpan) {
        await session.adjudicate('edited', editSpan);
      }
      editing = false;
      editAnchor = null;
      editSpan = null;
      break;
    case 'cancel':
      editing = false;
      editAnchor = null;
      editSpan = null;
      break;
    case 'export':
      await handleExport();
      break;
    case 'none':
      return;
  }
  render();
}

window.addEventListener('keydown', (event) => {
  if (event.target instanceof HTMLInputElement) return;
  if (event.ctrlKey || event.metaKey || event.altKey) return;
  void dispatch(event.key);
});

// character-level selections snap to token boundaries
document.addEventListener('mouseup', () => {
  if (!editing || !session) return;
  const item = session.current();
  const data = item && doc(item);
  const selection = window.getSelection();
  if (!item || !data || !selection || selection.isCollapsed) return;
  const anchor = selection.anchorNode?.parentElement?.dataset.index;
  const focus = selection.focusNode?.parentElement?.dataset.index;
  if (anchor === undefined || focus === undefined) return;
  const a = data.tokens[Number(anchor)];
  const b = data.tokens[Number(focus)];
  if (!a || !b) return;
  editSpan = snapToTokens(data.tokens, Math.min(a[0], b[0]), Math.max(a[1], b[1]));
  render();
});

void loadRunList();
