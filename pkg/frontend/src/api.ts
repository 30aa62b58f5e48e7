/** Typed client for the review API. All mutation goes through adjudicate. */

import type {
  AdjudicationResponse,
  ContextToken,
  Decision,
  ExportResult,
  ReviewItem,
  RunInfo,
  Tallies,
  Taxonomy,
} from './types.js';

export interface AdjudicationRequest {
  decision: Decision;
  revision: number;
  taxonomy_labels: string[];
  edited_span?: [number, number];
}

export interface ApiClient {
  runs(): Promise<RunInfo[]>;
  taxonomy(): Promise<Taxonomy>;
  discrepancies(runId: string, state?: string): Promise<ReviewItem[]>;
  adjudicate(
    runId: string,
    index: number,
    body: AdjudicationRequest,
  ): Promise<AdjudicationResponse>;
  context(
    runId: string,
    docId: string,
    center: number,
    width: number,
  ): Promise<{ tokens: ContextToken[] }>;
  tallies(runId: string): Promise<Tallies>;
  exportRun(runId: string, force: boolean): Promise<ExportResult>;
}

/** Another session adjudicated the item first; reload before retrying. */
export class RevisionConflictError extends Error {
  constructor(readonly currentRevision: number) {
    super(`stale revision; server is at ${currentRevision}`);
  }
}

/** Export refused because open items remain (and force was not set). */
export class ExportBlockedError extends Error {
  constructor(readonly remainingOpen: number) {
    super(`${remainingOpen} discrepancies still open`);
  }
}

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    throw new Error(`${response.status}: ${await response.text()}`);
  }
  return (await response.json()) as T;
}

export class HttpApiClient implements ApiClient {
  constructor(private readonly base: string = '') {}

  runs(): Promise<RunInfo[]> {
    return fetch(`${this.base}/runs`).then((r) => asJson<RunInfo[]>(r));
  }

  taxonomy(): Promise<Taxonomy> {
    return fetch(`${this.base}/taxonomy`).then((r) => asJson<Taxonomy>(r));
  }

  discrepancies(runId: string, state = 'all'): Promise<ReviewItem[]> {
    const url = `${this.base}/runs/${encodeURIComponent(runId)}/discrepancies?state=${state}`;
    return fetch(url).then((r) => asJson<ReviewItem[]>(r));
  }

  async adjudicate(
    runId: string,
    index: number,
    body: AdjudicationRequest,
  ): Promise<AdjudicationResponse> {
    const url = `${this.base}/runs/${encodeURIComponent(runId)}/discrepancies/${index}/adjudicate`;
    const response = await fetch(url, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
    if (response.status === 409) {
      const detail = (await response.json()) as {
        detail: { current_revision: number };
      };
      throw new RevisionConflictError(detail.detail.current_revision);
    }
    return asJson<AdjudicationResponse>(response);
  }

  context(
    runId: string,
    docId: string,
    center: number,
    width: number,
  ): Promise<{ tokens: ContextToken[] }> {
    const url =
      `${this.base}/runs/${encodeURIComponent(runId)}/documents/` +
      `${encodeURIComponent(docId)}/context?center=${center}&width=${width}`;
    return fetch(url).then((r) => asJson<{ tokens: ContextToken[] }>(r));
  }

  tallies(runId: string): Promise<Tallies> {
    const url = `${this.base}/runs/${encodeURIComponent(runId)}/tallies`;
    return fetch(url).then((r) => asJson<Tallies>(r));
  }

  async exportRun(runId: string, force: boolean): Promise<ExportResult> {
    const url = `${this.base}/runs/${encodeURIComponent(runId)}/export`;
    const response = await fetch(url, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ force }),
    });
    if (response.status === 409) {
      const detail = (await response.json()) as {
        detail: { remaining_open: number };
      };
      throw new ExportBlockedError(detail.detail.remaining_open);
    }
    return asJson<ExportResult>(response);
  }
}
