/** Wire types mirroring the review API's JSON. */

export type DiscrepancyKind = 'false_positive' | 'false_negative';

export type Decision = 'keep_gold' | 'accept_model' | 'edited';

export type AdjudicationState = 'open' | Decision;

export interface ReviewItem {
  index: number;
  doc_id: string;
  kind: DiscrepancyKind;
  token_range: [number, number];
  surface: string;
  context: string;
  adjudication: AdjudicationState;
  taxonomy_labels: string[];
  edited_span: [number, number] | null;
  revision: number;
}

export interface RunInfo {
  run_id: string;
  total: number;
  open: number;
  adjudicated: number;
}

export interface Taxonomy {
  slugs: string[];
  labels: Record<string, string>;
}

/** Per-document token/label data inside a discrepancy report. */
export interface DocumentData {
  text: string;
  tokens: [number, number][];
  gold: number[];
  pred: number[];
  mask: number[];
}

export interface RunReport {
  run_id: string;
  documents: Record<string, DocumentData>;
  discrepancies: Array<{
    index: number;
    doc_id: string;
    kind: DiscrepancyKind;
    token_range: [number, number];
    surface: string;
    context: string;
  }>;
}

export interface KindCounts {
  false_negative: number;
  false_positive: number;
}

export interface Tallies {
  total: number;
  adjudicated: number;
  open: number;
  by_kind: KindCounts;
  by_label: Record<string, KindCounts>;
}

export interface ExportResult {
  path: string;
  tallies: Tallies;
}

export interface AdjudicationResponse {
  index: number;
  decision: Decision;
  taxonomy_labels: string[];
  edited_span: [number, number] | null;
  revision: number;
}

export interface ContextToken {
  index: number;
  start: number;
  end: number;
  surface: string;
  gold: boolean;
  pred: boolean;
  masked: boolean;
}
