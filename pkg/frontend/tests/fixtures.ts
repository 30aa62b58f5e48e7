import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';

import type { ExportResult, RunReport, Taxonomy } from '../src/types.js';

const here = dirname(fileURLToPath(import.meta.url));

function load<T>(name: string): T {
  return JSON.parse(readFileSync(join(here, 'fixtures', name), 'utf-8')) as T;
}

export const runReport = (): RunReport => load<RunReport>('run.json');
export const taxonomy = (): Taxonomy => load<Taxonomy>('taxonomy.json');
export const expectedExport = (): ExportResult => load<ExportResult>('expected_export.json');
