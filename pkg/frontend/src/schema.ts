// Parser for the optimizer trace CSV dialect: `# key=value` metadata
// lines followed by a header row and per-iteration records. Values use
// "NA" for absent fields and 1/0 for booleans. Only the columns named
// in the header are interpreted, so traces may carry extra columns.

import * as fs from 'fs';

export interface TraceRow {
  iter: number;
  values: Map<string, number | null>;
}

export interface Trace {
  meta: Map<string, string>;
  columns: string[];
  rows: TraceRow[];
}

export const REQUIRED_COLUMNS = ['iter', 'fx', 'grad_norm', 'subopt'];

export class TraceFormatError extends Error {}

function parseCell(tok: string): number | null {
  if (tok === 'NA') return null;
  const v = Number(tok);
  if (tok === '' || Number.isNaN(v)) {
    throw new TraceFormatError(`unparseable numeric cell ${JSON.stringify(tok)}`);
  }
  return v;
}

export function parseTrace(text: string, name = '<trace>'): Trace {
  const meta = new Map<string, string>();
  const dataLines: string[] = [];
  for (const raw of text.split(/\r?\n/)) {
    if (raw.startsWith('#')) {
      const body = raw.slice(1).trim();
      const eq = body.indexOf('=');
      if (eq >= 0) meta.set(body.slice(0, eq).trim(), body.slice(eq + 1));
      continue;
    }
    if (raw.trim() !== '') dataLines.push(raw);
  }
  if (dataLines.length === 0) {
    throw new TraceFormatError(`${name}: missing header row`);
  }
  const columns = dataLines[0].split(',').map((c) => c.trim());
  for (const req of REQUIRED_COLUMNS) {
    if (!columns.includes(req)) {
      throw new TraceFormatError(`${name}: missing required column "${req}"`);
    }
  }
  const rows: TraceRow[] = [];
  for (let i = 1; i < dataLines.length; i++) {
    const cells = dataLines[i].split(',');
    if (cells.length !== columns.length) {
      throw new TraceFormatError(
        `${name}: row ${i} has ${cells.length} fields, expected ${columns.length}`,
      );
    }
    const values = new Map<string, number | null>();
    columns.forEach((col, j) => values.set(col, parseCell(cells[j])));
    const iter = values.get('iter');
    if (iter === null || iter === undefined) {
      throw new TraceFormatError(`${name}: row ${i} lacks an iteration number`);
    }
    rows.push({iter, values});
  }
  if (rows.length === 0) {
    throw new TraceFormatError(`${name}: no data rows`);
  }
  return {meta, columns, rows};
}

export function loadTrace(path: string): Trace {
  return parseTrace(fs.readFileSync(path, 'utf8'), path);
}

export interface Series {
  label: string;
  points: Array<{x: number; y: number}>;
  dropped: number; // rows skipped: NA, non-finite, or <= 0 on a log axis
}

export function extractSeries(trace: Trace, label: string, yColumn: string): Series {
  if (!trace.columns.includes(yColumn)) {
    throw new TraceFormatError(`trace "${label}" has no column "${yColumn}"`);
  }
  const points: Array<{x: number; y: number}> = [];
  let dropped = 0;
  for (const row of trace.rows) {
    const y = row.values.get(yColumn);
    if (y === null || y === undefined || !Number.isFinite(y) || y <= 0) {
      dropped++;
      continue;
    }
    points.push({x: row.iter, y});
  }
  return {label, points, dropped};
}
