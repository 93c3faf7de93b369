#!/usr/bin/env node
// plotfig: render optimizer trace CSVs into a log-scale convergence
// figure (SVG or PNG).
//
//   plotfig --traces a.csv:LabelA,b.csv:LabelB --y subopt --out fig.svg
//
// The format is taken from the output extension. An existing output
// file is only replaced when --force is given.

import * as fs from 'fs';
import * as path from 'path';
import {parseArgs} from 'util';

import {buildFigure} from './figure';
import {renderPng} from './raster';
import {extractSeries, loadTrace, Series, TraceFormatError} from './schema';
import {renderSvg} from './svg';

const Y_COLUMNS = ['subopt', 'grad_norm', 'fx'];

function fail(message: string): never {
  process.stderr.write(`plotfig: ${message}\n`);
  process.exit(1);
}

export function main(argv: string[]): void {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      options: {
        traces: {type: 'string'},
        y: {type: 'string', default: 'subopt'},
        out: {type: 'string'},
        title: {type: 'string'},
        force: {type: 'boolean', default: false},
      },
      allowPositionals: false,
    });
  } catch (err) {
    fail((err as Error).message);
  }
  const {values} = parsed;
  if (!values.traces) fail('--traces is required (path:Label, comma separated)');
  if (!values.out) fail('--out is required');
  const yColumn = values.y as string;
  if (!Y_COLUMNS.includes(yColumn)) {
    fail(`--y must be one of ${Y_COLUMNS.join(', ')}`);
  }
  const ext = path.extname(values.out).toLowerCase();
  if (ext !== '.svg' && ext !== '.png') {
    fail(`unsupported output format "${ext}"; use .svg or .png`);
  }
  if (fs.existsSync(values.out) && !values.force) {
    fail(`output ${values.out} exists; pass --force to overwrite`);
  }

  const series: Series[] = [];
  for (const entry of (values.traces as string).split(',')) {
    if (!entry) continue;
    const colon = entry.lastIndexOf(':');
    const tracePath = colon >= 0 ? entry.slice(0, colon) : entry;
    const label = colon >= 0 ? entry.slice(colon + 1) : path.basename(entry, '.csv');
    let s: Series;
    try {
      s = extractSeries(loadTrace(tracePath), label, yColumn);
    } catch (err) {
      if (err instanceof TraceFormatError) fail(err.message);
      if ((err as NodeJS.ErrnoException).code) {
        fail(`cannot read ${tracePath}: ${(err as Error).message}`);
      }
      throw err;
    }
    if (s.dropped > 0) {
      process.stderr.write(
        `plotfig: warning: dropped ${s.dropped} rows with missing or ` +
        `non-positive ${yColumn} from ${tracePath}\n`,
      );
    }
    series.push(s);
  }
  if (series.length === 0) fail('no traces given');

  let figure;
  try {
    figure = buildFigure(series, {yLabel: yColumn, title: values.title});
  } catch (err) {
    fail((err as Error).message);
  }
  if (ext === '.svg') {
    fs.writeFileSync(values.out, renderSvg(figure));
  } else {
    fs.writeFileSync(values.out, renderPng(figure));
  }
  process.stdout.write(`wrote ${values.out} (${series.length} series)\n`);
}

if (require.main === module) {
  main(process.argv.slice(2));
}
