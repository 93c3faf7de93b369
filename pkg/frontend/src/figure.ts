// Figure layout: turns labelled series into an abstract draw list
// (rects, lines, polylines, text) that the SVG and PNG backends render
// identically. The vertical axis is always log-scaled; the horizontal
// axis is the iteration count.

import {Series} from './schema';

export interface Rect {
  kind: 'rect';
  x: number;
  y: number;
  w: number;
  h: number;
  fill: string;
}

export interface Line {
  kind: 'line';
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  color: string;
  width: number;
}

export interface Polyline {
  kind: 'polyline';
  points: Array<{x: number; y: number}>;
  color: string;
  width: number;
}

export interface Text {
  kind: 'text';
  x: number;
  y: number;
  text: string;
  size: number;
  color: string;
  anchor: 'start' | 'middle' | 'end';
}

export type Shape = Rect | Line | Polyline | Text;

export interface Figure {
  width: number;
  height: number;
  shapes: Shape[];
}

export const PALETTE = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b'];

const MARGIN = {left: 72, right: 24, top: 44, bottom: 52};
const AXIS_COLOR = '#333333';
const GRID_COLOR = '#dddddd';
const TEXT_COLOR = '#222222';

function niceStep(span: number, targetTicks: number): number {
  const raw = span / targetTicks;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const mult of [1, 2, 5, 10]) {
    if (mult * mag >= raw) return mult * mag;
  }
  return 10 * mag;
}

function formatPow10(exp: number): string {
  if (exp >= 0 && exp <= 3) return String(Math.pow(10, exp));
  return `1e${exp}`;
}

export interface FigureOptions {
  title?: string;
  yLabel: string;
  width?: number;
  height?: number;
}

export function buildFigure(series: Series[], opts: FigureOptions): Figure {
  if (series.length === 0) throw new Error('need at least one series');
  for (const s of series) {
    if (s.points.length === 0) {
      throw new Error(`series "${s.label}" has no plottable points`);
    }
  }
  const width = opts.width ?? 800;
  const height = opts.height ?? 500;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;

  let xMax = 1;
  let yMin = Infinity;
  let yMax = -Infinity;
  for (const s of series) {
    for (const p of s.points) {
      xMax = Math.max(xMax, p.x);
      yMin = Math.min(yMin, p.y);
      yMax = Math.max(yMax, p.y);
    }
  }
  const eMin = Math.floor(Math.log10(yMin));
  const eMax = Math.ceil(Math.log10(yMax));
  const eSpan = Math.max(1, eMax - eMin);

  const px = (x: number) => MARGIN.left + (x / xMax) * plotW;
  const py = (y: number) =>
    MARGIN.top + plotH - ((Math.log10(y) - eMin) / eSpan) * plotH;

  const shapes: Shape[] = [];
  shapes.push({kind: 'rect', x: 0, y: 0, w: width, h: height, fill: '#ffffff'});

  // Horizontal grid lines and labels at powers of ten. Wide spans only
  // label every few decades to avoid clutter.
  const labelEvery = Math.max(1, Math.ceil(eSpan / 10));
  for (let e = eMin; e <= eMax; e++) {
    const y = py(Math.pow(10, e));
    shapes.push({kind: 'line', x1: MARGIN.left, y1: y, x2: MARGIN.left + plotW, y2: y,
                 color: GRID_COLOR, width: 1});
    if ((e - eMin) % labelEvery === 0) {
      shapes.push({kind: 'text', x: MARGIN.left - 8, y: y + 4, text: formatPow10(e),
                   size: 12, color: TEXT_COLOR, anchor: 'end'});
    }
  }

  const xStep = niceStep(xMax, 6);
  for (let x = 0; x <= xMax + 1e-9; x += xStep) {
    const sx = px(x);
    shapes.push({kind: 'line', x1: sx, y1: MARGIN.top + plotH, x2: sx,
                 y2: MARGIN.top + plotH + 5, color: AXIS_COLOR, width: 1});
    shapes.push({kind: 'text', x: sx, y: MARGIN.top + plotH + 20, text: String(x),
                 size: 12, color: TEXT_COLOR, anchor: 'middle'});
  }

  // Axes frame.
  shapes.push({kind: 'line', x1: MARGIN.left, y1: MARGIN.top, x2: MARGIN.left,
               y2: MARGIN.top + plotH, color: AXIS_COLOR, width: 1});
  shapes.push({kind: 'line', x1: MARGIN.left, y1: MARGIN.top + plotH,
               x2: MARGIN.left + plotW, y2: MARGIN.top + plotH,
               color: AXIS_COLOR, width: 1});

  series.forEach((s, i) => {
    shapes.push({
      kind: 'polyline',
      points: s.points.map((p) => ({x: px(p.x), y: py(p.y)})),
      color: PALETTE[i % PALETTE.length],
      width: 1.5,
    });
  });

  // Legend, top right inside the plot area.
  const legendX = MARGIN.left + plotW - 150;
  series.forEach((s, i) => {
    const ly = MARGIN.top + 14 + i * 18;
    shapes.push({kind: 'line', x1: legendX, y1: ly - 4, x2: legendX + 22, y2: ly - 4,
                 color: PALETTE[i % PALETTE.length], width: 2});
    shapes.push({kind: 'text', x: legendX + 28, y: ly, text: s.label, size: 12,
                 color: TEXT_COLOR, anchor: 'start'});
  });

  if (opts.title) {
    shapes.push({kind: 'text', x: width / 2, y: 24, text: opts.title, size: 15,
                 color: TEXT_COLOR, anchor: 'middle'});
  }
  shapes.push({kind: 'text', x: MARGIN.left + plotW / 2, y: height - 14,
               text: 'iteration', size: 12, color: TEXT_COLOR, anchor: 'middle'});
  shapes.push({kind: 'text', x: 16, y: MARGIN.top - 10, text: opts.yLabel,
               size: 12, color: TEXT_COLOR, anchor: 'start'});

  return {width, height, shapes};
}
