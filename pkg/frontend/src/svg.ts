// SVG backend. Coordinates are emitted with two decimal places so that
// identical figures serialize to identical bytes.

import {Figure, Shape} from './figure';

function n(v: number): string {
  return v.toFixed(2).replace(/\.00$/, '');
}

function esc(s: string): string {
  return s.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;');
}

function shape(s: Shape): string {
  switch (s.kind) {
    case 'rect':
      return `<rect x="${n(s.x)}" y="${n(s.y)}" width="${n(s.w)}" height="${n(s.h)}" fill="${s.fill}"/>`;
    case 'line':
      return `<line x1="${n(s.x1)}" y1="${n(s.y1)}" x2="${n(s.x2)}" y2="${n(s.y2)}" stroke="${s.color}" stroke-width="${n(s.width)}"/>`;
    case 'polyline': {
      const pts = s.points.map((p) => `${n(p.x)},${n(p.y)}`).join(' ');
      return `<polyline points="${pts}" fill="none" stroke="${s.color}" stroke-width="${n(s.width)}"/>`;
    }
    case 'text':
      return (
        `<text x="${n(s.x)}" y="${n(s.y)}" font-family="Helvetica,Arial,sans-serif" ` +
        `font-size="${n(s.size)}" fill="${s.color}" text-anchor="${s.anchor}">${esc(s.text)}</text>`
      );
  }
}

export function renderSvg(fig: Figure): string {
  const body = fig.shapes.map(shape).join('\n  ');
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${fig.width}" height="${fig.height}" ` +
    `viewBox="0 0 ${fig.width} ${fig.height}">\n  ${body}\n</svg>\n`
  );
}
