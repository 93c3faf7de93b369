// PNG backend: a small software rasterizer (Bresenham strokes plus a
// segment-based glyph font) and a minimal PNG encoder. Deterministic:
// the same figure always encodes to the same bytes.

import * as zlib from 'zlib';

import {Figure, Shape} from './figure';

type Seg = [number, number, number, number];

// Glyphs live on a 4x6 box (origin top left, baseline at y=6), built
// from straight segments in the style of a segmented display.
const A: Seg = [0, 0, 4, 0];
const B: Seg = [4, 0, 4, 3];
const C: Seg = [4, 3, 4, 6];
const D: Seg = [0, 6, 4, 6];
const E: Seg = [0, 3, 0, 6];
const F: Seg = [0, 0, 0, 3];
const G: Seg = [0, 3, 4, 3];

const GLYPHS: Record<string, Seg[]> = {
  '0': [A, B, C, D, E, F],
  '1': [[2, 0, 2, 6]],
  '2': [A, B, G, E, D],
  '3': [A, B, G, C, D],
  '4': [F, G, B, C],
  '5': [A, F, G, C, D],
  '6': [A, F, G, E, D, C],
  '7': [A, B, C],
  '8': [A, B, C, D, E, F, G],
  '9': [A, B, C, D, F, G],
  'A': [A, B, C, E, F, G],
  'B': [A, B, C, D, E, F, G],
  'C': [A, D, E, F],
  'D': [B, C, D, E, G],
  'E': [A, D, E, F, G],
  'F': [A, E, F, G],
  'G': [A, C, D, E, F, [2, 3, 4, 3]],
  'H': [B, C, E, F, G],
  'I': [A, D, [2, 0, 2, 6]],
  'J': [B, C, D, E],
  'K': [E, F, [0, 3, 4, 0], [0, 3, 4, 6]],
  'L': [D, E, F],
  'M': [B, C, E, F, [0, 0, 2, 3], [4, 0, 2, 3]],
  'N': [B, C, E, F, [0, 0, 4, 6]],
  'O': [A, B, C, D, E, F],
  'P': [A, B, E, F, G],
  'Q': [A, B, C, D, E, F, [2, 4, 4, 6]],
  'R': [A, B, E, F, G, [2, 3, 4, 6]],
  'S': [A, F, G, C, D],
  'T': [A, [2, 0, 2, 6]],
  'U': [B, C, D, E, F],
  'V': [[0, 0, 2, 6], [4, 0, 2, 6]],
  'W': [B, C, E, F, [0, 6, 2, 3], [4, 6, 2, 3]],
  'X': [[0, 0, 4, 6], [4, 0, 0, 6]],
  'Y': [[0, 0, 2, 3], [4, 0, 2, 3], [2, 3, 2, 6]],
  'Z': [A, D, [4, 0, 0, 6]],
  '-': [G],
  '+': [G, [2, 1, 2, 5]],
  '.': [[1, 6, 2, 6]],
  ',': [[2, 5, 1, 7]],
  ':': [[2, 2, 2, 2], [2, 5, 2, 5]],
  '/': [[4, 0, 0, 6]],
  '(': [[3, 0, 1, 2], [1, 2, 1, 4], [1, 4, 3, 6]],
  ')': [[1, 0, 3, 2], [3, 2, 3, 4], [3, 4, 1, 6]],
  '_': [D],
  '=': [[0, 2, 4, 2], [0, 4, 4, 4]],
  ' ': [],
};

function parseColor(c: string): [number, number, number] {
  const hex = c.replace('#', '');
  return [
    parseInt(hex.slice(0, 2), 16),
    parseInt(hex.slice(2, 4), 16),
    parseInt(hex.slice(4, 6), 16),
  ];
}

class Canvas {
  data: Uint8Array;

  constructor(readonly width: number, readonly height: number) {
    this.data = new Uint8Array(width * height * 3);
  }

  set(x: number, y: number, rgb: [number, number, number]) {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const o = (y * this.width + x) * 3;
    this.data[o] = rgb[0];
    this.data[o + 1] = rgb[1];
    this.data[o + 2] = rgb[2];
  }

  fillRect(x: number, y: number, w: number, h: number, rgb: [number, number, number]) {
    const x1 = Math.max(0, Math.round(x));
    const y1 = Math.max(0, Math.round(y));
    const x2 = Math.min(this.width, Math.round(x + w));
    const y2 = Math.min(this.height, Math.round(y + h));
    for (let yy = y1; yy < y2; yy++) {
      for (let xx = x1; xx < x2; xx++) this.set(xx, yy, rgb);
    }
  }

  stamp(x: number, y: number, r: number, rgb: [number, number, number]) {
    for (let dy = -r; dy <= r; dy++) {
      for (let dx = -r; dx <= r; dx++) this.set(x + dx, y + dy, rgb);
    }
  }

  line(x1: number, y1: number, x2: number, y2: number, width: number,
       rgb: [number, number, number]) {
    // Bresenham with a square pen for widths above one pixel.
    let x = Math.round(x1);
    let y = Math.round(y1);
    const ex = Math.round(x2);
    const ey = Math.round(y2);
    const dx = Math.abs(ex - x);
    const dy = -Math.abs(ey - y);
    const sx = x < ex ? 1 : -1;
    const sy = y < ey ? 1 : -1;
    let err = dx + dy;
    const r = width > 1.25 ? 1 : 0;
    for (;;) {
      if (r > 0) this.stamp(x, y, r, rgb);
      else this.set(x, y, rgb);
      if (x === ex && y === ey) break;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y += sy;
      }
    }
  }

  text(x: number, y: number, s: string, size: number,
       anchor: 'start' | 'middle' | 'end', rgb: [number, number, number]) {
    const scale = size / 9;
    const advance = 6 * scale;
    const total = s.length * advance - 2 * scale;
    let cx = x;
    if (anchor === 'middle') cx -= total / 2;
    else if (anchor === 'end') cx -= total;
    for (const ch of s) {
      const glyph = GLYPHS[ch.toUpperCase()] ?? GLYPHS['.'];
      for (const [gx1, gy1, gx2, gy2] of glyph) {
        this.line(
          cx + gx1 * scale, y - (6 - gy1) * scale,
          cx + gx2 * scale, y - (6 - gy2) * scale,
          1, rgb,
        );
      }
      cx += advance;
    }
  }
}

function drawShape(cv: Canvas, s: Shape) {
  switch (s.kind) {
    case 'rect':
      cv.fillRect(s.x, s.y, s.w, s.h, parseColor(s.fill));
      break;
    case 'line':
      cv.line(s.x1, s.y1, s.x2, s.y2, s.width, parseColor(s.color));
      break;
    case 'polyline': {
      const rgb = parseColor(s.color);
      for (let i = 1; i < s.points.length; i++) {
        cv.line(s.points[i - 1].x, s.points[i - 1].y,
                s.points[i].x, s.points[i].y, s.width, rgb);
      }
      break;
    }
    case 'text':
      cv.text(s.x, s.y, s.text, s.size, s.anchor, parseColor(s.color));
      break;
  }
}

// --- minimal PNG encoder (8-bit RGB, no interlace) ---

const CRC_TABLE = (() => {
  const t = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    t[n] = c >>> 0;
  }
  return t;
})();

function crc32(buf: Uint8Array): number {
  let c = 0xffffffff;
  for (const b of buf) c = CRC_TABLE[(c ^ b) & 0xff] ^ (c >>> 8);
  return (c ^ 0xffffffff) >>> 0;
}

function chunk(type: string, data: Uint8Array): Buffer {
  const head = Buffer.alloc(8);
  head.writeUInt32BE(data.length, 0);
  head.write(type, 4, 'ascii');
  const body = Buffer.concat([Buffer.from(type, 'ascii'), Buffer.from(data)]);
  const tail = Buffer.alloc(4);
  tail.writeUInt32BE(crc32(body), 0);
  return Buffer.concat([head, Buffer.from(data), tail]);
}

export function encodePng(cv: Canvas): Buffer {
  const {width, height, data} = cv;
  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(width, 0);
  ihdr.writeUInt32BE(height, 4);
  ihdr[8] = 8; // bit depth
  ihdr[9] = 2; // color type RGB
  const raw = Buffer.alloc(height * (width * 3 + 1));
  for (let y = 0; y < height; y++) {
    const o = y * (width * 3 + 1);
    raw[o] = 0; // filter none
    raw.set(data.subarray(y * width * 3, (y + 1) * width * 3), o + 1);
  }
  const idat = zlib.deflateSync(raw, {level: 9});
  return Buffer.concat([
    Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]),
    chunk('IHDR', ihdr),
    chunk('IDAT', idat),
    chunk('IEND', new Uint8Array(0)),
  ]);
}

export function renderPng(fig: Figure): Buffer {
  const cv = new Canvas(fig.width, fig.height);
  cv.fillRect(0, 0, fig.width, fig.height, [255, 255, 255]);
  for (const s of fig.shapes) drawShape(cv, s);
  return encodePng(cv);
}

export {Canvas};
