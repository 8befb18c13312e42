/** Geometry-only software rasterizer and PNG encoder for the raster format.

Text ops are skipped; the SVG backend is the fully labeled output, the PNG
backend is a dependency-free bitmap of the same geometry. */

import { deflateSync } from "zlib";
import { Op, Scene } from "./draw";

function parseColor(c: string): [number, number, number] {
  if (c.startsWith("#")) {
    const hex = c.slice(1);
    return [
      parseInt(hex.slice(0, 2), 16),
      parseInt(hex.slice(2, 4), 16),
      parseInt(hex.slice(4, 6), 16),
    ];
  }
  const m = c.match(/rgb\((\d+),(\d+),(\d+)\)/);
  if (m) return [Number(m[1]), Number(m[2]), Number(m[3])];
  const named: Record<string, [number, number, number]> = {
    white: [255, 255, 255],
    black: [0, 0, 0],
    gray: [128, 128, 128],
    none: [255, 255, 255],
  };
  return named[c] ?? [0, 0, 0];
}

class Canvas {
  data: Uint8Array;

  constructor(public width: number, public height: number) {
    this.data = new Uint8Array(width * height * 4);
  }

  set(x: number, y: number, rgb: [number, number, number]) {
    x = Math.round(x);
    y = Math.round(y);
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const i = (y * this.width + x) * 4;
    this.data[i] = rgb[0];
    this.data[i + 1] = rgb[1];
    this.data[i + 2] = rgb[2];
    this.data[i + 3] = 255;
  }

  fillRect(x: number, y: number, w: number, h: number, rgb: [number, number, number]) {
    for (let yy = Math.floor(y); yy < y + h; yy++) {
      for (let xx = Math.floor(x); xx < x + w; xx++) {
        this.set(xx, yy, rgb);
      }
    }
  }

  line(x0: number, y0: number, x1: number, y1: number, rgb: [number, number, number], width: number) {
    // Bresenham with a square pen for width > 1
    let ix0 = Math.round(x0);
    let iy0 = Math.round(y0);
    const ix1 = Math.round(x1);
    const iy1 = Math.round(y1);
    const dx = Math.abs(ix1 - ix0);
    const dy = -Math.abs(iy1 - iy0);
    const sx = ix0 < ix1 ? 1 : -1;
    const sy = iy0 < iy1 ? 1 : -1;
    let err = dx + dy;
    const pen = Math.max(1, Math.round(width));
    const off = Math.floor(pen / 2);
    for (;;) {
      if (pen === 1) this.set(ix0, iy0, rgb);
      else this.fillRect(ix0 - off, iy0 - off, pen, pen, rgb);
      if (ix0 === ix1 && iy0 === iy1) break;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        ix0 += sx;
      }
      if (e2 <= dx) {
        err += dx;
        iy0 += sy;
      }
    }
  }

  disk(cx: number, cy: number, r: number, rgb: [number, number, number]) {
    for (let y = Math.floor(cy - r); y <= cy + r; y++) {
      for (let x = Math.floor(cx - r); x <= cx + r; x++) {
        if ((x - cx) ** 2 + (y - cy) ** 2 <= r * r) this.set(x, y, rgb);
      }
    }
  }
}

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
  head.write(type, 4, "ascii");
  const body = Buffer.concat([head.subarray(4), Buffer.from(data)]);
  const crc = Buffer.alloc(4);
  crc.writeUInt32BE(crc32(body), 0);
  return Buffer.concat([head.subarray(0, 4), body, crc]);
}

export function encodePng(width: number, height: number, rgba: Uint8Array): Buffer {
  const sig = Buffer.from([137, 80, 78, 71, 13, 10, 26, 10]);
  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(width, 0);
  ihdr.writeUInt32BE(height, 4);
  ihdr[8] = 8; // bit depth
  ihdr[9] = 6; // RGBA
  const raw = Buffer.alloc(height * (width * 4 + 1));
  for (let y = 0; y < height; y++) {
    raw[y * (width * 4 + 1)] = 0; // filter: none
    rgba
      .subarray(y * width * 4, (y + 1) * width * 4)
      .forEach((v, i) => (raw[y * (width * 4 + 1) + 1 + i] = v));
  }
  return Buffer.concat([
    sig,
    chunk("IHDR", ihdr),
    chunk("IDAT", deflateSync(raw)),
    chunk("IEND", new Uint8Array(0)),
  ]);
}

export function renderPng(scene: Scene): Buffer {
  const canvas = new Canvas(scene.width, scene.height);
  canvas.fillRect(0, 0, scene.width, scene.height, parseColor(scene.background));
  for (const op of scene.ops) {
    switch (op.kind) {
      case "rect":
        canvas.fillRect(op.x, op.y, Math.max(1, op.w), Math.max(1, op.h), parseColor(op.fill));
        break;
      case "line": {
        const rgb = parseColor(op.stroke);
        for (let i = 1; i < op.points.length; i++) {
          const [x0, y0] = op.points[i - 1];
          const [x1, y1] = op.points[i];
          canvas.line(x0, y0, x1, y1, rgb, op.width);
        }
        break;
      }
      case "circle":
        canvas.disk(op.x, op.y, op.r, parseColor(op.fill));
        break;
      case "text":
        break; // raster output carries geometry only
    }
  }
  return encodePng(scene.width, scene.height, canvas.data);
}

export type Rgb = [number, number, number];
export { parseColor };
