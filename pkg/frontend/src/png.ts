/**
 * Minimal lossless PNG writer plus a scanline rasterizer for the scene's
 * geometric primitives (axis lines, series polylines, scatter markers; text
 * lives in the SVG twin). No native dependencies: the IDAT stream comes
 * from node's zlib with fixed settings, so output bytes are stable.
 */

import { deflateSync, constants } from "node:zlib";
import type { Element, Scene, Stroke } from "./scene.js";

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) {
      c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    }
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(buf: Uint8Array): number {
  let c = 0xffffffff;
  for (const byte of buf) {
    c = CRC_TABLE[(c ^ byte) & 0xff] ^ (c >>> 8);
  }
  return (c ^ 0xffffffff) >>> 0;
}

function chunk(type: string, data: Uint8Array): Buffer {
  const head = Buffer.alloc(8);
  head.writeUInt32BE(data.length, 0);
  head.write(type, 4, "ascii");
  const body = Buffer.concat([head.subarray(4), data]);
  const crc = Buffer.alloc(4);
  crc.writeUInt32BE(crc32(body), 0);
  return Buffer.concat([head.subarray(0, 4), body, crc]);
}

export class Raster {
  readonly width: number;
  readonly height: number;
  private px: Uint8Array; // RGB, row-major

  constructor(width: number, height: number) {
    this.width = width;
    this.height = height;
    this.px = new Uint8Array(width * height * 3).fill(255);
  }

  set(x: number, y: number, rgb: [number, number, number]): void {
    const xi = Math.round(x);
    const yi = Math.round(y);
    if (xi < 0 || yi < 0 || xi >= this.width || yi >= this.height) return;
    const o = (yi * this.width + xi) * 3;
    this.px[o] = rgb[0];
    this.px[o + 1] = rgb[1];
    this.px[o + 2] = rgb[2];
  }

  /** Bresenham with optional on/off dash pattern measured in pixels. */
  line(x1: number, y1: number, x2: number, y2: number,
       rgb: [number, number, number], dash?: number[]): void {
    let x = Math.round(x1);
    let y = Math.round(y1);
    const xe = Math.round(x2);
    const ye = Math.round(y2);
    const dx = Math.abs(xe - x);
    const dy = -Math.abs(ye - y);
    const sx = x < xe ? 1 : -1;
    const sy = y < ye ? 1 : -1;
    let err = dx + dy;
    let travelled = 0;
    const period = dash ? dash.reduce((a, b) => a + b, 0) : 0;
    for (;;) {
      const draw = !dash || travelled % period < dash[0];
      if (draw) this.set(x, y, rgb);
      if (x === xe && y === ye) break;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x += sx;
        travelled += 1;
      }
      if (e2 <= dx) {
        err += dx;
        y += sy;
        travelled += 1;
      }
    }
  }

  square(x: number, y: number, size: number, rgb: [number, number, number]): void {
    const h = Math.max(1, Math.round(size / 2));
    for (let dy = -h; dy <= h; dy++) {
      for (let dx = -h; dx <= h; dx++) {
        this.set(x + dx, y + dy, rgb);
      }
    }
  }

  encode(): Buffer {
    const stride = this.width * 3;
    const raw = Buffer.alloc((stride + 1) * this.height);
    for (let y = 0; y < this.height; y++) {
      raw[y * (stride + 1)] = 0; // filter type 0
      Buffer.from(this.px.subarray(y * stride, (y + 1) * stride)).copy(
        raw, y * (stride + 1) + 1);
    }
    const ihdr = Buffer.alloc(13);
    ihdr.writeUInt32BE(this.width, 0);
    ihdr.writeUInt32BE(this.height, 4);
    ihdr[8] = 8;  // bit depth
    ihdr[9] = 2;  // color type: truecolor
    const idat = deflateSync(raw, { level: constants.Z_BEST_COMPRESSION });
    return Buffer.concat([
      Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]),
      chunk("IHDR", ihdr),
      chunk("IDAT", idat),
      chunk("IEND", new Uint8Array(0)),
    ]);
  }
}

function hexToRgb(hex: string): [number, number, number] {
  const v = parseInt(hex.slice(1), 16);
  return [(v >> 16) & 0xff, (v >> 8) & 0xff, v & 0xff];
}

function drawElement(raster: Raster, el: Element): void {
  switch (el.kind) {
    case "polyline": {
      const rgb = hexToRgb(el.stroke.color);
      for (let i = 1; i < el.points.length; i++) {
        raster.line(el.points[i - 1][0], el.points[i - 1][1],
                    el.points[i][0], el.points[i][1], rgb, el.stroke.dash);
      }
      break;
    }
    case "line":
      raster.line(el.x1, el.y1, el.x2, el.y2, hexToRgb(el.stroke.color),
                  el.stroke.dash);
      break;
    case "marker":
      raster.square(el.x, el.y, el.size, hexToRgb(el.color));
      break;
    case "text":
      break; // labels live in the SVG output
  }
}

export function toPng(scene: Scene): Buffer {
  const raster = new Raster(scene.width, scene.height);
  for (const el of scene.elements) {
    drawElement(raster, el);
  }
  return raster.encode();
}
