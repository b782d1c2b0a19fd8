/**
 * Panel builders: artifact data -> scene primitives. The site-line
 * convention follows the figures being reproduced: sites j <= N/2 solid,
 * j > N/2 dashed.
 */

import { readFileSync } from "node:fs";
import { scaleLinear, scaleLog } from "d3-scale";
import { parseCsv, requireColumn, siteColumns, SchemaError } from "./csv.js";
import type { ErrorPanel, SpectrumPanel, TimeseriesPanel } from "./spec.js";
import { spectrumJsonSchema } from "./spec.js";
import { AXIS_COLOR, PALETTE, type Element, type Scene } from "./scene.js";

const MARGIN = { left: 58, right: 14, top: 28, bottom: 42 };
const DASH = [6, 4];

interface Frame {
  x: (v: number) => number;
  y: (v: number) => number;
  elements: Element[];
}

function axes(width: number, height: number, title: string,
              xDomain: [number, number], yDomain: [number, number],
              xLabel: string, yLabel: string,
              opts: { logY?: boolean } = {}): Frame {
  const x0 = MARGIN.left;
  const x1 = width - MARGIN.right;
  const y0 = height - MARGIN.bottom;
  const y1 = MARGIN.top;
  const sx = scaleLinear().domain(xDomain).range([x0, x1]);
  const sy = opts.logY
    ? scaleLog().domain(yDomain).range([y0, y1])
    : scaleLinear().domain(yDomain).range([y0, y1]);

  const els: Element[] = [];
  const stroke = { color: AXIS_COLOR, width: 1 };
  els.push({ kind: "line", x1: x0, y1: y0, x2: x1, y2: y0, stroke });
  els.push({ kind: "line", x1: x0, y1: y0, x2: x0, y2: y1, stroke });
  els.push({ kind: "text", x: (x0 + x1) / 2, y: 16, text: title, size: 13,
             anchor: "middle", color: AXIS_COLOR });
  els.push({ kind: "text", x: (x0 + x1) / 2, y: height - 8, text: xLabel,
             size: 11, anchor: "middle", color: AXIS_COLOR });
  els.push({ kind: "text", x: 14, y: (y0 + y1) / 2, text: yLabel, size: 11,
             anchor: "middle", color: AXIS_COLOR, rotate: -90 });

  for (const t of sx.ticks(6)) {
    const px = sx(t);
    els.push({ kind: "line", x1: px, y1: y0, x2: px, y2: y0 + 4, stroke });
    els.push({ kind: "text", x: px, y: y0 + 16, text: fmtTick(t), size: 10,
               anchor: "middle", color: AXIS_COLOR });
  }
  const yTicks = opts.logY ? sy.ticks(5) : sy.ticks(6);
  for (const t of yTicks) {
    const py = sy(t);
    els.push({ kind: "line", x1: x0 - 4, y1: py, x2: x0, y2: py, stroke });
    els.push({ kind: "text", x: x0 - 6, y: py + 3, text: fmtTick(t), size: 10,
               anchor: "end", color: AXIS_COLOR });
  }
  return { x: (v) => sx(v), y: (v) => sy(v), elements: els };
}

function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 0.01 && a < 10000) {
    return String(Math.round(v * 1000) / 1000);
  }
  return v.toExponential(0).replace("+", "");
}

export function timeseriesScene(panel: TimeseriesPanel, width: number,
                                height: number): Scene {
  const table = parseCsv(panel.csv);
  const t = requireColumn(table, panel.x, panel.csv);
  const names = siteColumns(table, panel.seriesPrefix);
  const nSites = names.length;

  const [tLo, tHi] = panel.xRange ?? [t[0], t[t.length - 1]];
  const sel: number[] = [];
  t.forEach((v, i) => {
    if (v >= tLo && v <= tHi) sel.push(i);
  });
  if (sel.length < 2) {
    throw new SchemaError(`${panel.csv}: x range [${tLo}, ${tHi}] selects fewer than 2 samples`);
  }
  let yMax = 0;
  for (const name of names) {
    const col = table.columns.get(name)!;
    for (const i of sel) yMax = Math.max(yMax, Math.abs(col[i]));
  }
  if (yMax === 0) yMax = 1;

  const frame = axes(width, height, panel.title, [tLo, tHi],
                     [-1.1 * yMax, 1.1 * yMax], "t", panel.yLabel);
  const elements = [...frame.elements];
  names.forEach((name, j) => {
    const col = table.columns.get(name)!;
    const points = sel.map((i) => [frame.x(t[i]), frame.y(col[i])] as [number, number]);
    const solid = j + 1 <= nSites / 2; // solid left half, dashed right half
    elements.push({
      kind: "polyline",
      points,
      stroke: {
        color: PALETTE[j % PALETTE.length],
        width: 1.3,
        dash: solid ? undefined : DASH,
      },
    });
    elements.push({
      kind: "text",
      x: width - MARGIN.right - 4,
      y: MARGIN.top + 12 * (j + 1),
      text: `j=${j + 1}${solid ? "" : " (dashed)"}`,
      size: 9,
      anchor: "end",
      color: PALETTE[j % PALETTE.length],
    });
  });
  return { width, height, elements };
}

export function spectrumScene(panel: SpectrumPanel, width: number,
                              height: number): Scene {
  const raw = JSON.parse(readFileSync(panel.json, "utf-8"));
  const parsed = spectrumJsonSchema.safeParse(raw);
  if (!parsed.success) {
    throw new SchemaError(`${panel.json}: ${parsed.error.issues[0].message}`);
  }
  const results = parsed.data.results;
  const eigs = results.flatMap((r) => r.eigenvalues);
  if (eigs.length === 0) {
    throw new SchemaError(`${panel.json}: no eigenvalues`);
  }
  const reMin = Math.min(...eigs.map((e) => e.re));
  const imAbs = Math.max(...eigs.map((e) => Math.abs(e.im)), 1e-6);
  const frame = axes(width, height, panel.title,
                     [1.15 * reMin - 1e-4, 0.02 * Math.abs(reMin) + 1e-5],
                     [-1.15 * imAbs, 1.15 * imAbs], "Re", "Im");
  const elements = [...frame.elements];
  results.forEach((row, k) => {
    const color = PALETTE[k % PALETTE.length];
    for (const e of row.eigenvalues) {
      elements.push({ kind: "marker", x: frame.x(e.re), y: frame.y(e.im),
                      size: 6, color });
    }
    elements.push({
      kind: "text",
      x: MARGIN.left + 8,
      y: MARGIN.top + 12 * (k + 1),
      text: `eps=${row.epsilon.toFixed(4)}`,
      size: 9,
      anchor: "start",
      color,
    });
  });
  return { width, height, elements };
}

export function errorScene(panel: ErrorPanel, width: number,
                           height: number): Scene {
  const table = parseCsv(panel.csv);
  const t = requireColumn(table, panel.x, panel.csv);
  const e = requireColumn(table, panel.y, panel.csv);
  const floor = 1e-16;
  const vals = e.map((v) => Math.max(v, floor));
  const lo = Math.min(...vals);
  const hi = Math.max(...vals);
  const frame = axes(width, height, panel.title, [t[0], t[t.length - 1]],
                     [Math.max(lo / 2, floor), Math.max(hi * 2, 2 * floor)],
                     "t", panel.y, { logY: panel.logY });
  const elements = [...frame.elements];
  const points = t.map((v, i) => [frame.x(v), frame.y(vals[i])] as [number, number]);
  elements.push({ kind: "polyline", points, stroke: { color: PALETTE[0], width: 1.3 } });
  return { width, height, elements };
}
