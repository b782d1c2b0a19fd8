/** Plot-spec execution: one SVG + one lossless PNG per panel. */

import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { dirname, join, resolve } from "node:path";
import { errorScene, spectrumScene, timeseriesScene } from "./panels.js";
import { plotSpecSchema, type Panel, type PlotSpec } from "./spec.js";
import type { Scene } from "./scene.js";
import { toSvg } from "./svg.js";
import { toPng } from "./png.js";

export class SpecError extends Error {}

export function loadPlotSpec(path: string): PlotSpec {
  let raw: unknown;
  try {
    raw = JSON.parse(readFileSync(path, "utf-8"));
  } catch (err) {
    throw new SpecError(`cannot read plot spec ${path}: ${String(err)}`);
  }
  const parsed = plotSpecSchema.safeParse(raw);
  if (!parsed.success) {
    const issue = parsed.error.issues[0];
    throw new SpecError(`${path}: ${issue.path.join(".")}: ${issue.message}`);
  }
  return parsed.data;
}

function buildScene(panel: Panel, width: number, height: number,
                    baseDir: string): Scene {
  const abs = (p: string) => resolve(baseDir, p);
  switch (panel.kind) {
    case "timeseries":
      return timeseriesScene({ ...panel, csv: abs(panel.csv) }, width, height);
    case "spectrum":
      return spectrumScene({ ...panel, json: abs(panel.json) }, width, height);
    case "error":
      return errorScene({ ...panel, csv: abs(panel.csv) }, width, height);
  }
}

export interface RenderedPanel {
  svgPath: string;
  pngPath: string;
}

/** Pure function of spec + inputs; rerunning overwrites byte-identical files. */
export function renderSpec(specPath: string, outDir: string): RenderedPanel[] {
  const spec = loadPlotSpec(specPath);
  const baseDir = dirname(resolve(specPath));
  mkdirSync(outDir, { recursive: true });
  const out: RenderedPanel[] = [];
  spec.panels.forEach((panel, idx) => {
    const scene = buildScene(panel, spec.width, spec.height, baseDir);
    const stem = `${spec.figure}_panel${idx + 1}`;
    const svgPath = join(outDir, `${stem}.svg`);
    const pngPath = join(outDir, `${stem}.png`);
    writeFileSync(svgPath, toSvg(scene));
    writeFileSync(pngPath, toPng(scene));
    out.push({ svgPath, pngPath });
  });
  return out;
}
