/** Plot-spec schema: which artifacts feed which panels, validated up front. */

import { z } from "zod";

export const timeseriesPanel = z.object({
  kind: z.literal("timeseries"),
  csv: z.string(),
  title: z.string(),
  x: z.string().default("t"),
  seriesPrefix: z.string().default("Sx_"),
  xRange: z.tuple([z.number(), z.number()]).optional(),
  yLabel: z.string().default("<S_j^x>"),
});

export const spectrumPanel = z.object({
  kind: z.literal("spectrum"),
  json: z.string(),
  title: z.string(),
});

export const errorPanel = z.object({
  kind: z.literal("error"),
  csv: z.string(),
  title: z.string(),
  x: z.string().default("t"),
  y: z.string(),
  logY: z.boolean().default(true),
});

export const panelSchema = z.discriminatedUnion("kind", [
  timeseriesPanel,
  spectrumPanel,
  errorPanel,
]);

export const plotSpecSchema = z.object({
  figure: z.string(),
  width: z.number().int().positive().default(560),
  height: z.number().int().positive().default(380),
  panels: z.array(panelSchema).min(1),
});

export type PlotSpec = z.infer<typeof plotSpecSchema>;
export type Panel = z.infer<typeof panelSchema>;
export type TimeseriesPanel = z.infer<typeof timeseriesPanel>;
export type SpectrumPanel = z.infer<typeof spectrumPanel>;
export type ErrorPanel = z.infer<typeof errorPanel>;

export const spectrumJsonSchema = z.object({
  delta_m: z.number(),
  k: z.number(),
  results: z.array(
    z.object({
      epsilon: z.number(),
      method: z.string(),
      eigenvalues: z.array(
        z.object({
          re: z.number(),
          im: z.number(),
          delta_m: z.number(),
          residual: z.number(),
        }),
      ),
    }),
  ),
});
export type SpectrumJson = z.infer<typeof spectrumJsonSchema>;
