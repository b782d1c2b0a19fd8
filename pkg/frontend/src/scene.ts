/**
 * Tiny render-target-independent scene graph. Panels emit these primitives;
 * the SVG writer serializes all of them, the PNG rasterizer draws the
 * geometric ones. Coordinates are already in pixel space.
 */

export interface Stroke {
  color: string;
  width: number;
  dash?: number[];
}

export interface PolylineEl {
  kind: "polyline";
  points: Array<[number, number]>;
  stroke: Stroke;
}

export interface LineEl {
  kind: "line";
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  stroke: Stroke;
}

export interface MarkerEl {
  kind: "marker";
  x: number;
  y: number;
  size: number;
  color: string;
}

export interface TextEl {
  kind: "text";
  x: number;
  y: number;
  text: string;
  size: number;
  anchor: "start" | "middle" | "end";
  color: string;
  rotate?: number;
}

export type Element = PolylineEl | LineEl | MarkerEl | TextEl;

export interface Scene {
  width: number;
  height: number;
  elements: Element[];
}

export const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
];

export const AXIS_COLOR = "#333333";
