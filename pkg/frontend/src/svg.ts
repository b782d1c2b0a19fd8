/** Deterministic SVG serialization: fixed number formatting, no ids, no
 * timestamps — identical scenes give identical bytes. */

import type { Element, Scene } from "./scene.js";

const fmt = (v: number): string => {
  const r = Math.round(v * 100) / 100;
  return Object.is(r, -0) ? "0" : String(r);
};

function serialize(el: Element): string {
  switch (el.kind) {
    case "polyline": {
      const pts = el.points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
      const dash = el.stroke.dash ? ` stroke-dasharray="${el.stroke.dash.join(",")}"` : "";
      return `<polyline points="${pts}" fill="none" stroke="${el.stroke.color}" stroke-width="${fmt(el.stroke.width)}"${dash}/>`;
    }
    case "line": {
      const dash = el.stroke.dash ? ` stroke-dasharray="${el.stroke.dash.join(",")}"` : "";
      return `<line x1="${fmt(el.x1)}" y1="${fmt(el.y1)}" x2="${fmt(el.x2)}" y2="${fmt(el.y2)}" stroke="${el.stroke.color}" stroke-width="${fmt(el.stroke.width)}"${dash}/>`;
    }
    case "marker":
      return `<rect x="${fmt(el.x - el.size / 2)}" y="${fmt(el.y - el.size / 2)}" width="${fmt(el.size)}" height="${fmt(el.size)}" fill="${el.color}"/>`;
    case "text": {
      const rot = el.rotate ? ` transform="rotate(${fmt(el.rotate)} ${fmt(el.x)} ${fmt(el.y)})"` : "";
      const esc = el.text
        .replaceAll("&", "&amp;")
        .replaceAll("<", "&lt;")
        .replaceAll(">", "&gt;");
      return `<text x="${fmt(el.x)}" y="${fmt(el.y)}" font-size="${fmt(el.size)}" font-family="sans-serif" text-anchor="${el.anchor}" fill="${el.color}"${rot}>${esc}</text>`;
    }
  }
}

export function toSvg(scene: Scene): string {
  const body = scene.elements.map(serialize).join("\n  ");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${scene.width}" height="${scene.height}" viewBox="0 0 ${scene.width} ${scene.height}">\n` +
    `  <rect width="${scene.width}" height="${scene.height}" fill="white"/>\n` +
    `  ${body}\n</svg>\n`
  );
}
