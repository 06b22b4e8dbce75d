// SVG cross-section plot, built as pure functions returning data and
// markup strings. All numbers shown come straight from the service
// response; nothing is recomputed here beyond layout.

import { FeatureDoc, PredictResponse } from "./types.js";
import { Snapshot } from "./state.js";

export interface PlotModel {
  viewBox: { x: number; y: number; w: number; h: number };
  profilePath: string;
  overlays: { label: string; path: string }[];
  nozzle: { x1: number; x2: number; y: number; label: string } | null;
  pinch: { x: number; y: number } | null;
  baseline: { x1: number; x2: number };
  annotations: string[];
}

const num = (v: number) => {
  const s = v.toFixed(3);
  return s === "-0.000" ? "0.000" : s;
};

/** Closed path in SVG coordinates (y flipped so up is up). */
export function contourPath(points: [number, number][]): string {
  if (points.length === 0) return "";
  const parts = points.map(
    ([x, y], i) => `${i === 0 ? "M" : "L"}${num(x)},${num(-y)}`,
  );
  return parts.join(" ") + " Z";
}

/**
 * Worst mirror-pair deviation of a sampled profile, in mm. The service
 * samples symmetric shapes on a uniform grid starting at the crown, so
 * point i pairs with point n-i (x negated, y equal).
 */
export function mirrorMismatch(points: [number, number][]): number {
  const n = points.length;
  if (n === 0) return 0;
  let worst = Math.abs(points[0][0]);
  for (let i = 1; i < n; i++) {
    const [xa, ya] = points[i];
    const [xb, yb] = points[n - i];
    worst = Math.max(worst, Math.abs(xa + xb), Math.abs(ya - yb));
  }
  return worst;
}

export function featureLines(features: FeatureDoc | null): string[] {
  if (!features) return ["features unavailable"];
  const lines = [
    `w = ${features.width.toFixed(2)} mm`,
    `h = ${features.height.toFixed(2)} mm`,
    `A = ${features.area.toFixed(1)} mm²`,
  ];
  if (features.contact_length !== null) {
    lines.push(`l_c = ${features.contact_length.toFixed(2)} mm`);
  }
  return lines;
}

export function buildPlotModel(
  response: PredictResponse,
  snapshots: Snapshot[],
  nozzleDiameter: number | null,
): PlotModel {
  const all: [number, number][][] = [
    response.points,
    ...snapshots.map((s) => s.points),
  ];
  let minX = Infinity, maxX = -Infinity, maxY = -Infinity;
  for (const pts of all) {
    for (const [x, y] of pts) {
      if (x < minX) minX = x;
      if (x > maxX) maxX = x;
      if (y > maxY) maxY = y;
    }
  }
  if (!Number.isFinite(minX)) {
    minX = -1; maxX = 1; maxY = 1;
  }

  const span = Math.max(maxX - minX, maxY, 1e-9);
  const margin = 0.08 * span;

  let nozzle: PlotModel["nozzle"] = null;
  let top = maxY + margin;
  if (nozzleDiameter !== null && nozzleDiameter > 0) {
    const y = maxY + 0.6 * margin;
    nozzle = {
      x1: -nozzleDiameter / 2,
      x2: nozzleDiameter / 2,
      y,
      label: `⌀ ${nozzleDiameter} mm`,
    };
    minX = Math.min(minX, -nozzleDiameter / 2);
    maxX = Math.max(maxX, nozzleDiameter / 2);
    top = y + margin;
  }

  const pinch = response.features?.pinch
    ? { x: response.features.pinch[0], y: response.features.pinch[1] }
    : null;

  return {
    viewBox: {
      x: minX - margin,
      y: -top,
      w: maxX - minX + 2 * margin,
      h: top + margin,
    },
    profilePath: contourPath(response.points),
    overlays: snapshots.map((s) => ({ label: s.label, path: contourPath(s.points) })),
    nozzle,
    pinch,
    baseline: { x1: minX - margin, x2: maxX + margin },
    annotations: featureLines(response.features),
  };
}

/** Render the model to an SVG string (uniform scaling keeps mm 1:1). */
export function renderSvg(model: PlotModel): string {
  const vb = model.viewBox;
  const fs = 0.035 * Math.max(vb.w, vb.h);
  const sw = 0.25 * fs;
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" ` +
    `viewBox="${num(vb.x)} ${num(vb.y)} ${num(vb.w)} ${num(vb.h)}" ` +
    `preserveAspectRatio="xMidYMid meet" class="bead-plot">`,
  );
  parts.push(
    `<line class="baseline" x1="${num(model.baseline.x1)}" y1="0" ` +
    `x2="${num(model.baseline.x2)}" y2="0" stroke-width="${num(sw)}"/>`,
  );
  for (const o of model.overlays) {
    parts.push(
      `<path class="overlay" d="${o.path}" fill="none" ` +
      `stroke-width="${num(sw)}" data-label="${o.label}"/>`,
    );
  }
  parts.push(
    `<path class="profile" d="${model.profilePath}" stroke-width="${num(sw)}"/>`,
  );
  if (model.nozzle) {
    const nz = model.nozzle;
    parts.push(
      `<g class="nozzle">` +
      `<line x1="${num(nz.x1)}" y1="${num(-nz.y)}" x2="${num(nz.x2)}" ` +
      `y2="${num(-nz.y)}" stroke-width="${num(sw)}"/>` +
      `<line x1="${num(nz.x1)}" y1="${num(-nz.y - fs / 2)}" x2="${num(nz.x1)}" ` +
      `y2="${num(-nz.y + fs / 2)}" stroke-width="${num(sw)}"/>` +
      `<line x1="${num(nz.x2)}" y1="${num(-nz.y - fs / 2)}" x2="${num(nz.x2)}" ` +
      `y2="${num(-nz.y + fs / 2)}" stroke-width="${num(sw)}"/>` +
      `<text x="${num(nz.x2 + fs)}" y="${num(-nz.y + fs / 3)}" ` +
      `font-size="${num(fs)}">${nz.label}</text></g>`,
    );
  }
  if (model.pinch) {
    parts.push(
      `<circle class="pinch" cx="${num(model.pinch.x)}" ` +
      `cy="${num(-model.pinch.y)}" r="${num(0.6 * fs)}"/>`,
    );
  }
  model.annotations.forEach((line, i) => {
    parts.push(
      `<text class="annotation" x="${num(vb.x + fs)}" ` +
      `y="${num(vb.y + (1.4 + 1.2 * i) * fs)}" font-size="${num(fs)}">` +
      `${line}</text>`,
    );
  });
  parts.push("</svg>");
  return parts.join("");
}
