/** Settings document helpers: curve point edits keep the document
 * normalized (points sorted by x) so a save/reload round-trip is
 * byte-identical. */

import type { CurveDoc, CurveKind, SettingsDoc } from "./api.js";

export const TERMINATORS = ["period", "question", "exclamation"] as const;
export const VARIABLES = ["volume", "pitch", "duration"] as const;
export const TAGS = ["N", "p", "V", "A", "v", "C", "P", "!", "r", "D"] as const;

export function neutralCurve(variable: string): CurveDoc {
  return { points: [[0, variable === "pitch" ? 0 : 1]], kind: "linear" };
}

export function sortPoints(points: [number, number][]): [number, number][] {
  return [...points].sort((a, b) => a[0] - b[0] || a[1] - b[1]);
}

export function clone<T>(value: T): T {
  return JSON.parse(JSON.stringify(value));
}

export function docsEqual(a: unknown, b: unknown): boolean {
  return JSON.stringify(a) === JSON.stringify(b);
}

/** Axis ranges per curve family: sentence curves live on [0,1], frequency
 * curves on the log10-count domain [1,7]. */
export function xDomain(family: "sentence" | "frequency"): [number, number] {
  return family === "sentence" ? [0, 1] : [1, 7];
}

export function yDomain(variable: string): [number, number] {
  return variable === "pitch" ? [-12, 12] : [0, 3];
}

export interface CurveAddress {
  family: "sentence" | "frequency";
  terminator: (typeof TERMINATORS)[number];
  variable: (typeof VARIABLES)[number];
}

export function getCurve(doc: SettingsDoc, addr: CurveAddress): CurveDoc {
  if (addr.family === "frequency") {
    return doc.frequency_curves[addr.variable] ?? neutralCurve(addr.variable);
  }
  return doc.curves[addr.terminator]?.[addr.variable] ??
    neutralCurve(addr.variable);
}

export function setCurve(
  doc: SettingsDoc,
  addr: CurveAddress,
  curve: CurveDoc,
): SettingsDoc {
  const next = clone(doc);
  const normalized: CurveDoc = {
    points: sortPoints(curve.points),
    kind: curve.kind,
  };
  if (addr.family === "frequency") {
    next.frequency_curves[addr.variable] = normalized;
  } else {
    next.curves[addr.terminator] ??= {} as Record<string, CurveDoc>;
    next.curves[addr.terminator][addr.variable] = normalized;
  }
  return next;
}

/** Apply one drag result: a point released outside the axes is removed,
 * anything else lands sorted. A curve always keeps at least one point. */
export function applyDrag(
  curve: CurveDoc,
  index: number,
  x: number,
  y: number,
  xRange: [number, number],
  yRange: [number, number],
): CurveDoc {
  const points = curve.points.map((p) => [...p] as [number, number]);
  const outside =
    x < xRange[0] || x > xRange[1] || y < yRange[0] || y > yRange[1];
  if (outside && points.length > 1) {
    points.splice(index, 1);
  } else if (!outside) {
    points[index] = [x, y];
  }
  return { points: sortPoints(points), kind: curve.kind };
}

export function addPoint(curve: CurveDoc, x: number, y: number): CurveDoc {
  return {
    points: sortPoints([...curve.points, [x, y]]),
    kind: curve.kind,
  };
}

export function setKind(curve: CurveDoc, kind: CurveKind): CurveDoc {
  return { points: sortPoints(curve.points), kind };
}
