import { describe, expect, it } from "vitest";

import type { CurveDoc, SettingsDoc } from "../src/api.js";
import {
  addPoint,
  applyDrag,
  docsEqual,
  getCurve,
  setCurve,
  sortPoints,
  xDomain,
  yDomain,
} from "../src/settings.js";

const X: [number, number] = [0, 1];
const Y: [number, number] = [0, 3];

function linear(points: [number, number][]): CurveDoc {
  return { points, kind: "linear" };
}

describe("point normalization", () => {
  it("sorts by x", () => {
    expect(sortPoints([[0.8, 1], [0.2, 2], [0.5, 0]])).toEqual(
      [[0.2, 2], [0.5, 0], [0.8, 1]],
    );
  });

  it("addPoint keeps order", () => {
    const curve = addPoint(linear([[0, 1], [1, 1]]), 0.5, 2);
    expect(curve.points).toEqual([[0, 1], [0.5, 2], [1, 1]]);
  });
});

describe("drag semantics", () => {
  it("moves a point inside the axes", () => {
    const curve = applyDrag(linear([[0, 1], [1, 1]]), 0, 0.3, 2, X, Y);
    expect(curve.points).toEqual([[0.3, 2], [1, 1]]);
  });

  it("removes a point dragged off the axes", () => {
    const curve = applyDrag(linear([[0, 1], [1, 1]]), 1, 1.4, 1, X, Y);
    expect(curve.points).toEqual([[0, 1]]);
  });

  it("removes on vertical escape too", () => {
    const curve = applyDrag(linear([[0, 1], [0.5, 2], [1, 1]]), 1, 0.5, 9, X, Y);
    expect(curve.points).toEqual([[0, 1], [1, 1]]);
  });

  it("never removes the last point", () => {
    const curve = applyDrag(linear([[0.5, 1]]), 0, 5, 5, X, Y);
    expect(curve.points.length).toBe(1);
  });

  it("re-sorts after a crossing drag", () => {
    const curve = applyDrag(linear([[0, 1], [0.5, 2], [1, 1]]), 0, 0.9, 1, X, Y);
    expect(curve.points.map((p) => p[0])).toEqual([0.5, 0.9, 1]);
  });
});

describe("curve addressing", () => {
  const doc = {
    stress: {},
    classes: {},
    curves: {
      period: { volume: linear([[0, 1]]), pitch: linear([[0, 0]]),
                duration: linear([[0, 1]]) },
      question: { volume: linear([[0, 1]]), pitch: linear([[0, 0]]),
                  duration: linear([[0, 1]]) },
      exclamation: { volume: linear([[0, 1]]), pitch: linear([[0, 0]]),
                     duration: linear([[0, 1]]) },
    },
    frequency_curves: {
      volume: linear([[1, 1]]), pitch: linear([[1, 0]]),
      duration: linear([[1, 1]]),
    },
    pauses: {},
    clamps: {},
    seed: 0,
    bracket_banks: {},
  } as unknown as SettingsDoc;

  it("set/get round-trips and sorts", () => {
    const next = setCurve(doc, {
      family: "sentence", terminator: "question", variable: "pitch",
    }, linear([[1, 6], [0, 0]]));
    expect(getCurve(next, {
      family: "sentence", terminator: "question", variable: "pitch",
    }).points).toEqual([[0, 0], [1, 6]]);
    // the original document is untouched
    expect(getCurve(doc, {
      family: "sentence", terminator: "question", variable: "pitch",
    }).points).toEqual([[0, 0]]);
  });

  it("frequency curves live on the log-count domain", () => {
    expect(xDomain("frequency")).toEqual([1, 7]);
    expect(xDomain("sentence")).toEqual([0, 1]);
    expect(yDomain("pitch")).toEqual([-12, 12]);
  });

  it("docsEqual is structural", () => {
    expect(docsEqual(doc, JSON.parse(JSON.stringify(doc)))).toBe(true);
    const other = setCurve(doc, {
      family: "frequency", terminator: "period", variable: "volume",
    }, linear([[1, 2]]));
    expect(docsEqual(doc, other)).toBe(false);
  });
});
