import { describe, expect, it } from "vitest";

import { CurveGeometry } from "../src/curveEditor.js";

const geometry = new CurveGeometry({
  width: 640,
  height: 280,
  xRange: [0, 1],
  yRange: [0, 3],
});

describe("pixel mapping", () => {
  it("round-trips values through pixels", () => {
    for (const [x, y] of [[0, 0], [1, 3], [0.25, 1.5], [0.9, 0.1]]) {
      const [px, py] = geometry.toPixel(x, y);
      const [bx, by] = geometry.fromPixel(px, py);
      expect(bx).toBeCloseTo(x, 9);
      expect(by).toBeCloseTo(y, 9);
    }
  });

  it("y axis points up", () => {
    const [, low] = geometry.toPixel(0.5, 0);
    const [, high] = geometry.toPixel(0.5, 3);
    expect(high).toBeLessThan(low);
  });

  it("picks the nearest control point within radius", () => {
    const curve = { points: [[0.2, 1], [0.8, 2]] as [number, number][],
                    kind: "linear" as const };
    const [px, py] = geometry.toPixel(0.8, 2);
    expect(geometry.pickPoint(curve, px + 3, py - 2)).toBe(1);
    expect(geometry.pickPoint(curve, px + 40, py)).toBeNull();
  });
});
