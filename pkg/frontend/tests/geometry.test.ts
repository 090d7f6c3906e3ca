import { describe, expect, it } from "vitest";

import { resamplePoints, type Pt } from "../src/geometry.js";

describe("resamplePoints", () => {
  it("spaces points evenly along a segment", () => {
    const out = resamplePoints(
      [
        [0, 0],
        [100, 0],
      ],
      5,
    );
    expect(out).toEqual([
      [0, 0],
      [25, 0],
      [50, 0],
      [75, 0],
      [100, 0],
    ]);
  });

  it("keeps endpoints exactly", () => {
    const stroke: Pt[] = [
      [3, 7],
      [40, 60],
      [90, 10],
    ];
    const out = resamplePoints(stroke, 6);
    expect(out[0]).toEqual([3, 7]);
    expect(out[5]).toEqual([90, 10]);
    expect(out).toHaveLength(6);
  });

  it("walks the polyline by arc length", () => {
    // L path of length 200: the midpoint sits at the corner
    const out = resamplePoints(
      [
        [0, 0],
        [100, 0],
        [100, 100],
      ],
      3,
    );
    expect(out[1]).toEqual([100, 0]);
  });

  it("handles a two-point request from a degenerate stroke", () => {
    expect(resamplePoints([[5, 5]], 3)).toEqual([
      [5, 5],
      [5, 5],
      [5, 5],
    ]);
  });
});
