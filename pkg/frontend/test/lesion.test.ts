import { describe, expect, it } from "vitest";

import { LESION_STOPS, snapLesion } from "../src/lesion.js";

describe("lesion slider snapping", () => {
  it("keeps canonical stops fixed", () => {
    for (const stop of LESION_STOPS) {
      expect(snapLesion(stop)).toBe(stop);
    }
  });

  it("snaps arbitrary values to the nearest stop", () => {
    expect(snapLesion(10)).toBe(0);
    expect(snapLesion(13)).toBe(25);
    expect(snapLesion(47)).toBe(64);
    expect(snapLesion(100)).toBe(128);
    expect(snapLesion(170)).toBe(192);
    expect(snapLesion(230)).toBe(256);
    expect(snapLesion(999)).toBe(256);
  });
});
