import { describe, expect, it } from "vitest";

import {
  VIEW_HALF,
  decodeImagined,
  elbowPosition,
  sideLength,
  worldToCanvas,
} from "../src/arena.js";

describe("arena geometry", () => {
  it("maps the origin to the canvas center, +y up", () => {
    const c = worldToCanvas(0, 0, 480);
    expect(c.x).toBeCloseTo(240);
    expect(c.y).toBeCloseTo(240);
    const up = worldToCanvas(0, 1, 480);
    expect(up.y).toBeLessThan(240);
  });

  it("maps the workspace corners onto the canvas edges", () => {
    const tl = worldToCanvas(-VIEW_HALF, VIEW_HALF, 480);
    expect(tl.x).toBeCloseTo(0);
    expect(tl.y).toBeCloseTo(0);
    const br = worldToCanvas(VIEW_HALF, -VIEW_HALF, 480);
    expect(br.x).toBeCloseTo(480);
    expect(br.y).toBeCloseTo(480);
  });

  it("places the elbow by shoulder angle (theta0=0 -> straight along +x)", () => {
    const e = elbowPosition(0);
    expect(e.x).toBeCloseTo(1);
    expect(e.y).toBeCloseTo(0);
    const up = elbowPosition(Math.PI / 2);
    expect(up.x).toBeCloseTo(0);
    expect(up.y).toBeCloseTo(1);
  });

  it("knows the square side lengths", () => {
    expect(sideLength("big")).toBeCloseTo(0.3);
    expect(sideLength("small")).toBeCloseTo(0.15);
  });
});

describe("decodeImagined", () => {
  it("expands raw base64 RGB into RGBA", () => {
    // two pixels: red, then mid-gray
    const raw = Uint8Array.from([255, 0, 0, 128, 128, 128]);
    const b64 = Buffer.from(raw).toString("base64");
    const rgba = decodeImagined(b64, 2, 1);
    expect(Array.from(rgba)).toEqual([255, 0, 0, 255, 128, 128, 128, 255]);
  });
});
