// Arena geometry + canvas drawing. Every drawn quantity comes from the frame.

import type { FrameMessage, ObjectOnWire } from "./protocol.js";

export const VIEW_HALF = 2.2;

export const COLOR_CSS: Record<string, string> = {
  red: "#e43f3f",
  green: "#3fce5a",
  yellow: "#e8d243",
  cyan: "#3fd2ce",
  blue: "#4364e8",
};

export interface Px {
  x: number;
  y: number;
}

export function worldToCanvas(x: number, y: number, size: number): Px {
  const s = size / (2 * VIEW_HALF);
  return { x: (x + VIEW_HALF) * s, y: (VIEW_HALF - y) * s };
}

export function sideLength(size: string): number {
  return size === "big" ? 0.3 : 0.15;
}

export function elbowPosition(theta0: number): { x: number; y: number } {
  return { x: Math.cos(theta0), y: Math.sin(theta0) };
}

export function drawArena(
  ctx: CanvasRenderingContext2D,
  frame: FrameMessage,
  size: number,
): void {
  ctx.clearRect(0, 0, size, size);
  ctx.fillStyle = "#101418";
  ctx.fillRect(0, 0, size, size);

  // workspace disc
  const center = worldToCanvas(0, 0, size);
  ctx.strokeStyle = "#2a3138";
  ctx.beginPath();
  ctx.arc(center.x, center.y, (2.0 / (2 * VIEW_HALF)) * size, 0, Math.PI * 2);
  ctx.stroke();

  for (const obj of frame.objects) {
    drawObject(ctx, obj, size);
  }

  // two-segment arm from the wire angles; hand position from the wire
  const elbow = elbowPosition(frame.theta0);
  const e = worldToCanvas(elbow.x, elbow.y, size);
  const h = worldToCanvas(frame.hand.x, frame.hand.y, size);
  ctx.strokeStyle = "#f2f5f7";
  ctx.lineWidth = Math.max(2, size / 64) * 1.5;
  ctx.lineCap = "round";
  ctx.beginPath();
  ctx.moveTo(center.x, center.y);
  ctx.lineTo(e.x, e.y);
  ctx.lineTo(h.x, h.y);
  ctx.stroke();

  // held-object link
  if (frame.hold === 1) {
    const held = frame.objects.find((o) => o.held);
    if (held !== undefined) {
      const c = worldToCanvas(held.x, held.y, size);
      ctx.strokeStyle = "#9be89b";
      ctx.lineWidth = 1;
      ctx.beginPath();
      ctx.moveTo(h.x, h.y);
      ctx.lineTo(c.x, c.y);
      ctx.stroke();
    }
  }

  // pain flash
  if (frame.pain > 0) {
    ctx.strokeStyle = "#ff2d2d";
    ctx.lineWidth = 6;
    ctx.strokeRect(3, 3, size - 6, size - 6);
  }
}

function drawObject(
  ctx: CanvasRenderingContext2D,
  obj: ObjectOnWire,
  size: number,
): void {
  const half = sideLength(obj.size) / 2;
  const tl = worldToCanvas(obj.x - half, obj.y + half, size);
  const br = worldToCanvas(obj.x + half, obj.y - half, size);
  ctx.fillStyle = COLOR_CSS[obj.color] ?? "#888";
  ctx.fillRect(tl.x, tl.y, br.x - tl.x, br.y - tl.y);
  if (obj.held) {
    ctx.strokeStyle = "#ffffff";
    ctx.lineWidth = 1.5;
    ctx.strokeRect(tl.x, tl.y, br.x - tl.x, br.y - tl.y);
  }
}

/** Decode the base64 raw-RGB imagined image into an ImageData-ready buffer. */
export function decodeImagined(
  b64: string,
  width: number,
  height: number,
): Uint8ClampedArray<ArrayBuffer> {
  const raw = atob(b64);
  const out = new Uint8ClampedArray(new ArrayBuffer(width * height * 4));
  for (let i = 0; i < width * height; i++) {
    out[i * 4] = raw.charCodeAt(i * 3);
    out[i * 4 + 1] = raw.charCodeAt(i * 3 + 1);
    out[i * 4 + 2] = raw.charCodeAt(i * 3 + 2);
    out[i * 4 + 3] = 255;
  }
  return out;
}
