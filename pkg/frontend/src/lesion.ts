// Lesion slider: snaps to the experiment's canonical silencing counts.

export const LESION_STOPS = [0, 25, 64, 128, 192, 256] as const;

export function snapLesion(raw: number): number {
  let best: number = LESION_STOPS[0];
  let bestDist = Infinity;
  for (const stop of LESION_STOPS) {
    const d = Math.abs(stop - raw);
    if (d < bestDist) {
      best = stop;
      bestDist = d;
    }
  }
  return best;
}
