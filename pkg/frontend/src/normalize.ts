// Axis normalization is the single computation the explorer performs on
// service numbers; everything else is displayed as fetched.

import type { AxisRange } from "./types.js";

// Map a raw axis value into [0, 1] relative to the range observed across
// the run's ranked subgroups.  A degenerate range (every subgroup shares
// the value) renders at the midpoint 0.5 so the polygon stays visible.
export function normalize(value: number, min: number, max: number): number {
  if (max === min) {
    return 0.5;
  }
  return (value - min) / (max - min);
}

export function normalizeAxis(value: number, range: AxisRange): number {
  return normalize(value, range.min, range.max);
}
