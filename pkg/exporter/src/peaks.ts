/** Peaks dataset generation: stratified samples plus surface values, written
 * as a CSV the engine's train command reads directly. */

import { promises as fs } from "fs";

import { mulberry32 } from "./exportModel.js";

export const PEAKS_LO = -3;
export const PEAKS_HI = 3;

export function peaks(x1: number, x2: number): number {
  const term1 = 3 * (1 - x1) ** 2 * Math.exp(-(x1 ** 2) - (x2 + 1) ** 2);
  const term2 = -10 * (x1 / 5 - x1 ** 3 - x2 ** 5) * Math.exp(-(x1 ** 2) - x2 ** 2);
  const term3 = -Math.exp(-((x1 + 1) ** 2) - x2 ** 2) / 3;
  return term1 + term2 + term3;
}

/** One sample per stratum per dimension, independently permuted per dimension. */
export function lhcSample(
  n: number,
  dims: number,
  lo: number,
  hi: number,
  seed: number,
): number[][] {
  if (n < 1) {
    throw new Error(`need at least one sample, got ${n}`);
  }
  const rand = mulberry32(seed);
  const out: number[][] = Array.from({ length: n }, () => new Array<number>(dims));
  for (let d = 0; d < dims; d += 1) {
    const perm = Array.from({ length: n }, (_, i) => i);
    for (let i = n - 1; i > 0; i -= 1) {
      const j = Math.floor(rand() * (i + 1));
      [perm[i], perm[j]] = [perm[j], perm[i]];
    }
    for (let i = 0; i < n; i += 1) {
      const unit = (perm[i] + rand()) / n;
      out[i][d] = lo + unit * (hi - lo);
    }
  }
  return out;
}

export async function genPeaksCsv(
  n: number,
  seed: number,
  outPath: string,
): Promise<void> {
  const points = lhcSample(n, 2, PEAKS_LO, PEAKS_HI, seed);
  const lines = ["x1,x2,y"];
  for (const [x1, x2] of points) {
    lines.push(`${x1},${x2},${peaks(x1, x2)}`);
  }
  await fs.writeFile(outPath, lines.join("\n") + "\n", "utf-8");
}
