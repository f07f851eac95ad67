import { createHash } from "node:crypto";

/**
 * Deterministic pseudo-random unit vector for a text.
 *
 * Construction is byte-compatible with the engine's built-in test embedder:
 * concatenate sha256("{seed}|{text}|{i}") blocks, read big-endian uint64s,
 * keep the top 53 bits, map to [-1, 1), then L2-normalize.
 */
export function hashEmbed(text: string, dim: number, seed: number): number[] {
  if (dim <= 0 || !Number.isInteger(dim)) {
    throw new Error(`vector dim must be a positive integer, got ${dim}`);
  }
  const need = dim * 8;
  const blocks: Buffer[] = [];
  for (let i = 0; blocks.length * 32 < need; i++) {
    blocks.push(createHash("sha256").update(`${seed}|${text}|${i}`, "utf8").digest());
  }
  const buf = Buffer.concat(blocks).subarray(0, need);
  const comps = new Array<number>(dim);
  for (let j = 0; j < dim; j++) {
    const u = buf.readBigUInt64BE(j * 8);
    comps[j] = (Number(u >> 11n) / 2 ** 53) * 2 - 1;
  }
  let sumSq = 0;
  for (const c of comps) sumSq += c * c;
  let norm = Math.sqrt(sumSq);
  if (norm === 0) {
    comps[0] = 1;
    norm = 1;
  }
  return comps.map((c) => c / norm);
}
