import { createWriteStream, readFileSync } from "node:fs";
import { once } from "node:events";

/** Sentence encoders cap their input; keys are truncated before embedding. */
export const KEY_MAX_CHARS = 128;

/** Cut to at most 128 characters, counted in code points (not UTF-16 units). */
export function truncateKey(text: string): string {
  const points = Array.from(text);
  return points.length <= KEY_MAX_CHARS ? text : points.slice(0, KEY_MAX_CHARS).join("");
}

export interface StoreRecord {
  key: string;
  vec: number[];
}

/** Write the JSONL store format: header line {"dim": d}, then one record per key. */
export async function writeStore(
  path: string,
  dim: number,
  records: Iterable<StoreRecord>,
): Promise<number> {
  const out = createWriteStream(path, { encoding: "utf8" });
  const write = async (line: string) => {
    if (!out.write(line + "\n")) await once(out, "drain");
  };
  await write(JSON.stringify({ dim }));
  let count = 0;
  for (const rec of records) {
    if (rec.vec.length !== dim) {
      out.destroy();
      throw new Error(`vector for key ${JSON.stringify(rec.key)} has length ${rec.vec.length}, expected ${dim}`);
    }
    await write(JSON.stringify({ key: rec.key, vec: rec.vec }));
    count++;
  }
  out.end();
  await once(out, "close");
  return count;
}

export interface Store {
  dim: number;
  entries: Map<string, number[]>;
}

/** Strict reader for the same format; throws on any malformed line. */
export function readStore(path: string): Store {
  const lines = readFileSync(path, "utf8").split(/\r?\n/);
  if (!lines.length || !lines[0].trim()) {
    throw new Error(`${path}: missing header line`);
  }
  const header = JSON.parse(lines[0]);
  if (typeof header.dim !== "number" || !Number.isInteger(header.dim) || header.dim <= 0) {
    throw new Error(`${path}: first line must be a {"dim": int} header`);
  }
  const entries = new Map<string, number[]>();
  for (let i = 1; i < lines.length; i++) {
    if (!lines[i].trim()) continue;
    const rec = JSON.parse(lines[i]);
    if (typeof rec.key !== "string" || !Array.isArray(rec.vec)) {
      throw new Error(`${path}:${i + 1}: expected {"key", "vec"} record`);
    }
    if (rec.vec.length !== header.dim) {
      throw new Error(`${path}:${i + 1}: vector length ${rec.vec.length} != header dim ${header.dim}`);
    }
    if (entries.has(rec.key)) {
      throw new Error(`${path}:${i + 1}: duplicate key ${JSON.stringify(rec.key)}`);
    }
    entries.set(rec.key, rec.vec as number[]);
  }
  return { dim: header.dim, entries };
}

export function cosine(a: number[], b: number[]): number {
  if (a.length !== b.length) throw new Error(`dim mismatch: ${a.length} vs ${b.length}`);
  let dot = 0;
  let na = 0;
  let nb = 0;
  for (let i = 0; i < a.length; i++) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na === 0 || nb === 0) throw new Error("undefined cosine: zero vector");
  return dot / Math.sqrt(na * nb);
}
