import { readFileSync } from "node:fs";

import { EmbeddingBackend } from "./backends.js";
import { StoreRecord, truncateKey, writeStore } from "./store.js";

export interface ExportJob {
  backend: EmbeddingBackend;
  inputPath: string;
  outputPath: string;
  batchSize: number;
  log?: (msg: string) => void;
}

export interface ExportSummary {
  written: number;
  dim: number;
  duplicates: number;
  blankLines: number;
}

/**
 * Read one text per input line, embed each unique truncated key, and write
 * the vector-store JSONL file. Duplicate texts collapse onto the first
 * occurrence; blank lines are skipped. Any backend failure aborts the job.
 */
export async function runExport(job: ExportJob): Promise<ExportSummary> {
  const log = job.log ?? (() => {});
  const lines = readFileSync(job.inputPath, "utf8").split(/\r?\n/);
  const keys: string[] = [];
  const seen = new Set<string>();
  let blankLines = 0;
  let duplicates = 0;
  for (const line of lines) {
    if (!line.trim()) {
      blankLines++;
      continue;
    }
    const key = truncateKey(line);
    if (seen.has(key)) {
      duplicates++;
      continue;
    }
    seen.add(key);
    keys.push(key);
  }
  if (keys.length === 0) {
    throw new Error(`${job.inputPath}: no non-empty texts to embed`);
  }

  const records: StoreRecord[] = [];
  let dim: number | null = null;
  for (let start = 0; start < keys.length; start += job.batchSize) {
    const batch = keys.slice(start, start + job.batchSize);
    const vectors = await job.backend.embedBatch(batch);
    for (let i = 0; i < batch.length; i++) {
      const vec = vectors[i];
      if (dim === null) dim = vec.length;
      if (vec.length !== dim) {
        throw new Error(
          `backend changed vector length mid-job (${dim} -> ${vec.length}) at key ${JSON.stringify(batch[i])}`,
        );
      }
      records.push({ key: batch[i], vec });
    }
    log(`embedded ${Math.min(start + job.batchSize, keys.length)}/${keys.length}`);
  }

  const written = await writeStore(job.outputPath, dim as number, records);
  if (duplicates) log(`collapsed ${duplicates} duplicate text(s)`);
  if (blankLines) log(`skipped ${blankLines} blank line(s)`);
  return { written, dim: dim as number, duplicates, blankLines };
}
