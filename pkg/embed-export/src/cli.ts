#!/usr/bin/env node
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { resolveBackend } from "./backends.js";
import { runExport } from "./export.js";

export async function main(argv: string[]): Promise<number> {
  const args = await yargs(argv)
    .scriptName("export-embeddings")
    .usage("$0 --model <id> --input <txt file, one text per line> --output <jsonl>")
    .option("model", {
      type: "string",
      demandOption: true,
      describe: "model identifier: hash:<dim>[:<seed>] or a served model name",
    })
    .option("input", { type: "string", demandOption: true, describe: "text file, one text per line" })
    .option("output", { type: "string", demandOption: true, describe: "vector-store JSONL to write" })
    .option("endpoint", { type: "string", describe: "embedding service URL for served models" })
    .option("batch-size", { type: "number", default: 32 })
    .strict()
    .fail((msg, err) => {
      throw err ?? new UsageError(msg ?? "invalid arguments");
    })
    .parse();

  if (!Number.isInteger(args.batchSize) || args.batchSize < 1) {
    throw new UsageError(`--batch-size must be a positive integer, got ${args.batchSize}`);
  }
  const backend = resolveBackend(args.model, args.endpoint);
  console.error(`exporting with ${backend.description}`);
  const summary = await runExport({
    backend,
    inputPath: args.input,
    outputPath: args.output,
    batchSize: args.batchSize,
    log: (msg) => console.error(msg),
  });
  console.error(
    `wrote ${summary.written} vector(s), dim=${summary.dim} -> ${args.output}` +
      (summary.duplicates ? ` (${summary.duplicates} duplicate(s) collapsed)` : ""),
  );
  return 0;
}

class UsageError extends Error {}

const isDirectRun = import.meta.url === `file://${process.argv[1]}`;
if (isDirectRun) {
  main(hideBin(process.argv))
    .then((code) => process.exit(code))
    .catch((err) => {
      console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
      process.exit(err instanceof UsageError ? 2 : 1);
    });
}
