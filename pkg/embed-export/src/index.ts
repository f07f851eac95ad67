export { HashBackend, HttpBackend, resolveBackend } from "./backends.js";
export type { EmbeddingBackend } from "./backends.js";
export { runExport } from "./export.js";
export type { ExportJob, ExportSummary } from "./export.js";
export { hashEmbed } from "./hash.js";
export { KEY_MAX_CHARS, cosine, readStore, truncateKey, writeStore } from "./store.js";
export type { Store, StoreRecord } from "./store.js";
