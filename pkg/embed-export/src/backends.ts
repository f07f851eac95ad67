import { z } from "zod";

import { hashEmbed } from "./hash.js";

/** A sentence-embedding source; batches map 1:1 onto input texts. */
export interface EmbeddingBackend {
  readonly description: string;
  embedBatch(texts: string[]): Promise<number[][]>;
}

/** Offline deterministic backend, model id "hash:<dim>[:<seed>]". */
export class HashBackend implements EmbeddingBackend {
  readonly description: string;

  constructor(
    readonly dim: number,
    readonly seed: number = 0,
  ) {
    this.description = `hash embedder (dim=${dim}, seed=${seed})`;
  }

  async embedBatch(texts: string[]): Promise<number[][]> {
    return texts.map((t) => hashEmbed(t, this.dim, this.seed));
  }
}

const responseSchema = z.object({
  dim: z.number().int().positive(),
  vectors: z.array(z.array(z.number())),
});

/**
 * Backend for served pretrained models (sentence-transformers and friends
 * behind any HTTP wrapper). Contract: POST {model, texts} to the endpoint,
 * receive {dim, vectors} with one vector per text.
 */
export class HttpBackend implements EmbeddingBackend {
  readonly description: string;
  private expectedDim: number | null = null;

  constructor(
    readonly endpoint: string,
    readonly model: string,
  ) {
    this.description = `model ${model} via ${endpoint}`;
  }

  async embedBatch(texts: string[]): Promise<number[][]> {
    let res: Response;
    try {
      res = await fetch(this.endpoint, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ model: this.model, texts }),
      });
    } catch (err) {
      throw new Error(`cannot reach embedding endpoint ${this.endpoint}: ${String(err)}`);
    }
    if (!res.ok) {
      throw new Error(`embedding endpoint returned HTTP ${res.status} for model ${this.model}`);
    }
    const parsed = responseSchema.safeParse(await res.json());
    if (!parsed.success) {
      throw new Error(`malformed endpoint response: ${parsed.error.message}`);
    }
    const { dim, vectors } = parsed.data;
    if (vectors.length !== texts.length) {
      throw new Error(`endpoint returned ${vectors.length} vectors for ${texts.length} texts`);
    }
    if (this.expectedDim === null) this.expectedDim = dim;
    if (dim !== this.expectedDim) {
      throw new Error(`endpoint changed dim mid-job: ${this.expectedDim} -> ${dim}`);
    }
    for (const v of vectors) {
      if (v.length !== dim) {
        throw new Error(`endpoint vector length ${v.length} does not match dim ${dim}`);
      }
    }
    return vectors;
  }
}

const HASH_MODEL = /^hash:(\d+)(?::(-?\d+))?$/;

/** Resolve a model identifier to a backend; served models need an endpoint. */
export function resolveBackend(model: string, endpoint?: string): EmbeddingBackend {
  const m = HASH_MODEL.exec(model);
  if (m) {
    return new HashBackend(Number(m[1]), m[2] === undefined ? 0 : Number(m[2]));
  }
  if (!endpoint) {
    throw new Error(
      `model ${JSON.stringify(model)} is not a hash:<dim>[:<seed>] identifier; ` +
        "pass --endpoint <url> for a served model",
    );
  }
  return new HttpBackend(endpoint, model);
}
