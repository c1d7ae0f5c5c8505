/** Scoring backends: local embedding similarity, an entailment service
 * client, and prompted LLM scoring (discrete and continuous).
 *
 * Network transports are injectable so tests can run fully offline; every
 * backend returns either a finite score or a parse-failure outcome.
 */

import { createHash } from "node:crypto";

import { buildPrompt, PromptKind, TEMPLATE_VERSION } from "./prompts.js";
import { parseScore } from "./parse.js";
import type { ScorerSpec } from "./types.js";

export type ScoreOutcome =
  | { kind: "score"; value: number; clamped: boolean }
  | { kind: "parse_failure"; raw: string };

export interface Backend {
  /** Cache key components identifying this backend's behavior. */
  readonly identity: string[];
  score(statement: string, chunk: string): Promise<ScoreOutcome>;
}

/** Raw text completion for a prompt; injectable for tests. */
export type LlmTransport = (model: string, prompt: string) => Promise<string>;

/** POST {premise, hypothesis} -> support probability; injectable for tests. */
export type EntailmentTransport = (
  endpoint: string,
  premise: string,
  hypothesis: string,
) => Promise<number>;

export interface Transports {
  llm?: LlmTransport;
  entailment?: EntailmentTransport;
}

const MAX_PARSE_RETRIES = 2;

// --- embedding similarity -------------------------------------------------

function tokenize(text: string): string[] {
  return text.toLowerCase().split(/[^\p{L}\p{N}]+/u).filter((t) => t.length > 0);
}

function hashedVector(tokens: string[], dim: number): Float64Array {
  const vec = new Float64Array(dim);
  for (const token of tokens) {
    const digest = createHash("sha1").update(token).digest();
    const bucket = digest.readUInt32BE(0) % dim;
    const sign = digest[4] % 2 === 0 ? 1 : -1;
    vec[bucket] += sign;
  }
  return vec;
}

function cosine(a: Float64Array, b: Float64Array): number {
  let dot = 0;
  let na = 0;
  let nb = 0;
  for (let i = 0; i < a.length; i++) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na === 0 || nb === 0) return 0;
  return dot / Math.sqrt(na * nb);
}

/** Deterministic local similarity: cosine over hashed bag-of-words vectors.
 * Model ids look like "hash-512"; the number is the vector dimension. */
export class EmbeddingSimilarityBackend implements Backend {
  readonly identity: string[];
  private readonly dim: number;

  constructor(model: string) {
    const match = /^hash-(\d+)$/.exec(model);
    this.dim = match ? Number(match[1]) : 512;
    this.identity = ["embedding_similarity", `hash-${this.dim}`];
  }

  async score(statement: string, chunk: string): Promise<ScoreOutcome> {
    const value = cosine(
      hashedVector(tokenize(statement), this.dim),
      hashedVector(tokenize(chunk), this.dim),
    );
    // map cosine [-1, 1] into [0, 1] so the score-file convention holds
    return { kind: "score", value: (value + 1) / 2, clamped: false };
  }
}

// --- entailment -----------------------------------------------------------

async function httpEntailment(endpoint: string, premise: string, hypothesis: string): Promise<number> {
  const response = await fetch(endpoint, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify({ premise, hypothesis }),
  });
  if (!response.ok) {
    throw new Error(`entailment service returned ${response.status}`);
  }
  const payload = (await response.json()) as { probability?: number };
  if (typeof payload.probability !== "number" || !Number.isFinite(payload.probability)) {
    throw new Error("entailment service response missing numeric 'probability'");
  }
  return payload.probability;
}

/** Client for an NLI scoring service; the score is the service's support
 * (entailment) probability for chunk-as-premise, statement-as-hypothesis. */
export class EntailmentBackend implements Backend {
  readonly identity: string[];

  constructor(
    private readonly endpoint: string,
    private readonly transport: EntailmentTransport = httpEntailment,
  ) {
    this.identity = ["entailment", endpoint];
  }

  async score(statement: string, chunk: string): Promise<ScoreOutcome> {
    const probability = await this.transport(this.endpoint, chunk, statement);
    const value = Math.min(1, Math.max(0, probability));
    return { kind: "score", value, clamped: value !== probability };
  }
}

// --- LLM scoring ----------------------------------------------------------

function defaultLlmTransport(spec: ScorerSpec): LlmTransport {
  const baseUrl = spec.baseUrl ?? "https://api.openai.com/v1";
  return async (model, prompt) => {
    const headers: Record<string, string> = { "content-type": "application/json" };
    if (spec.credentialsEnv) {
      const key = process.env[spec.credentialsEnv];
      if (!key) {
        throw new Error(`credentials environment variable ${spec.credentialsEnv} is not set`);
      }
      headers.authorization = `Bearer ${key}`;
    }
    const response = await fetch(`${baseUrl}/chat/completions`, {
      method: "POST",
      headers,
      body: JSON.stringify({
        model,
        temperature: 0,
        messages: [{ role: "user", content: prompt }],
      }),
    });
    if (!response.ok) {
      throw new Error(`chat completion returned ${response.status}`);
    }
    const payload = (await response.json()) as {
      choices?: Array<{ message?: { content?: string } }>;
    };
    const content = payload.choices?.[0]?.message?.content;
    if (typeof content !== "string") {
      throw new Error("chat completion response missing message content");
    }
    return content;
  };
}

export class LlmBackend implements Backend {
  readonly identity: string[];

  constructor(
    private readonly promptKind: PromptKind,
    private readonly model: string,
    private readonly transport: LlmTransport,
  ) {
    this.identity = [`llm_${promptKind}`, model, TEMPLATE_VERSION];
  }

  async score(statement: string, chunk: string): Promise<ScoreOutcome> {
    const prompt = buildPrompt(this.promptKind, statement, chunk);
    let raw = "";
    for (let attempt = 0; attempt <= MAX_PARSE_RETRIES; attempt++) {
      raw = await this.transport(this.model, prompt);
      const parsed = parseScore(this.promptKind, raw);
      if (parsed !== null) {
        return { kind: "score", value: parsed.score, clamped: parsed.clamped };
      }
    }
    return { kind: "parse_failure", raw };
  }
}

// --- factory ----------------------------------------------------------------

export function makeBackend(spec: ScorerSpec, transports: Transports = {}): Backend {
  switch (spec.kind) {
    case "embedding_similarity":
      return new EmbeddingSimilarityBackend(spec.model);
    case "entailment":
      return new EntailmentBackend(spec.model, transports.entailment ?? httpEntailment);
    case "llm_discrete":
      return new LlmBackend("discrete", spec.model, transports.llm ?? defaultLlmTransport(spec));
    case "llm_continuous":
      return new LlmBackend("continuous", spec.model, transports.llm ?? defaultLlmTransport(spec));
    default:
      throw new Error(`unknown backend kind ${(spec as ScorerSpec).kind}`);
  }
}
