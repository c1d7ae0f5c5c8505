/** Shared types and line-format validation for the scorer bridge. */

export type BackendKind =
  | "embedding_similarity"
  | "entailment"
  | "llm_discrete"
  | "llm_continuous";

export interface ScorerSpec {
  /** Metric name written into every score line; unique per run. */
  metricName: string;
  kind: BackendKind;
  /** Model identifier: hash dimension for embeddings ("hash-512"),
   *  endpoint URL for entailment, model name for LLM backends. */
  model: string;
  /** Environment variable holding the API credential, if the backend needs one. */
  credentialsEnv?: string;
  /** Base URL for LLM chat-completions backends. */
  baseUrl?: string;
  /** Max in-flight requests (default 4). */
  concurrency?: number;
  /** Minimum milliseconds between request starts (default 0). */
  minIntervalMs?: number;
}

/** One line of the harness chunk dump (labeled-chunk schema). */
export interface ChunkRecord {
  citation_id: string;
  index: number;
  text: string;
  word_count: number;
  statement_id: string;
  statement_text?: string;
}

/** One line of the harness score file. */
export interface ScoreRecord {
  metric: string;
  statement_id: string;
  citation_id: string;
  chunk_index: number;
  score: number;
}

export class ChunkFileError extends Error {}

export function parseChunkLine(line: string, lineNo: number): ChunkRecord {
  let record: unknown;
  try {
    record = JSON.parse(line);
  } catch (err) {
    throw new ChunkFileError(`line ${lineNo}: invalid JSON: ${(err as Error).message}`);
  }
  if (typeof record !== "object" || record === null) {
    throw new ChunkFileError(`line ${lineNo}: record must be a JSON object`);
  }
  const r = record as Record<string, unknown>;
  for (const field of ["citation_id", "text", "statement_id"]) {
    if (typeof r[field] !== "string") {
      throw new ChunkFileError(`line ${lineNo}: field '${field}' must be a string`);
    }
  }
  if (typeof r.index !== "number" || !Number.isInteger(r.index) || r.index < 0) {
    throw new ChunkFileError(`line ${lineNo}: field 'index' must be a non-negative integer`);
  }
  if (typeof r.word_count !== "number") {
    throw new ChunkFileError(`line ${lineNo}: field 'word_count' must be a number`);
  }
  return {
    citation_id: r.citation_id as string,
    index: r.index,
    text: r.text as string,
    word_count: r.word_count,
    statement_id: r.statement_id as string,
    statement_text: typeof r.statement_text === "string" ? r.statement_text : undefined,
  };
}

export function formatScoreLine(record: ScoreRecord): string {
  if (!Number.isFinite(record.score)) {
    throw new Error(`non-finite score for (${record.statement_id}, ${record.citation_id}, ${record.chunk_index})`);
  }
  return JSON.stringify({
    metric: record.metric,
    statement_id: record.statement_id,
    citation_id: record.citation_id,
    chunk_index: record.chunk_index,
    score: record.score,
  });
}
