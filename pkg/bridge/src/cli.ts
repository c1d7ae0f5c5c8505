#!/usr/bin/env node
/** CLI: score (statement, chunk) pairs from a harness chunk dump.
 *
 *   citealign-bridge --chunks chunks.jsonl --corpus corpus.jsonl \
 *     --out scores.jsonl --metric hash_sim --backend embedding_similarity \
 *     --model hash-512
 */

import { parseArgs } from "node:util";
import process from "node:process";

import { loadStatementTexts } from "./corpus.js";
import { scorePairs } from "./scorePairs.js";
import type { BackendKind, ScorerSpec } from "./types.js";

const BACKENDS: BackendKind[] = [
  "embedding_similarity",
  "entailment",
  "llm_discrete",
  "llm_continuous",
];

function usage(): void {
  console.error(
    "usage: citealign-bridge --chunks FILE --corpus FILE --out FILE --metric NAME\n" +
      "         --backend {embedding_similarity|entailment|llm_discrete|llm_continuous}\n" +
      "         --model ID [--pairs {listed|all}] [--cache-dir DIR]\n" +
      "         [--credentials-env VAR] [--base-url URL]\n" +
      "         [--concurrency N] [--interval-ms N]",
  );
}

export async function main(argv: string[]): Promise<number> {
  let values;
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        chunks: { type: "string" },
        corpus: { type: "string" },
        out: { type: "string" },
        metric: { type: "string" },
        backend: { type: "string" },
        model: { type: "string" },
        pairs: { type: "string", default: "listed" },
        "cache-dir": { type: "string" },
        "credentials-env": { type: "string" },
        "base-url": { type: "string" },
        concurrency: { type: "string" },
        "interval-ms": { type: "string" },
      },
    }));
  } catch (err) {
    console.error(`citealign-bridge: ${(err as Error).message}`);
    usage();
    return 1;
  }

  const required = ["chunks", "corpus", "out", "metric", "backend", "model"] as const;
  for (const name of required) {
    if (!values[name]) {
      console.error(`citealign-bridge: missing --${name}`);
      usage();
      return 1;
    }
  }
  if (!BACKENDS.includes(values.backend as BackendKind)) {
    console.error(`citealign-bridge: unknown backend '${values.backend}'`);
    return 1;
  }
  if (values.pairs !== "listed" && values.pairs !== "all") {
    console.error(`citealign-bridge: --pairs must be 'listed' or 'all'`);
    return 1;
  }

  const spec: ScorerSpec = {
    metricName: values.metric as string,
    kind: values.backend as BackendKind,
    model: values.model as string,
    credentialsEnv: values["credentials-env"],
    baseUrl: values["base-url"],
    concurrency: values.concurrency ? Number(values.concurrency) : undefined,
    minIntervalMs: values["interval-ms"] ? Number(values["interval-ms"]) : undefined,
  };

  try {
    const summary = await scorePairs(values.chunks as string, spec, values.out as string, {
      statementTexts: loadStatementTexts(values.corpus as string),
      pairs: values.pairs as "listed" | "all",
      cacheDir: values["cache-dir"] ?? null,
    });
    console.log(
      `wrote ${summary.written} scores to ${values.out} ` +
        `(cache hits ${summary.cacheHits}, clamped ${summary.clamped}, ` +
        `parse failures ${summary.parseFailures})`,
    );
    return summary.parseFailures > 0 ? 3 : 0;
  } catch (err) {
    console.error(`citealign-bridge: ${(err as Error).message}`);
    return 2;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split("/").pop()!);
if (invokedDirectly) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
