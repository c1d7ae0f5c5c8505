/** End-to-end contract test against the harness: chunk the bundled toy
 * corpus with the harness CLI, score it with the bridge, and feed the scores
 * back through `eval`. A zero exit from `eval` proves the bridge output
 * passes the harness score-file validation with full coverage.
 */

import { execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";

import { describe, expect, it } from "vitest";

import { loadStatementTexts } from "../src/corpus.js";
import { scorePairs } from "../src/scorePairs.js";

const HARNESS_ROOT = resolve(__dirname, "../..");
const CORPUS = join(HARNESS_ROOT, "src/citealign/data/toy_corpus.jsonl");
const PYTHON_ENV = {
  ...process.env,
  PYTHONPATH: join(HARNESS_ROOT, "src"),
};

function harness(args: string[]): string {
  return execFileSync("python3", ["-m", "citealign", ...args], {
    env: PYTHON_ENV,
    encoding: "utf-8",
  });
}

describe("bridge <-> harness integration", () => {
  it("bridge scores pass the harness eval end to end", async () => {
    const dir = mkdtempSync(join(tmpdir(), "bridge-e2e-"));
    const chunks = join(dir, "chunks.jsonl");
    const scores = join(dir, "scores.jsonl");
    harness(["chunk", "--corpus", CORPUS, "--out", chunks]);

    const summary = await scorePairs(
      chunks,
      { metricName: "hash_sim", kind: "embedding_similarity", model: "hash-256" },
      scores,
      { statementTexts: loadStatementTexts(CORPUS), pairs: "all" },
    );
    expect(summary.written).toBeGreaterThan(0);
    expect(summary.parseFailures).toBe(0);

    const out = harness([
      "eval",
      "--corpus", CORPUS,
      "--chunks", chunks,
      "--scores", scores,
      "--metric", "hash_sim",
    ]);
    expect(out).toContain("## correlation");
    expect(out).toContain("## classification");
    expect(out).toContain("## retrieval");
    expect(out).toContain("hash_sim");
  }, 60_000);

  it("llm_discrete bridge output loads cleanly into the harness", async () => {
    const dir = mkdtempSync(join(tmpdir(), "bridge-e2e-"));
    const chunks = join(dir, "chunks.jsonl");
    const scores = join(dir, "scores.jsonl");
    harness(["chunk", "--corpus", CORPUS, "--out", chunks]);

    const summary = await scorePairs(
      chunks,
      { metricName: "gpt_dis", kind: "llm_discrete", model: "fake" },
      scores,
      {
        statementTexts: loadStatementTexts(CORPUS),
        pairs: "listed",
        transports: {
          llm: async (_m, prompt) => `Thinking it through.\nPrediction: ${prompt.length % 3}`,
        },
      },
    );
    expect(summary.parseFailures).toBe(0);
    for (const line of readFileSync(scores, "utf-8").trim().split("\n")) {
      expect([0, 1, 2]).toContain(JSON.parse(line).score);
    }

    // correlation + classification need exactly the listed pairs
    const out = harness([
      "eval",
      "--corpus", CORPUS,
      "--chunks", chunks,
      "--scores", scores,
      "--metric", "gpt_dis",
      "--protocol", "classification",
    ]);
    expect(out).toContain("gpt_dis");
  }, 60_000);
});
