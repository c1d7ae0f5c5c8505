/** Minimal reader for the harness corpus file: statement_id -> text.
 *
 * The chunk dump references statements by id only, so the bridge resolves
 * their text from the same corpus file the harness ingests.
 */

import { readFileSync } from "node:fs";

export function loadStatementTexts(corpusPath: string): Map<string, string> {
  const texts = new Map<string, string>();
  const lines = readFileSync(corpusPath, "utf-8").split("\n");
  lines.forEach((line, i) => {
    if (line.trim() === "") return;
    let record: unknown;
    try {
      record = JSON.parse(line);
    } catch (err) {
      throw new Error(`corpus line ${i + 1}: invalid JSON: ${(err as Error).message}`);
    }
    const r = record as Record<string, unknown>;
    if (r.kind === "statement") {
      if (typeof r.id !== "string" || typeof r.text !== "string") {
        throw new Error(`corpus line ${i + 1}: malformed statement record`);
      }
      texts.set(r.id, r.text);
    }
  });
  return texts;
}
