/** Prompt templates for LLM scoring, with chain-of-thought cue.
 *
 * The wording is fixed; bump TEMPLATE_VERSION on any change so cached
 * responses are invalidated.
 */

export const TEMPLATE_VERSION = "v1";

export type PromptKind = "discrete" | "continuous";

const DISCRETE_INSTRUCTION =
  "Your task is to quantify how well a provided citation supports a given " +
  "statement. You should predict a discrete score from the set {0, 1, 2}, " +
  "where 0, 1, 2 represent that the statement is not supported, partially " +
  "supported, and fully supported, respectively. Let's think step by step.";

const CONTINUOUS_INSTRUCTION =
  "Your task is to quantify how well a provided citation supports a given " +
  "statement. You should predict a continuous score between 0 and 1 " +
  "(inclusive), where 0 is not supported, 1 is fully supported, and a float " +
  "value between 0 and 1 is partially supported. Let's think step by step.";

export function buildPrompt(kind: PromptKind, statement: string, chunk: string): string {
  const instruction = kind === "discrete" ? DISCRETE_INSTRUCTION : CONTINUOUS_INSTRUCTION;
  return (
    `Instruction:\n${instruction}\n\n` +
    `Statement: ${statement}\n` +
    `Citation: ${chunk}\n\n` +
    `Prediction:`
  );
}

/** Non-fatal template issues, e.g. an empty slot. */
export function promptWarnings(statement: string, chunk: string): string[] {
  const warnings: string[] = [];
  if (statement.trim() === "") warnings.push("empty statement slot");
  if (chunk.trim() === "") warnings.push("empty citation slot");
  return warnings;
}
