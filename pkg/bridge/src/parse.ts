/** Answer extraction for LLM scoring responses.
 *
 * Chain-of-thought text precedes the answer, so the score is taken from the
 * last standalone number in the response. Out-of-range values are clamped
 * and flagged rather than dropped.
 */

import type { PromptKind } from "./prompts.js";

const NUMBER_RE = /-?\d+(?:\.\d+)?/g;

/** The last standalone number in the text, or null if there is none. */
export function extractLastNumber(text: string): number | null {
  const matches = text.match(NUMBER_RE);
  if (!matches || matches.length === 0) return null;
  const value = Number(matches[matches.length - 1]);
  return Number.isFinite(value) ? value : null;
}

export interface ParsedScore {
  score: number;
  clamped: boolean;
}

/** Parse one model response; null means unusable (no number found). */
export function parseScore(kind: PromptKind, response: string): ParsedScore | null {
  const value = extractLastNumber(response);
  if (value === null) return null;
  if (kind === "discrete") {
    // legal answers are exactly 0, 1, or 2; anything else snaps to the nearest
    const snapped = Math.min(2, Math.max(0, Math.round(value)));
    return { score: snapped, clamped: snapped !== value };
  }
  const clamped = Math.min(1, Math.max(0, value));
  return { score: clamped, clamped: clamped !== value };
}
