import { z } from "zod";

// The wire token marking the position(s) to fill. Clients send whole
// word tokens; positions still pending appear as this marker.
export const BLANK = "[BLANK]";

export const MASS_TOLERANCE = 1e-3;

const tokenList = z.array(z.string().min(1)).nonempty();

export const FillRequestSchema = z
  .object({
    tokens: tokenList,
    blank_index: z.number().int().nonnegative(),
    top_k: z.number().int().min(1).default(50),
  })
  .strict();

export type FillRequest = z.infer<typeof FillRequestSchema>;

export interface FillResponse {
  entries: [string, number][];
  residual_mass: number;
}

export const ScoreRequestSchema = z
  .object({
    sent_a: tokenList,
    sent_b: tokenList,
  })
  .strict();

export type ScoreRequest = z.infer<typeof ScoreRequestSchema>;

export interface ScoreResponse {
  accept_prob: number;
}

/** A fill model serves a word-level distribution for one blank slot. */
export interface FillModel {
  readonly id: string;
  readonly mode: "stub" | "real";
  fill(tokens: string[], blankIndex: number, topK: number): FillResponse;
}

export interface PairScorer {
  readonly id: string;
  score(sentA: string[], sentB: string[]): number;
}

/**
 * Check the invariants every fill response must satisfy: probabilities
 * descending in (0, 1], single whole-word tokens, and total mass within
 * MASS_TOLERANCE of 1. Returns a reason string or null when clean.
 */
export function fillResponseViolation(res: FillResponse): string | null {
  if (res.entries.length === 0) return "no entries";
  let total = res.residual_mass;
  let prev = Infinity;
  for (const [token, prob] of res.entries) {
    if (!/^\S+$/.test(token) || token.startsWith("##")) {
      return `not a whole word: ${JSON.stringify(token)}`;
    }
    if (!(prob > 0 && prob <= 1)) return `prob out of range: ${prob}`;
    if (prob > prev) return "entries not descending";
    prev = prob;
    total += prob;
  }
  if (Math.abs(total - 1) > MASS_TOLERANCE) {
    return `mass ${total} not within ${MASS_TOLERANCE} of 1`;
  }
  return null;
}
