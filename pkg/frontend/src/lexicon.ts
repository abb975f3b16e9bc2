/**
 * Lexicon scorer reproducing the core formula exactly: with p positive and
 * q negative token hits, score = 0.5 + 0.5 * (p - q) / (p + q), neutral 0.5
 * when nothing hits. Case-insensitive over detached-punctuation tokens.
 */

import { readFileSync } from "node:fs";
import { tokenize } from "./tokenize";

export interface Lexicon {
  positive: Set<string>;
  negative: Set<string>;
}

export function loadLexicon(path: string): Lexicon {
  const payload = JSON.parse(readFileSync(path, "utf-8"));
  if (typeof payload !== "object" || payload === null) {
    throw new Error(`lexicon file is not a JSON object: ${path}`);
  }
  const positive = new Set<string>(
    ((payload.positive ?? []) as string[]).map((w) => String(w).toLowerCase()),
  );
  const negative = new Set<string>(
    ((payload.negative ?? []) as string[]).map((w) => String(w).toLowerCase()),
  );
  return { positive, negative };
}

export function lexiconScore(text: string, lexicon: Lexicon): number {
  let p = 0;
  let q = 0;
  for (const token of tokenize(text)) {
    const lowered = token.toLowerCase();
    // negative wins on overlap, matching the core's lexicon-load order
    if (lexicon.negative.has(lowered)) q += 1;
    else if (lexicon.positive.has(lowered)) p += 1;
  }
  if (p + q === 0) return 0.5;
  return 0.5 + (0.5 * (p - q)) / (p + q);
}
