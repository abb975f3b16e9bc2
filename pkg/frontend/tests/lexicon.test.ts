import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { Lexicon, lexiconScore } from "../src/lexicon";
import { tokenize } from "../src/tokenize";

const FIXTURE = JSON.parse(
  readFileSync(join(__dirname, "..", "..", "tests", "data", "bridge_parity.json"), "utf-8"),
);

function fixtureLexicon(): Lexicon {
  return {
    positive: new Set<string>(FIXTURE.lexicon.positive),
    negative: new Set<string>(FIXTURE.lexicon.negative),
  };
}

describe("tokenize", () => {
  it("detaches edge punctuation", () => {
    expect(tokenize("Sadly, it fell.")).toEqual(["Sadly", ",", "it", "fell", "."]);
  });

  it("keeps interior apostrophes and hyphens", () => {
    expect(tokenize("state-of-the-art isn't bad")).toEqual(["state-of-the-art", "isn't", "bad"]);
  });

  it("handles empty text", () => {
    expect(tokenize("")).toEqual([]);
  });
});

describe("lexiconScore", () => {
  it("is 1.0 on pure positive hits", () => {
    const lexicon: Lexicon = { positive: new Set(["great"]), negative: new Set() };
    expect(lexiconScore("great great day", lexicon)).toBe(1.0);
  });

  it("is neutral with no hits", () => {
    const lexicon: Lexicon = { positive: new Set(["great"]), negative: new Set() };
    expect(lexiconScore("the of and", lexicon)).toBe(0.5);
  });

  it("matches the shared 200-case fixture within 1e-9", () => {
    const lexicon = fixtureLexicon();
    expect(FIXTURE.cases.length).toBe(200);
    for (const testCase of FIXTURE.cases) {
      const got = lexiconScore(testCase.text, lexicon);
      expect(Math.abs(got - testCase.expected)).toBeLessThanOrEqual(1e-9);
    }
  });
});
