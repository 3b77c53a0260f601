// The client re-ranker must reproduce the server's term ordering and
// values exactly (same formula, same tie rule) on the golden bundle
// the server emitted, for lambda 0, 0.3 and 1.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { rankAllTopics, rankTerms, relevanceScores } from "../src/relevance.js";

interface GoldenTerm {
  term: string;
  relevance: number;
}

interface Golden {
  vocabulary: string[];
  phi: number[][];
  p_w: number[];
  expected: Record<string, GoldenTerm[][]>;
}

const here = dirname(fileURLToPath(import.meta.url));
const golden: Golden = JSON.parse(
  readFileSync(join(here, "fixtures", "golden_relevance.json"), "utf-8"),
);

describe("client relevance matches server golden files", () => {
  for (const lambda of ["0.0", "0.3", "1.0"]) {
    it(`lambda = ${lambda}`, () => {
      const ranked = rankAllTopics(
        golden.phi,
        golden.p_w,
        golden.vocabulary,
        Number(lambda),
        golden.vocabulary.length,
      );
      const expected = golden.expected[lambda];
      expect(ranked.length).toBe(expected.length);
      for (let t = 0; t < ranked.length; t++) {
        expect(ranked[t].map((r) => r.term)).toEqual(
          expected[t].map((r) => r.term),
        );
        for (let i = 0; i < ranked[t].length; i++) {
          expect(ranked[t][i].relevance).toBeCloseTo(expected[t][i].relevance, 9);
        }
      }
    });
  }
});

describe("re-ranking semantics", () => {
  it("lambda = 1 orders by phi alone", () => {
    const phi = [0.5, 0.2, 0.3];
    const pW = [0.1, 0.8, 0.1];
    const ranked = rankTerms(phi, pW, ["a", "b", "c"], 1.0);
    expect(ranked.map((r) => r.term)).toEqual(["a", "c", "b"]);
  });

  it("lambda = 0 orders by lift", () => {
    const phi = [0.5, 0.3, 0.2];
    const pW = [0.8, 0.1, 0.1];
    const ranked = rankTerms(phi, pW, ["a", "b", "c"], 0.0);
    expect(ranked.map((r) => r.term)).toEqual(["b", "c", "a"]);
  });

  it("exact ties break by term index", () => {
    const scores = relevanceScores([0.25, 0.25], [0.5, 0.5], 0.3);
    expect(scores[0]).toBe(scores[1]);
    const ranked = rankTerms([0.25, 0.25], [0.5, 0.5], ["later", "zeta"], 0.3);
    expect(ranked[0].term).toBe("later");
  });

  it("rejects lambda outside [0, 1]", () => {
    expect(() => rankTerms([0.5], [0.5], ["a"], 1.5)).toThrow(/lambda/);
  });

  it("needs no server round-trip (pure function of the bundle)", () => {
    const a = rankAllTopics(golden.phi, golden.p_w, golden.vocabulary, 0.42, 10);
    const b = rankAllTopics(golden.phi, golden.p_w, golden.vocabulary, 0.42, 10);
    expect(a).toEqual(b);
  });
});
