// Client-side term re-ranking: identical formula and tie rule to the
// server, so moving the lambda slider needs no round-trip.
//
//   relevance(w, t) = lambda * log(phi[t][w])
//                   + (1 - lambda) * log(phi[t][w] / p_w[w])
//
// Ties break by term index (stable with the server's ordering).

export interface RankedTerm {
  term: string;
  relevance: number;
}

export function relevanceScores(
  phiRow: number[],
  pW: number[],
  lambda: number,
): number[] {
  if (lambda < 0 || lambda > 1) {
    throw new Error(`lambda must be in [0, 1], got ${lambda}`);
  }
  return phiRow.map((phi, w) => {
    if (phi <= 0 || pW[w] <= 0) {
      throw new Error(`non-positive probability at term ${w}`);
    }
    const logPhi = Math.log(phi);
    const lift = logPhi - Math.log(pW[w]);
    return lambda * logPhi + (1 - lambda) * lift;
  });
}

export function rankTerms(
  phiRow: number[],
  pW: number[],
  vocabulary: string[],
  lambda: number,
  topN = 30,
): RankedTerm[] {
  const scores = relevanceScores(phiRow, pW, lambda);
  const order = vocabulary.map((_, i) => i);
  order.sort((a, b) => (scores[b] - scores[a]) || (a - b));
  return order.slice(0, Math.min(topN, vocabulary.length)).map((i) => ({
    term: vocabulary[i],
    relevance: scores[i],
  }));
}

export function rankAllTopics(
  phi: number[][],
  pW: number[],
  vocabulary: string[],
  lambda: number,
  topN = 30,
): RankedTerm[][] {
  return phi.map((row) => rankTerms(row, pW, vocabulary, lambda, topN));
}
