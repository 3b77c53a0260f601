"""Term relevance ranking for topic display.

relevance(w, t) = lambda * log phi[t, w] + (1 - lambda) * log(phi[t, w] / p(w))

where p(w) is the corpus marginal term probability. lambda = 1 ranks by
within-topic probability alone; lambda = 0 ranks purely by lift. Ties
are broken by term index, so rankings are stable across reruns.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import DomainError


@dataclass
class RelevanceRanking:
    lam: float
    per_topic: list[list[tuple[str, float]]]  # descending (term, relevance)

    def terms_for(self, topic: int) -> list[str]:
        return [t for t, _ in self.per_topic[topic]]

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "per_topic": [
                [{"term": term, "relevance": val} for term, val in topic]
                for topic in self.per_topic
            ],
        }


def relevance_scores(phi: np.ndarray, term_probs: np.ndarray, lam: float) -> np.ndarray:
    """(k, V) relevance values; inputs must be strictly positive."""
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda must be in [0, 1], got {lam}")
    if np.any(phi <= 0):
        raise DomainError("phi has non-positive entries; fit with Dirichlet smoothing")
    if np.any(term_probs <= 0):
        raise DomainError("term probabilities must be strictly positive")
    log_phi = np.log(phi)
    lift = log_phi - np.log(term_probs)[None, :]
    return lam * log_phi + (1.0 - lam) * lift


def rank_terms(
    phi: np.ndarray,
    term_probs: np.ndarray,
    vocabulary: Sequence[str],
    lam: float,
    top_n: int = 30,
) -> RelevanceRanking:
    scores = relevance_scores(phi, term_probs, lam)
    v = len(vocabulary)
    if v != phi.shape[1]:
        raise DomainError("vocabulary length does not match phi width")
    top_n = min(top_n, v)
    per_topic = []
    idx = np.arange(v)
    for t in range(phi.shape[0]):
        order = np.lexsort((idx, -scores[t]))[:top_n]
        per_topic.append([(vocabulary[i], float(scores[t, i])) for i in order])
    return RelevanceRanking(lam=lam, per_topic=per_topic)


def phi_order(phi: np.ndarray) -> list[np.ndarray]:
    """Per-topic term order by raw phi, same tie rule as rank_terms."""
    idx = np.arange(phi.shape[1])
    return [np.lexsort((idx, -phi[t])) for t in range(phi.shape[0])]
