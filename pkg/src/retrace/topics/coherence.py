"""Corpus-internal (UMass-style) topic coherence and k selection.

Coherence of a topic is the sum over ordered top-term pairs (i < j) of
log((codoc(w_i, w_j) + 1) / docfreq(w_j)); the model score is the mean
over topics. It needs no external reference corpus, which keeps model
selection reproducible offline. Higher is better.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from ..errors import DomainError
from .lda import GibbsLda, _as_count_matrix


def top_terms(phi_row: np.ndarray, n: int) -> np.ndarray:
    """Indices of the n largest entries, ties broken by term index."""
    order = np.lexsort((np.arange(phi_row.shape[0]), -phi_row))
    return order[:n]


def umass_coherence(model: GibbsLda, X, top_n: int = 10) -> float:
    """Mean per-topic coherence of a fitted model over its corpus."""
    X = _as_count_matrix(X)
    if X.shape[1] != model.phi_.shape[1]:
        raise DomainError("corpus and model vocabulary sizes differ")
    if top_n > X.shape[1]:
        warnings.warn(f"top_n={top_n} exceeds vocabulary size {X.shape[1]}; clamped")
        top_n = X.shape[1]
    presence = (X > 0).astype(np.int64)
    docfreq = presence.sum(axis=0)
    scores = []
    for t in range(model.phi_.shape[0]):
        terms = top_terms(model.phi_[t], top_n)
        cols = presence[:, terms]
        co = cols.T @ cols  # co[i, j] = number of docs containing both
        total = 0.0
        for j in range(len(terms)):
            df_j = docfreq[terms[j]]
            if df_j == 0:
                raise DomainError(
                    f"term index {int(terms[j])} never occurs in the corpus; "
                    "was the model fitted on this matrix?"
                )
            for i in range(j):
                total += math.log((co[i, j] + 1) / df_j)
        scores.append(total)
    return float(np.mean(scores))


@dataclass
class CoherenceReport:
    per_k: dict[int, float]
    chosen_k: int
    top_n: int

    def to_dict(self) -> dict:
        return {
            "per_k": {str(k): v for k, v in sorted(self.per_k.items())},
            "chosen_k": self.chosen_k,
            "top_n": self.top_n,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "CoherenceReport":
        return cls(
            per_k={int(k): float(v) for k, v in d["per_k"].items()},
            chosen_k=int(d["chosen_k"]),
            top_n=int(d["top_n"]),
        )


def select_k(
    X,
    k_range: Sequence[int],
    alpha: float | None = None,
    beta: float = 0.01,
    n_iterations: int = 200,
    seed: int = 0,
    top_n: int = 10,
) -> CoherenceReport:
    """Fit one model per candidate k and pick the coherence argmax.

    Each k gets its own deterministic seed derived from (seed, k), so
    the sweep is reproducible and parallelizable. Ties go to the
    smallest k.
    """
    ks = sorted(set(int(k) for k in k_range))
    if not ks:
        raise DomainError("k_range is empty")
    per_k: dict[int, float] = {}
    for k in ks:
        sub_seed = int(np.random.SeedSequence([seed, k]).generate_state(1)[0])
        model = GibbsLda(
            n_topics=k, alpha=alpha, beta=beta, n_iterations=n_iterations, seed=sub_seed
        )
        try:
            model.fit(X)
        except DomainError as exc:
            raise DomainError(f"fit failed for k={k}: {exc}") from exc
        per_k[k] = umass_coherence(model, X, top_n=top_n)
    chosen = min(ks, key=lambda k: (-per_k[k], k))
    return CoherenceReport(per_k=per_k, chosen_k=chosen, top_n=top_n)
