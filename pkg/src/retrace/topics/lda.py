"""Latent Dirichlet allocation via collapsed Gibbs sampling.

The sampler is fully deterministic under a fixed seed. Each document
owns an RNG stream keyed by its content (not its position), and sweeps
visit documents in a canonical content order, so permuting the input
document order changes nothing but which output row a document lands
in. phi/theta come from the final counts with Dirichlet smoothing, so
every probability is strictly positive.
"""

from __future__ import annotations

import hashlib
import warnings
from typing import Callable

import numpy as np
from scipy import sparse
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from ..errors import DomainError

SweepCallback = Callable[[int, "GibbsLda"], None]


def _as_count_matrix(X) -> np.ndarray:
    if sparse.issparse(X):
        X = X.toarray()
    X = np.asarray(X)
    if X.ndim != 2:
        raise DomainError(f"expected a 2D document-term count matrix, got shape {X.shape}")
    if np.any(X < 0):
        raise DomainError("count matrix has negative entries")
    if not np.issubdtype(X.dtype, np.integer):
        rounded = np.rint(X)
        if not np.allclose(X, rounded):
            raise DomainError("count matrix must contain integer counts")
        X = rounded
    return X.astype(np.int64)


def _doc_digest(row: np.ndarray) -> bytes:
    return hashlib.sha256(row.tobytes()).digest()


def _doc_tokens(row: np.ndarray) -> np.ndarray:
    """Expand a count row into a term-index stream (ascending term order)."""
    return np.repeat(np.arange(row.shape[0], dtype=np.int64), row)


class GibbsLda(BaseEstimator, TransformerMixin):
    """Collapsed Gibbs LDA estimator.

    Parameters
    ----------
    n_topics : topic count k (>= 2).
    alpha : document-topic Dirichlet prior; None means 50/k.
    beta : topic-term Dirichlet prior.
    n_iterations : full Gibbs sweeps over the corpus.
    seed : RNG seed; identical inputs + seed give bit-identical output.
    infer_iterations : sweeps used when folding in unseen documents.

    Attributes (after fit)
    ----------------------
    phi_ : (k, V) topic-term distribution, rows sum to 1.
    theta_ : (D, k) document-topic distribution, rows sum to 1.
    assignments_ : per-document arrays of token topic labels.
    components_ : alias of phi_ for ecosystem compatibility.
    """

    def __init__(
        self,
        n_topics: int = 10,
        alpha: float | None = None,
        beta: float = 0.01,
        n_iterations: int = 1000,
        seed: int = 0,
        infer_iterations: int = 50,
    ):
        self.n_topics = n_topics
        self.alpha = alpha
        self.beta = beta
        self.n_iterations = n_iterations
        self.seed = seed
        self.infer_iterations = infer_iterations

    # -- helpers ---------------------------------------------------------

    def _effective_alpha(self) -> float:
        return 50.0 / self.n_topics if self.alpha is None else float(self.alpha)

    def _canonical_order(self, X: np.ndarray) -> tuple[list[int], list[np.random.Generator]]:
        """Content-keyed processing order and per-document RNG streams.

        Duplicate documents are disambiguated by their rank among equal
        contents (stable in input order), so a permutation of the input
        reproduces the identical sampler trajectory.
        """
        digests = [_doc_digest(X[d]) for d in range(X.shape[0])]
        # Stable sort: ties (duplicate contents) keep input order, which
        # fixes each duplicate's rank within its digest group.
        order = sorted(range(X.shape[0]), key=lambda d: digests[d])
        dup_rank: dict[bytes, int] = {}
        gens: list[np.random.Generator] = []
        for d in order:
            rank = dup_rank.get(digests[d], 0)
            dup_rank[digests[d]] = rank + 1
            key = [self.seed, rank] + list(
                np.frombuffer(digests[d], dtype=np.uint32).astype(np.int64)
            )
            gens.append(np.random.Generator(np.random.PCG64(np.random.SeedSequence(key))))
        return order, gens

    # -- fitting ---------------------------------------------------------

    def fit(self, X, y=None, sweep_callback: SweepCallback | None = None) -> "GibbsLda":
        X = _as_count_matrix(X)
        k = self.n_topics
        if k < 2:
            raise DomainError(f"n_topics must be >= 2, got {k}")
        if self.n_iterations < 1:
            raise DomainError("n_iterations must be >= 1")
        if self.beta <= 0:
            raise DomainError("beta must be positive")
        D, V = X.shape
        distinct_terms = int(np.count_nonzero(X.sum(axis=0)))
        if k > distinct_terms:
            raise DomainError(
                f"n_topics={k} exceeds the {distinct_terms} distinct terms in the corpus"
            )
        alpha = self._effective_alpha()
        if alpha <= 0:
            raise DomainError("alpha must be positive")

        empty = [d for d in range(D) if X[d].sum() == 0]
        if empty:
            warnings.warn(
                f"{len(empty)} empty document(s) retained with uniform topic distribution"
            )

        order, gens = self._canonical_order(X)
        tokens = [_doc_tokens(X[d]) for d in order]

        n_tw = np.zeros((k, V), dtype=np.int64)
        n_t = np.zeros(k, dtype=np.int64)
        n_dt = np.zeros((D, k), dtype=np.int64)
        z: list[np.ndarray] = []
        for pos, d in enumerate(order):
            toks = tokens[pos]
            zd = gens[pos].integers(0, k, size=toks.shape[0])
            z.append(zd)
            for t, w in zip(zd, toks):
                n_tw[t, w] += 1
                n_t[t] += 1
                n_dt[d, t] += 1

        self._n_tw = n_tw
        self._n_t = n_t
        self._n_dt = n_dt
        self._alpha_eff = alpha
        self._V = V
        self.token_total_ = int(sum(t.shape[0] for t in tokens))

        beta = self.beta
        vbeta = V * beta
        buf_a = np.empty(k, dtype=np.float64)
        buf_b = np.empty(k, dtype=np.float64)
        for sweep in range(self.n_iterations):
            for pos, d in enumerate(order):
                toks = tokens[pos]
                if toks.shape[0] == 0:
                    continue
                zd = z[pos]
                us = gens[pos].random(size=toks.shape[0])
                doc_counts = n_dt[d]
                for j in range(toks.shape[0]):
                    w = toks[j]
                    t_old = zd[j]
                    n_tw[t_old, w] -= 1
                    n_t[t_old] -= 1
                    doc_counts[t_old] -= 1
                    # (doc_counts + alpha) * (n_tw[:, w] + beta) / (n_t + vbeta)
                    np.add(doc_counts, alpha, out=buf_a)
                    np.add(n_tw[:, w], beta, out=buf_b)
                    np.multiply(buf_a, buf_b, out=buf_a)
                    np.add(n_t, vbeta, out=buf_b)
                    np.divide(buf_a, buf_b, out=buf_a)
                    np.cumsum(buf_a, out=buf_a)
                    t_new = int(np.searchsorted(buf_a, us[j] * buf_a[-1], side="right"))
                    if t_new >= k:  # guard against float edge at the top
                        t_new = k - 1
                    zd[j] = t_new
                    n_tw[t_new, w] += 1
                    n_t[t_new] += 1
                    doc_counts[t_new] += 1
            if sweep_callback is not None:
                sweep_callback(sweep, self)

        self.phi_ = (n_tw + beta) / (n_t + vbeta)[:, None]
        self.theta_ = (n_dt + alpha) / (X.sum(axis=1) + k * alpha)[:, None]
        self.components_ = self.phi_
        self.topic_token_counts_ = n_t.copy()
        assignments = [np.empty(0, dtype=np.int64)] * D
        for pos, d in enumerate(order):
            assignments[d] = z[pos].copy()
        self.assignments_ = assignments
        self.n_features_in_ = V
        return self

    def fit_transform(self, X, y=None, **fit_params) -> np.ndarray:
        return self.fit(X, **fit_params).theta_

    # -- inference on unseen documents -----------------------------------

    def transform(self, X) -> np.ndarray:
        """Fold in documents against the frozen topic-term counts."""
        if not hasattr(self, "phi_"):
            raise NotFittedError("GibbsLda is not fitted yet")
        X = _as_count_matrix(X)
        if X.shape[1] != self._V:
            raise DomainError(
                f"matrix has {X.shape[1]} terms; the model was fitted with {self._V}"
            )
        k = self.n_topics
        alpha = self._alpha_eff
        beta = self.beta
        vbeta = self._V * beta
        theta = np.zeros((X.shape[0], k))
        word_weight = (self._n_tw + beta) / (self._n_t + vbeta)[:, None]
        digests = [_doc_digest(X[d]) for d in range(X.shape[0])]
        dup_rank: dict[bytes, int] = {}
        for d in range(X.shape[0]):
            rank = dup_rank.get(digests[d], 0)
            dup_rank[digests[d]] = rank + 1
            key = [self.seed, 0x70D0, rank] + list(
                np.frombuffer(digests[d], dtype=np.uint32).astype(np.int64)
            )
            gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence(key)))
            toks = _doc_tokens(X[d])
            m = np.zeros(k, dtype=np.int64)
            zd = gen.integers(0, k, size=toks.shape[0])
            for t in zd:
                m[t] += 1
            for _ in range(self.infer_iterations):
                us = gen.random(size=toks.shape[0])
                for j in range(toks.shape[0]):
                    w = toks[j]
                    m[zd[j]] -= 1
                    weights = (m + alpha) * word_weight[:, w]
                    cum = np.cumsum(weights)
                    t_new = int(np.searchsorted(cum, us[j] * cum[-1], side="right"))
                    if t_new >= k:
                        t_new = k - 1
                    zd[j] = t_new
                    m[t_new] += 1
            theta[d] = (m + alpha) / (toks.shape[0] + k * alpha)
        return theta

    # -- mid-training views (used by invariant checks) --------------------

    def current_phi(self) -> np.ndarray:
        return (self._n_tw + self.beta) / (self._n_t + self._V * self.beta)[:, None]

    def current_theta(self) -> np.ndarray:
        alpha = self._alpha_eff
        doc_totals = self._n_dt.sum(axis=1)
        return (self._n_dt + alpha) / (doc_totals + self.n_topics * alpha)[:, None]

    def count_state(self) -> dict:
        return {
            "topic_totals": self._n_t.copy(),
            "token_total": self.token_total_,
            "doc_topic_total": int(self._n_dt.sum()),
            "topic_term_total": int(self._n_tw.sum()),
        }

    def dominant_topics(self) -> np.ndarray:
        if not hasattr(self, "theta_"):
            raise NotFittedError("GibbsLda is not fitted yet")
        return np.argmax(self.theta_, axis=1)
