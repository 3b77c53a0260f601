"""Inter-topic distances and their 2D projection.

Distances are Jensen-Shannon divergences (log base 2, so values live in
[0, 1]) between topic-term rows; the 2D layout is classical
multidimensional scaling (principal coordinates) over that matrix,
following the convention of interactive topic-map visualizations.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from .lda import GibbsLda


def jensen_shannon(p: np.ndarray, q: np.ndarray) -> float:
    """JSD with log base 2: 0.5*KL(p||m) + 0.5*KL(q||m), m = (p+q)/2."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    m = 0.5 * (p + q)

    def kl(a: np.ndarray) -> float:
        mask = a > 0
        return float(np.sum(a[mask] * np.log2(a[mask] / m[mask])))

    return 0.5 * kl(p) + 0.5 * kl(q)


def jsd_matrix(phi: np.ndarray) -> np.ndarray:
    k = phi.shape[0]
    D = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            d = jensen_shannon(phi[i], phi[j])
            D[i, j] = D[j, i] = d
    return D


def classical_mds(D: np.ndarray, n_components: int = 2) -> np.ndarray:
    """Principal-coordinates embedding of a symmetric distance matrix.

    Eigenvector signs are normalized (largest-magnitude coordinate made
    positive) so output is stable across platforms. Non-positive
    eigenvalues map to zero coordinates.
    """
    n = D.shape[0]
    if D.shape != (n, n):
        raise DomainError("distance matrix must be square")
    J = np.eye(n) - np.ones((n, n)) / n
    B = -0.5 * J @ (D ** 2) @ J
    eigvals, eigvecs = np.linalg.eigh(B)
    order = np.argsort(eigvals)[::-1][:n_components]
    coords = np.zeros((n, n_components))
    for c, idx in enumerate(order):
        lam = eigvals[idx]
        if lam <= 1e-12:
            continue
        vec = eigvecs[:, idx]
        pivot = np.argmax(np.abs(vec))
        if vec[pivot] < 0:
            vec = -vec
        coords[:, c] = vec * np.sqrt(lam)
    return coords


@dataclass
class TopicMap:
    distance_matrix: np.ndarray  # (k, k) JSD, symmetric, zero diagonal
    coords_2d: np.ndarray  # (k, 2)
    topic_share: np.ndarray  # (k,) overall prevalence, sums to 1

    def to_dict(self) -> dict:
        return {
            "distance_matrix": [[float(v) for v in row] for row in self.distance_matrix],
            "coords_2d": [[float(v) for v in row] for row in self.coords_2d],
            "topic_share": [float(v) for v in self.topic_share],
        }


def topic_map(model: GibbsLda) -> TopicMap:
    """Build the distance matrix, 2D layout and topic shares of a model."""
    phi = model.phi_
    D = jsd_matrix(phi)
    if np.all(D < 1e-12):
        warnings.warn("all topics identical; projecting every topic to the origin")
        coords = np.zeros((phi.shape[0], 2))
    else:
        coords = classical_mds(D)
    counts = model.topic_token_counts_.astype(np.float64)
    total = counts.sum()
    if total > 0:
        share = counts / total
    else:
        share = np.full(phi.shape[0], 1.0 / phi.shape[0])
    return TopicMap(distance_matrix=D, coords_2d=coords, topic_share=share)
