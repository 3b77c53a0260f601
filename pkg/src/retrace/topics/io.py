"""Serialization of fitted models and visualization bundles.

The visualization bundle carries everything a client needs to re-rank
terms at any lambda locally (phi, p(w), vocabulary) plus the topic map,
so exploration requires no server round-trips.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping

import numpy as np

from ..errors import DomainError
from ..jsonio import read_json, write_json
from ..textproc import Corpus
from .grouping import group_topic_distribution
from .lda import GibbsLda
from .projection import topic_map
from .relevance import rank_terms

MODEL_VERSION = 1
BUNDLE_VERSION = 1


def model_to_dict(model: GibbsLda, corpus_hash: str | None = None) -> dict:
    return {
        "version": MODEL_VERSION,
        "k": model.n_topics,
        "alpha": model.alpha,
        "beta": model.beta,
        "n_iterations": model.n_iterations,
        "seed": model.seed,
        "phi": [[float(v) for v in row] for row in model.phi_],
        "theta": [[float(v) for v in row] for row in model.theta_],
        "topic_token_counts": [int(v) for v in model.topic_token_counts_],
        "corpus_hash": corpus_hash,
    }


def model_from_dict(d: Mapping) -> GibbsLda:
    if d.get("version") != MODEL_VERSION:
        raise DomainError(f"unsupported model version {d.get('version')!r}")
    model = GibbsLda(
        n_topics=int(d["k"]),
        alpha=d["alpha"],
        beta=float(d["beta"]),
        n_iterations=int(d["n_iterations"]),
        seed=int(d["seed"]),
    )
    model.phi_ = np.asarray(d["phi"], dtype=np.float64)
    model.theta_ = np.asarray(d["theta"], dtype=np.float64)
    model.components_ = model.phi_
    model.topic_token_counts_ = np.asarray(d["topic_token_counts"], dtype=np.int64)
    model._n_tw = None  # transform() on a deserialized model is unsupported
    model._V = model.phi_.shape[1]
    model._alpha_eff = model._effective_alpha()
    model.token_total_ = int(model.topic_token_counts_.sum())
    model.n_features_in_ = model._V
    return model


def save_model(model: GibbsLda, path: str | Path, corpus_hash: str | None = None) -> None:
    write_json(path, model_to_dict(model, corpus_hash))


def load_model(path: str | Path) -> GibbsLda:
    return model_from_dict(read_json(path))


def build_vis_bundle(
    model: GibbsLda,
    corpus: Corpus,
    default_lambda: float = 0.3,
    top_n: int = 30,
    group_keys: tuple[str, ...] = ("period",),
) -> dict:
    """Assemble the client-facing bundle for one fitted model."""
    p_w = corpus.term_probabilities()
    tmap = topic_map(model)
    rankings = {
        str(lam): rank_terms(model.phi_, p_w, corpus.vocabulary, lam, top_n).to_dict()
        for lam in (0.0, default_lambda, 1.0)
    }
    grouped = {}
    for key in group_keys:
        table = group_topic_distribution(
            model.theta_, corpus.doc_ids, corpus.doc_metadata, key
        )
        grouped[key] = table.to_dict()
    return {
        "version": BUNDLE_VERSION,
        "k": model.n_topics,
        "vocabulary": corpus.vocabulary,
        "phi": [[float(v) for v in row] for row in model.phi_],
        "p_w": [float(v) for v in p_w],
        "default_lambda": default_lambda,
        "top_n": top_n,
        "topic_map": tmap.to_dict(),
        "relevance": rankings,
        "grouped": grouped,
        "corpus_hash": corpus.content_hash(),
    }
