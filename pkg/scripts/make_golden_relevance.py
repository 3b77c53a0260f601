#!/usr/bin/env python3
"""Emit the golden relevance fixture consumed by the workbench tests.

Builds a small deterministic corpus from the mini fixture's abstracts,
fits an LDA model, and records the server-side term rankings at
lambda 0, 0.3 and 1 so the client re-ranker can be checked against the
exact server ordering and values.
"""

from __future__ import annotations

import json
from pathlib import Path

from retrace.jsonio import read_json
from retrace.textproc import build_corpus
from retrace.topics import GibbsLda, rank_terms

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "frontend" / "tests" / "fixtures" / "golden_relevance.json"


def main() -> None:
    metadata = read_json(ROOT / "tests" / "fixtures" / "mini" / "metadata.json")
    docs = [
        (key, record["abstract"], {})
        for key, record in sorted(metadata.items())
        if record.get("abstract")
    ]
    corpus = build_corpus(docs)
    model = GibbsLda(n_topics=4, n_iterations=300, seed=11).fit(corpus.to_matrix())
    p_w = corpus.term_probabilities()
    v = len(corpus.vocabulary)
    golden = {
        "vocabulary": corpus.vocabulary,
        "phi": [[float(x) for x in row] for row in model.phi_],
        "p_w": [float(x) for x in p_w],
        "expected": {},
    }
    for lam in (0.0, 0.3, 1.0):
        ranking = rank_terms(model.phi_, p_w, corpus.vocabulary, lam, top_n=v)
        golden["expected"][str(lam)] = [
            [{"term": t, "relevance": val} for t, val in topic]
            for topic in ranking.per_topic
        ]
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(golden, sort_keys=True, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {OUT} ({v} terms, 4 topics)")


if __name__ == "__main__":
    main()
