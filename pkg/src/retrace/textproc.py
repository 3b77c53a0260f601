"""Bag-of-words corpus construction for abstracts and citation contexts.

Pipeline: lowercase + NFC normalize, extract letter runs (punctuation,
digits and symbols dropped), remove stop-words, optionally lemmatize,
then stem. Stop-word filtering runs again after stemming so domain
stop-words like "method" also catch inflected surface forms ("methods"
stems to "method").
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import sparse
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from . import _porter
from .errors import DomainError
from .jsonio import read_json, sha256_obj, write_json

_WORD_RX = re.compile(r"[^\W\d_]+", re.UNICODE)


def load_wordlist(path: str | Path) -> frozenset[str]:
    with open(path, encoding="utf-8") as fh:
        return frozenset(
            line.strip().lower() for line in fh
            if line.strip() and not line.startswith("#")
        )


def default_stopwords() -> frozenset[str]:
    text = resources.files("retrace.data").joinpath("stopwords_en.txt").read_text("utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip() and not w.startswith("#"))


def default_lemma_table() -> dict[str, str]:
    text = resources.files("retrace.data").joinpath("lemma_exceptions.txt").read_text("utf-8")
    table = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        form, lemma = line.split()
        table[form] = lemma
    return table


@dataclass(frozen=True)
class TokenPipelineConfig:
    base_stopwords: frozenset[str] = field(default_factory=default_stopwords)
    extra_stopwords: frozenset[str] = frozenset()
    min_token_length: int = 2
    stemming: bool = True
    lemmatization: bool = False
    lemma_table: Mapping[str, str] | None = None

    def __post_init__(self) -> None:
        if self.min_token_length < 1:
            raise DomainError("min_token_length must be >= 1")
        lowered_base = frozenset(w.lower() for w in self.base_stopwords)
        lowered_extra = frozenset(w.lower() for w in self.extra_stopwords)
        object.__setattr__(self, "base_stopwords", lowered_base)
        object.__setattr__(self, "extra_stopwords", lowered_extra)

    @property
    def stopwords(self) -> frozenset[str]:
        return self.base_stopwords | self.extra_stopwords


def _strip_diacritics(token: str) -> str:
    decomposed = unicodedata.normalize("NFKD", token)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


def tokenize(text: str, config: TokenPipelineConfig | None = None) -> list[str]:
    """Turn raw text into the pipeline's token list. Empty output is fine."""
    cfg = config or TokenPipelineConfig()
    stop = cfg.stopwords
    normalized = unicodedata.normalize("NFC", text).lower()
    out: list[str] = []
    for m in _WORD_RX.finditer(normalized):
        tok = m.group()
        if len(tok) < cfg.min_token_length or tok in stop:
            continue
        if cfg.lemmatization:
            table = cfg.lemma_table if cfg.lemma_table is not None else default_lemma_table()
            tok = table.get(tok, tok)
            if tok in stop:
                continue
        if cfg.stemming:
            # The stemmer is ASCII-only; accents are folded just here so
            # accented text stays intact when stemming is off.
            tok = _porter.stem(_strip_diacritics(tok))
            if not tok or tok in stop:
                continue
        out.append(tok)
    return out


class BagOfWordsVectorizer(BaseEstimator, TransformerMixin):
    """Count-vector transformer over the token pipeline.

    fit() learns a sorted vocabulary of tokens whose corpus frequency
    meets `min_count`; transform() maps documents onto that vocabulary
    (unknown tokens are dropped). Composes with standard pipelines.
    """

    def __init__(self, config: TokenPipelineConfig | None = None, min_count: int = 1):
        self.config = config
        self.min_count = min_count

    def _cfg(self) -> TokenPipelineConfig:
        return self.config or TokenPipelineConfig()

    def fit(self, raw_documents: Sequence[str], y=None) -> "BagOfWordsVectorizer":
        if self.min_count < 1:
            raise DomainError("min_count must be >= 1")
        cfg = self._cfg()
        totals: dict[str, int] = {}
        n_docs = 0
        for doc in raw_documents:
            n_docs += 1
            for tok in tokenize(doc, cfg):
                totals[tok] = totals.get(tok, 0) + 1
        if n_docs == 0:
            raise DomainError("cannot fit on an empty document collection")
        vocab = sorted(t for t, c in totals.items() if c >= self.min_count)
        if not vocab:
            raise DomainError("nothing to model: all documents tokenized to empty")
        self.vocabulary_ = vocab
        self.term_index_ = {t: i for i, t in enumerate(vocab)}
        return self

    def transform(self, raw_documents: Sequence[str]) -> sparse.csr_matrix:
        if not hasattr(self, "vocabulary_"):
            raise NotFittedError("BagOfWordsVectorizer is not fitted yet")
        cfg = self._cfg()
        indptr = [0]
        indices: list[int] = []
        data: list[int] = []
        for doc in raw_documents:
            counts: dict[int, int] = {}
            for tok in tokenize(doc, cfg):
                idx = self.term_index_.get(tok)
                if idx is not None:
                    counts[idx] = counts.get(idx, 0) + 1
            for idx in sorted(counts):
                indices.append(idx)
                data.append(counts[idx])
            indptr.append(len(indices))
        return sparse.csr_matrix(
            (np.asarray(data, dtype=np.int64), indices, indptr),
            shape=(len(indptr) - 1, len(self.vocabulary_)),
        )


@dataclass
class Corpus:
    """A vectorized document collection with per-document metadata.

    counts are sparse {term_index: count} maps; vocabulary order is the
    index space. Metadata carries whatever grouping keys downstream
    analyses need (period, discipline, section, intent, ...).
    """

    doc_ids: list[str]
    counts: list[dict[int, int]]
    vocabulary: list[str]
    doc_metadata: dict[str, dict]

    def __post_init__(self) -> None:
        if len(self.doc_ids) != len(set(self.doc_ids)):
            raise DomainError("doc_ids must be unique")
        v = len(self.vocabulary)
        for doc_id, c in zip(self.doc_ids, self.counts):
            for idx, n in c.items():
                if not (0 <= idx < v):
                    raise DomainError(f"doc {doc_id}: token index {idx} out of range")
                if n <= 0:
                    raise DomainError(f"doc {doc_id}: non-positive count for index {idx}")

    def __len__(self) -> int:
        return len(self.doc_ids)

    def to_matrix(self) -> np.ndarray:
        X = np.zeros((len(self.doc_ids), len(self.vocabulary)), dtype=np.int64)
        for row, c in enumerate(self.counts):
            for idx, n in c.items():
                X[row, idx] = n
        return X

    def term_probabilities(self) -> np.ndarray:
        """Corpus marginal term probabilities p(w)."""
        totals = np.zeros(len(self.vocabulary), dtype=np.float64)
        for c in self.counts:
            for idx, n in c.items():
                totals[idx] += n
        s = totals.sum()
        if s == 0:
            raise DomainError("corpus has no tokens")
        return totals / s

    def to_dict(self) -> dict:
        return {
            "version": 1,
            "vocabulary": self.vocabulary,
            "documents": [
                {"id": doc_id, "counts": {str(k): v for k, v in sorted(c.items())}}
                for doc_id, c in zip(self.doc_ids, self.counts)
            ],
            "metadata": self.doc_metadata,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "Corpus":
        docs = d["documents"]
        return cls(
            doc_ids=[doc["id"] for doc in docs],
            counts=[{int(k): v for k, v in doc["counts"].items()} for doc in docs],
            vocabulary=list(d["vocabulary"]),
            doc_metadata={k: dict(v) for k, v in d.get("metadata", {}).items()},
        )

    def content_hash(self) -> str:
        return sha256_obj(self.to_dict())

    def save(self, path: str | Path) -> None:
        write_json(path, self.to_dict())

    @classmethod
    def load(cls, path: str | Path) -> "Corpus":
        return cls.from_dict(read_json(path))


def build_corpus(
    documents: Iterable[tuple[str, str, Mapping]],
    config: TokenPipelineConfig | None = None,
    min_count: int = 1,
) -> Corpus:
    """Vectorize (doc_id, text, metadata) triples into a Corpus.

    The vocabulary keeps tokens whose total corpus frequency meets
    min_count (default keeps everything: the corpora here are small).
    Documents whose tokens are all filtered stay in the corpus with an
    empty count vector. An entirely empty corpus is an error.
    """
    docs = list(documents)
    if not docs:
        raise DomainError("nothing to model: no documents given")
    ids = [d[0] for d in docs]
    texts = [d[1] for d in docs]
    metadata = {d[0]: dict(d[2]) for d in docs}
    vec = BagOfWordsVectorizer(config=config, min_count=min_count)
    X = vec.fit(texts).transform(texts)
    counts: list[dict[int, int]] = []
    for row in range(X.shape[0]):
        start, end = X.indptr[row], X.indptr[row + 1]
        counts.append({int(i): int(v) for i, v in zip(X.indices[start:end], X.data[start:end])})
    return Corpus(
        doc_ids=ids,
        counts=counts,
        vocabulary=list(vec.vocabulary_),
        doc_metadata=metadata,
    )
