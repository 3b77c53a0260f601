"""Shared fixture builders.

Paper-scale fixtures (474 records, 891/388/344 source sets, the
300-entity report snapshot) are generated deterministically here
rather than stored as files; their arithmetic is what the tests check.
"""

from __future__ import annotations

import numpy as np
import pytest

from retrace.annotation.model import CitationContext, InTextCitation, SectionLabel, Sentiment
from retrace.harvest import CitationLink, CitingEntity
from retrace.ingest import ItemType, RetractedPublication, SubjectTag
from retrace.reports import Snapshot
from retrace.timeline import PairAssignment, assign_period


def make_record(
    rec_id: str,
    pub_year: int = 2000,
    retraction_year: int = 2010,
    disciplines: tuple[str, ...] = ("history",),
    subjects: tuple[tuple[str, bool], ...] | None = None,
    reasons: tuple[str, ...] = ("plagiarism",),
    item_type: ItemType = ItemType.ARTICLE,
    doi: str | None = None,
) -> RetractedPublication:
    if subjects is None:
        subjects = tuple((d, True) for d in disciplines)
    tags = [SubjectTag(label=s, is_humanities=h, source="retraction_db") for s, h in subjects]
    return RetractedPublication(
        id=rec_id,
        title=f"Title of {rec_id}",
        pub_year=pub_year,
        retraction_year=retraction_year,
        doi=doi,
        subjects=tags,
        humanities_disciplines=[s for s, h in subjects if h],
        reasons=list(reasons),
        item_type=item_type,
    )


def two_block_corpus(
    n_docs: int = 40,
    vocab_per_block: int = 50,
    doc_len: int = 60,
    n_core: int = 12,
    core_use: int = 8,
    seed: int = 99,
) -> np.ndarray:
    """Two disjoint-vocabulary blocks of documents.

    Each block has a set of frequent core terms (a random subset appears
    heavily in each doc) plus sporadic rare terms, which makes two the
    coherence-optimal topic count.
    """
    rng = np.random.default_rng(seed)
    V = 2 * vocab_per_block
    X = np.zeros((n_docs, V), dtype=np.int64)
    for d in range(n_docs):
        block = 0 if d < n_docs // 2 else 1
        base = block * vocab_per_block
        cores = rng.choice(n_core, size=core_use, replace=False) + base
        rares = np.arange(n_core, vocab_per_block) + base
        probs = np.zeros(V)
        probs[cores] = 0.7 / core_use
        probs[rares] = 0.3 / len(rares)
        toks = rng.choice(V, size=doc_len, p=probs)
        for w in toks:
            X[d, w] += 1
    return X


@pytest.fixture
def two_block():
    return two_block_corpus()


# ---------------------------------------------------------------------------
# The 300-entity report snapshot
# ---------------------------------------------------------------------------

# Period entity counts and subject-area assignment denominators chosen
# so the Arts and Humanities shares render as 22.94 / 18.42 / 18.14
# (25/109, 7/38, 37/204). Entities: 95 + 35 + 170 = 300; the extra
# assignments (14, 3, 34) come from entities carrying a second area.
REPORT_FIXTURE_PLAN = {
    "P_PRE": {"entities": 95, "assignments": 109, "ah": 25},
    "P_RET": {"entities": 35, "assignments": 38, "ah": 7},
    "P_POST": {"entities": 170, "assignments": 204, "ah": 37},
}

_AREAS = ["Social Sciences", "Medicine", "Psychology", "Engineering"]
_INTENTS = ["obtains_background_from", "cites_for_information", "discusses", "critiques"]
_SECTIONS = [
    SectionLabel.INTRODUCTION, SectionLabel.DISCUSSION,
    SectionLabel.METHOD, SectionLabel.MIDDLE_SECTION,
]
_SENTIMENTS = [Sentiment.NEUTRAL, Sentiment.NEUTRAL, Sentiment.NEGATIVE, Sentiment.POSITIVE]


def build_report_snapshot(seed: int = 7) -> Snapshot:
    """300 citing entities over 3 retracted items, with in-text
    citations for a third of them. Deterministic."""
    rng = np.random.default_rng(seed)
    records = [
        make_record("item-a", 1998, 2008, disciplines=("history",), doi="10.9999/item.a"),
        make_record("item-b", 2001, 2009, disciplines=("religion", "arts"), doi="10.9999/item.b"),
        make_record("item-c", 1995, 2005, disciplines=("philosophy",), doi="10.9999/item.c"),
    ]
    rec_cycle = [r.id for r in records]
    years_for = {
        # (pub, retraction): pick citing years per period
        "P_PRE": lambda rec: int(rng.integers(rec.pub_year, rec.retraction_year)),
        "P_RET": lambda rec: rec.retraction_year,
        "P_POST": lambda rec: int(rng.integers(rec.retraction_year + 1, rec.retraction_year + 9)),
    }
    recs_by_id = {r.id: r for r in records}
    entities: list[CitingEntity] = []
    citations: list[InTextCitation] = []
    n = 0
    for period, plan in REPORT_FIXTURE_PLAN.items():
        n_ent, n_assign, n_ah = plan["entities"], plan["assignments"], plan["ah"]
        n_second = n_assign - n_ent
        for i in range(n_ent):
            n += 1
            ent_id = f"cit-{n:04d}"
            rec = recs_by_id[rec_cycle[n % len(rec_cycle)]]
            year = years_for[period](rec)
            areas = []
            # first n_ah assignments are Arts and Humanities
            primary = "Arts and Humanities" if i < n_ah else _AREAS[i % len(_AREAS)]
            areas.append(primary)
            if i >= n_ent - n_second:
                extra = _AREAS[(i + 1) % len(_AREAS)]
                if extra == primary:
                    extra = _AREAS[(i + 2) % len(_AREAS)]
                areas.append(extra)
            full_text = (n % 12) != 0
            mentions = period in ("P_RET", "P_POST") and (n % 40) == 0
            entities.append(CitingEntity(
                id=ent_id,
                doi=f"10.8888/{ent_id}",
                year=year,
                title=f"Citing work {n}",
                subject_areas=areas,
                full_text_available=full_text,
                mentions_retraction=mentions if full_text else None,
                sources={"coci"},
                cited_items=[rec.id],
            ))
            if n % 3 == 0:
                citations.append(InTextCitation(
                    id=f"ctx-{n:04d}",
                    citing_entity_id=ent_id,
                    cited_item_id=rec.id,
                    pointer_text="[1]",
                    section=_SECTIONS[n % len(_SECTIONS)],
                    context=CitationContext(anchor=f"As shown in [1], claim {n}."),
                    sentiment=_SENTIMENTS[n % len(_SENTIMENTS)],
                    intent=_INTENTS[n % len(_INTENTS)],
                    mentions_retraction=mentions,
                ))
    last_years: dict[str, int] = {}
    for ent in entities:
        for cited in ent.cited_items:
            last_years[cited] = max(last_years.get(cited, ent.year), ent.year)
    pairs = [
        PairAssignment(
            citing_id=ent.id,
            cited_id=ent.cited_items[0],
            citing_year=ent.year,
            assignment=assign_period(
                ent.year,
                recs_by_id[ent.cited_items[0]].pub_year,
                recs_by_id[ent.cited_items[0]].retraction_year,
                last_years[ent.cited_items[0]],
            ),
        )
        for ent in entities
    ]
    return Snapshot(records=records, entities=entities, assignments=pairs, citations=citations)


@pytest.fixture
def report_snapshot() -> Snapshot:
    return build_report_snapshot()


# ---------------------------------------------------------------------------
# Paper-shaped source sets (891 / 388 / 344 -> 935)
# ---------------------------------------------------------------------------


def paper_shaped_sources(
    n_a: int = 891, n_b: int = 388, overlap: int = 344, cited: str = "10.9999/item.a"
) -> dict[str, list[CitationLink]]:
    links_a, links_b = [], []
    for i in range(n_a):
        links_a.append(CitationLink(
            citing_id=f"10.7777/shared.{i}" if i < overlap else f"10.7777/a.{i}",
            cited_id=cited, source="source_a", creation_year=2000 + i % 15,
        ))
    for i in range(n_b):
        links_b.append(CitationLink(
            citing_id=f"10.7777/shared.{i}" if i < overlap else f"10.7777/b.{i}",
            cited_id=cited, source="source_b", creation_year=2000 + i % 15,
        ))
    return {"source_a": links_a, "source_b": links_b}
