"""Humanities-affinity scoring for retracted items.

A retracted item tagged as humanities by the source database may still
be substantively about something else (a medical paper with one
journalism tag, say). Each item gets a 0..5 score built from its subject
tags, an independent venue lookup, and two human judgments; items below
a threshold are dropped from the analysis together with their citations.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from importlib import resources

from .errors import DomainError
from .ingest import SubjectTag
from .jsonio import write_json


class HumanitiesTagSet:
    """Case-insensitive membership set for 'is this tag humanities'.

    Ships with a default covering the retraction database's humanities
    disciplines plus the Arts and Humanities venue area and its common
    categories; projects can load their own list (one tag per line).
    """

    def __init__(self, tags: Iterable[str]):
        self._tags = {t.strip().lower() for t in tags if t.strip()}

    def __contains__(self, label: str) -> bool:
        return label.strip().lower() in self._tags

    def __len__(self) -> int:
        return len(self._tags)

    @classmethod
    def default(cls) -> "HumanitiesTagSet":
        text = resources.files("retrace.data").joinpath("humanities_tags.txt").read_text("utf-8")
        return cls(line for line in text.splitlines() if not line.startswith("#"))

    @classmethod
    def from_file(cls, path: str | Path) -> "HumanitiesTagSet":
        with open(path, encoding="utf-8") as fh:
            return cls(line for line in fh if not line.startswith("#"))

    def tag(self, label: str, source: str) -> SubjectTag:
        return SubjectTag(label=label.lower(), is_humanities=label in self, source=source)


@dataclass(frozen=True)
class AffinityInputs:
    retraction_db_subjects: tuple[SubjectTag, ...]
    venue_subjects: tuple[SubjectTag, ...]
    title_is_clearly_humanities: bool
    abstract_judgment: int  # -1 | 0 | 1, human-supplied

    def __post_init__(self) -> None:
        if self.abstract_judgment not in (-1, 0, 1):
            raise DomainError(f"abstract_judgment must be -1, 0 or 1, got {self.abstract_judgment}")


@dataclass(frozen=True)
class AffinityScore:
    base: int
    venue_bonus: int
    all_subjects_bonus: int
    title_bonus: int
    abstract_adjustment: int

    @property
    def total(self) -> int:
        return (
            self.base
            + self.venue_bonus
            + self.all_subjects_bonus
            + self.title_bonus
            + self.abstract_adjustment
        )

    def to_dict(self) -> dict:
        return {
            "base": self.base,
            "venue_bonus": self.venue_bonus,
            "all_subjects_bonus": self.all_subjects_bonus,
            "title_bonus": self.title_bonus,
            "abstract_adjustment": self.abstract_adjustment,
            "total": self.total,
        }


def score_affinity(inputs: AffinityInputs) -> AffinityScore:
    """Score one item.

    Components: a base point for passing the humanities filter; +1 when
    the database subjects AND the venue-derived subjects each contain at
    least one humanities tag (any humanities tag in each list, not
    necessarily the same discipline); +1 when every database subject is
    humanities; the title and abstract components pass through the human
    judgments unchanged.
    """
    rw, venue = inputs.retraction_db_subjects, inputs.venue_subjects
    venue_bonus = int(
        any(t.is_humanities for t in rw) and any(t.is_humanities for t in venue)
    )
    all_subjects_bonus = int(bool(rw) and all(t.is_humanities for t in rw))
    return AffinityScore(
        base=1,
        venue_bonus=venue_bonus,
        all_subjects_bonus=all_subjects_bonus,
        title_bonus=int(bool(inputs.title_is_clearly_humanities)),
        abstract_adjustment=inputs.abstract_judgment,
    )


@dataclass(frozen=True)
class HumanJudgment:
    """Sidecar row: the two subjective affinity components for one item."""

    item_id: str
    title_bonus: int
    abstract_adjustment: int
    note: str = ""


def load_judgments(path: str | Path) -> dict[str, HumanJudgment]:
    """Read the human-judgment sidecar CSV.

    Columns: item_id, title_bonus (0|1), abstract_adjustment (-1|0|1),
    note. Out-of-range values are rejected outright; silent coercion
    would corrupt the audit trail.
    """
    out: dict[str, HumanJudgment] = {}
    with open(path, encoding="utf-8-sig", newline="") as fh:
        for i, row in enumerate(csv.DictReader(fh), start=1):
            title = int(row["title_bonus"])
            abstract = int(row["abstract_adjustment"])
            if title not in (0, 1):
                raise DomainError(f"sidecar row {i}: title_bonus must be 0 or 1, got {title}")
            if abstract not in (-1, 0, 1):
                raise DomainError(
                    f"sidecar row {i}: abstract_adjustment must be -1, 0 or 1, got {abstract}"
                )
            j = HumanJudgment(
                item_id=row["item_id"].strip(),
                title_bonus=title,
                abstract_adjustment=abstract,
                note=(row.get("note") or "").strip(),
            )
            out[j.item_id] = j
    return out


@dataclass
class AffinityFilterResult:
    kept: list[str]
    dropped: list[tuple[str, int]]  # (item_id, total) for audit
    threshold: int


def filter_by_affinity(
    scores: Mapping[str, AffinityScore],
    threshold: int = 2,
) -> AffinityFilterResult:
    """Partition scored items at the threshold (kept means total >= it)."""
    kept, dropped = [], []
    for item_id in sorted(scores):
        total = scores[item_id].total
        if total >= threshold:
            kept.append(item_id)
        else:
            dropped.append((item_id, total))
    return AffinityFilterResult(kept=kept, dropped=dropped, threshold=threshold)


def require_all_scored(item_ids: Iterable[str], scores: Mapping[str, AffinityScore]) -> None:
    missing = [i for i in item_ids if i not in scores]
    if missing:
        raise DomainError(f"unscored item(s): {', '.join(sorted(missing))}")


def save_scores(scores: Mapping[str, AffinityScore], path: str | Path) -> None:
    """Audit JSON with the full component breakdown of every score."""
    write_json(path, {
        "version": 1,
        "scores": {item: scores[item].to_dict() for item in sorted(scores)},
    })


def load_scores(path: str | Path) -> dict[str, AffinityScore]:
    from .jsonio import read_json

    data = read_json(path)
    return {
        item: AffinityScore(
            base=s["base"],
            venue_bonus=s["venue_bonus"],
            all_subjects_bonus=s["all_subjects_bonus"],
            title_bonus=s["title_bonus"],
            abstract_adjustment=s["abstract_adjustment"],
        )
        for item, s in data["scores"].items()
    }


def save_selection(result: AffinityFilterResult, path: str | Path) -> None:
    write_json(path, {
        "version": 1,
        "threshold": result.threshold,
        "kept": result.kept,
        "dropped": [{"id": i, "total": t} for i, t in result.dropped],
    })


def load_selection(path: str | Path) -> AffinityFilterResult:
    from .jsonio import read_json

    data = read_json(path)
    return AffinityFilterResult(
        kept=list(data["kept"]),
        dropped=[(d["id"], d["total"]) for d in data["dropped"]],
        threshold=data["threshold"],
    )
