"""In-text citation records: contexts, sections, sentiments.

A citation context is the sentence containing the reference pointer
(the anchor) plus its immediate neighbors; neighbors missing at
paragraph boundaries are simply omitted, so a context holds 1 to 3
sentences.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from ..errors import DomainError
from ..jsonio import read_json


class Sentiment(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NEUTRAL = "neutral"


class SectionLabel(str, Enum):
    INTRODUCTION = "introduction"
    METHOD = "method"
    ABSTRACT = "abstract"
    RESULTS = "results"
    CONCLUSIONS = "conclusions"
    BACKGROUND = "background"
    DISCUSSION = "discussion"
    FIRST_SECTION = "first_section"
    MIDDLE_SECTION = "middle_section"
    FINAL_SECTION = "final_section"


#: Rhetorical labels, in matching priority order; positional labels are
#: fallbacks only.
RHETORICAL_LABELS = (
    SectionLabel.INTRODUCTION,
    SectionLabel.METHOD,
    SectionLabel.ABSTRACT,
    SectionLabel.RESULTS,
    SectionLabel.CONCLUSIONS,
    SectionLabel.BACKGROUND,
    SectionLabel.DISCUSSION,
)


@dataclass(frozen=True)
class CitationContext:
    anchor: str
    preceding: str | None = None
    following: str | None = None

    def sentences(self) -> list[str]:
        return [s for s in (self.preceding, self.anchor, self.following) if s is not None]

    def to_dict(self) -> dict:
        return {"preceding": self.preceding, "anchor": self.anchor, "following": self.following}

    @classmethod
    def from_dict(cls, d: Mapping) -> "CitationContext":
        return cls(
            anchor=d["anchor"],
            preceding=d.get("preceding"),
            following=d.get("following"),
        )


@dataclass
class InTextCitation:
    id: str
    citing_entity_id: str
    cited_item_id: str
    pointer_text: str
    section: SectionLabel
    context: CitationContext
    sentiment: Sentiment | None = None
    intent: str | None = None
    mentions_retraction: bool | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "citing_entity_id": self.citing_entity_id,
            "cited_item_id": self.cited_item_id,
            "pointer_text": self.pointer_text,
            "section": self.section.value,
            "context": self.context.to_dict(),
            "sentiment": self.sentiment.value if self.sentiment else None,
            "intent": self.intent,
            "mentions_retraction": self.mentions_retraction,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "InTextCitation":
        return cls(
            id=d["id"],
            citing_entity_id=d["citing_entity_id"],
            cited_item_id=d["cited_item_id"],
            pointer_text=d["pointer_text"],
            section=SectionLabel(d["section"]),
            context=CitationContext.from_dict(d["context"]),
            sentiment=Sentiment(d["sentiment"]) if d.get("sentiment") else None,
            intent=d.get("intent"),
            mentions_retraction=d.get("mentions_retraction"),
        )


def extract_context(
    sentences: Sequence[str],
    anchor_index: int,
    pointer_text: str | None = None,
) -> CitationContext:
    """Anchor sentence plus its neighbors (omitted at boundaries).

    When pointer_text is given, its absence from the anchor raises a
    validation warning (not an error: pointers are sometimes split
    across markup in real extractions).
    """
    if not 0 <= anchor_index < len(sentences):
        raise DomainError(
            f"anchor index {anchor_index} out of range for {len(sentences)} sentences"
        )
    anchor = sentences[anchor_index]
    if pointer_text is not None and pointer_text not in anchor:
        warnings.warn(f"anchor sentence lacks pointer {pointer_text!r}")
    return CitationContext(
        anchor=anchor,
        preceding=sentences[anchor_index - 1] if anchor_index > 0 else None,
        following=sentences[anchor_index + 1] if anchor_index < len(sentences) - 1 else None,
    )


def default_section_synonyms() -> dict[SectionLabel, list[str]]:
    raw = json.loads(
        resources.files("retrace.data").joinpath("section_synonyms.json").read_text("utf-8")
    )
    return {SectionLabel(label): list(words) for label, words in raw.items()}


def load_section_synonyms(path: str | Path) -> dict[SectionLabel, list[str]]:
    raw = read_json(path)
    return {SectionLabel(label): list(words) for label, words in raw.items()}


def _title_words(title: str) -> str:
    return " " + " ".join("".join(c if c.isalnum() else " " for c in title.lower()).split()) + " "


def classify_section(
    section_title: str,
    relative_position: float,
    synonyms: Mapping[SectionLabel, Sequence[str]] | None = None,
) -> SectionLabel:
    """Label a section by its title, falling back to its position.

    Titles match on whole-word synonym phrases (so "Background and
    motivation" is background, but "methodist" is not method); when
    nothing matches, the position in the document decides: first third,
    final third, or middle.
    """
    if not 0.0 <= relative_position <= 1.0:
        raise DomainError(f"relative_position must be in [0, 1], got {relative_position}")
    table = synonyms if synonyms is not None else default_section_synonyms()
    haystack = _title_words(section_title)
    for label in RHETORICAL_LABELS:
        for phrase in table.get(label, ()):
            if f" {phrase.lower()} " in haystack:
                return label
    if relative_position < 1 / 3:
        return SectionLabel.FIRST_SECTION
    if relative_position > 2 / 3:
        return SectionLabel.FINAL_SECTION
    return SectionLabel.MIDDLE_SECTION


def load_citations(path: str | Path) -> list[InTextCitation]:
    """Read pre-extracted in-text citations (the contexts file)."""
    data = read_json(path)
    return [InTextCitation.from_dict(d) for d in data["citations"]]


def save_citations(citations: Sequence[InTextCitation], path: str | Path) -> None:
    from ..jsonio import write_json

    write_json(path, {"version": 1, "citations": [c.to_dict() for c in citations]})
