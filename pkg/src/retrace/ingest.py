"""Parse retraction records from tabular exports.

The toolkit defines its own canonical CSV schema plus a column-mapping
config so exports from different retraction databases can be adapted
without code changes. Malformed rows are collected into a rejects list
rather than aborting the run: bibliographic exports are dirty and a
single bad row must not lose the batch.
"""

from __future__ import annotations

import csv
import hashlib
import re
import warnings
from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import SchemaError
from .ids import normalize_doi
from .jsonio import read_json, write_json


class ItemType(str, Enum):
    ARTICLE = "article"
    BOOK_CHAPTER = "book_chapter"
    COMMENTARY_EDITORIAL = "commentary_editorial"
    OTHER = "other"


#: Default mapping of source type labels to our buckets. Labels not in
#: the map fall back to OTHER (letters, case reports, articles in press
#: and similar residual types have no exhaustive enumeration upstream).
DEFAULT_ITEM_TYPE_MAP: dict[str, ItemType] = {
    "conference abstract/paper": ItemType.ARTICLE,
    "research article": ItemType.ARTICLE,
    "review article": ItemType.ARTICLE,
    "review articles": ItemType.ARTICLE,
    "article": ItemType.ARTICLE,
    "book chapter": ItemType.BOOK_CHAPTER,
    "book chapters/references": ItemType.BOOK_CHAPTER,
    "book": ItemType.BOOK_CHAPTER,
    "commentary/editorial": ItemType.COMMENTARY_EDITORIAL,
    "commentary/editorials": ItemType.COMMENTARY_EDITORIAL,
    "editorial": ItemType.COMMENTARY_EDITORIAL,
}


@dataclass(frozen=True)
class SubjectTag:
    label: str
    is_humanities: bool
    source: str  # "retraction_db" | "venue_lookup"

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "is_humanities": self.is_humanities,
            "source": self.source,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "SubjectTag":
        return cls(d["label"], bool(d["is_humanities"]), d["source"])


@dataclass
class RetractedPublication:
    id: str
    title: str
    pub_year: int
    retraction_year: int
    doi: str | None = None
    subjects: list[SubjectTag] = field(default_factory=list)
    humanities_disciplines: list[str] = field(default_factory=list)
    reasons: list[str] = field(default_factory=list)
    item_type: ItemType = ItemType.OTHER
    excluded: bool = False
    exclusion_note: str = ""
    # Venue identifiers feed affinity scoring and venue classification.
    venue_title: str | None = None
    venue_issn: str | None = None
    venue_isbn: str | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "pub_year": self.pub_year,
            "retraction_year": self.retraction_year,
            "doi": self.doi,
            "subjects": [t.to_dict() for t in self.subjects],
            "humanities_disciplines": list(self.humanities_disciplines),
            "reasons": list(self.reasons),
            "item_type": self.item_type.value,
            "excluded": self.excluded,
            "exclusion_note": self.exclusion_note,
            "venue_title": self.venue_title,
            "venue_issn": self.venue_issn,
            "venue_isbn": self.venue_isbn,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "RetractedPublication":
        return cls(
            id=d["id"],
            title=d["title"],
            pub_year=int(d["pub_year"]),
            retraction_year=int(d["retraction_year"]),
            doi=d.get("doi"),
            subjects=[SubjectTag.from_dict(t) for t in d.get("subjects", [])],
            humanities_disciplines=list(d.get("humanities_disciplines", [])),
            reasons=list(d.get("reasons", [])),
            item_type=ItemType(d.get("item_type", "other")),
            excluded=bool(d.get("excluded", False)),
            exclusion_note=d.get("exclusion_note", ""),
            venue_title=d.get("venue_title"),
            venue_issn=d.get("venue_issn"),
            venue_isbn=d.get("venue_isbn"),
        )


@dataclass
class RetractionSummary:
    """Four frequency tables over a record set.

    per_year and per_type partition the records (their counts sum to the
    record total); per_discipline and per_reason are multi-label and may
    exceed it.
    """

    per_year: dict[int, int]
    per_discipline: dict[str, int]
    per_reason: dict[str, int]
    per_type: dict[str, int]

    def to_dict(self) -> dict:
        return {
            "per_year": {str(k): v for k, v in sorted(self.per_year.items())},
            "per_discipline": dict(sorted(self.per_discipline.items())),
            "per_reason": dict(sorted(self.per_reason.items())),
            "per_type": dict(sorted(self.per_type.items())),
        }


@dataclass
class RejectedRow:
    row_number: int
    error: str
    raw: dict

    def to_dict(self) -> dict:
        return {"row_number": self.row_number, "error": self.error, "raw": self.raw}


@dataclass
class ParseResult:
    records: list[RetractedPublication]
    rejects: list[RejectedRow]


REQUIRED_FIELDS = ("title", "pub_year", "retraction_year", "subjects", "reasons", "item_type")
OPTIONAL_FIELDS = ("id", "doi", "venue_title", "venue_issn", "venue_isbn")


@dataclass
class ColumnMapping:
    """Maps canonical fields to source column names.

    `humanities_marker` is the macro-category tag that flags a subject as
    a humanities discipline, e.g. ``(HUM) History``.
    """

    columns: dict[str, str]
    delimiter: str = ";"
    humanities_marker: str = "HUM"
    item_type_map: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        missing = [f for f in REQUIRED_FIELDS if f not in self.columns]
        if missing:
            raise SchemaError(f"column mapping lacks required fields: {', '.join(missing)}")

    @classmethod
    def load(cls, path: str | Path) -> "ColumnMapping":
        d = read_json(path)
        return cls(
            columns=d["columns"],
            delimiter=d.get("delimiter", ";"),
            humanities_marker=d.get("humanities_marker", "HUM"),
            item_type_map=d.get("item_type_map", {}),
        )

    def item_type_for(self, label: str) -> ItemType:
        key = label.strip().lower()
        if key in self.item_type_map:
            return ItemType(self.item_type_map[key])
        return DEFAULT_ITEM_TYPE_MAP.get(key, ItemType.OTHER)


_YEAR_RX = re.compile(r"(\d{4})")
_SUBJECT_RX = re.compile(r"^\(([^)]+)\)\s*(.+)$")


def _parse_year(raw: str, what: str) -> int:
    m = _YEAR_RX.search(raw or "")
    if not m:
        raise ValueError(f"unparseable {what}: {raw!r}")
    return int(m.group(1))


def _split_cell(raw: str | None, delimiter: str) -> list[str]:
    if not raw:
        return []
    return [p.strip() for p in raw.split(delimiter) if p.strip()]


def _parse_subjects(cell: str | None, mapping: ColumnMapping) -> list[SubjectTag]:
    tags = []
    for part in _split_cell(cell, mapping.delimiter):
        m = _SUBJECT_RX.match(part)
        if m:
            macro, label = m.group(1).strip(), m.group(2).strip()
            is_hum = macro.upper() == mapping.humanities_marker.upper()
        else:
            label, is_hum = part, False
        tags.append(SubjectTag(label=label.lower(), is_humanities=is_hum, source="retraction_db"))
    return tags


def _stable_id(title: str, pub_year: int, retraction_year: int) -> str:
    key = f"{title}|{pub_year}|{retraction_year}".encode("utf-8")
    return "rec-" + hashlib.sha1(key).hexdigest()[:12]


def parse_retraction_records(
    rows: Iterable[Mapping[str, str]],
    mapping: ColumnMapping,
) -> ParseResult:
    """Parse tabular rows into records, collecting malformed rows.

    Raises SchemaError if a mapped required column is absent from the
    input header; row-level problems (unparseable years, year order
    violations) land in the rejects list instead.
    """
    rows = iter(rows)
    records: list[RetractedPublication] = []
    rejects: list[RejectedRow] = []
    header_checked = False
    for row_number, row in enumerate(rows, start=1):
        if not header_checked:
            present = set(row.keys())
            missing = [
                mapping.columns[f]
                for f in REQUIRED_FIELDS
                if mapping.columns[f] not in present
            ]
            if missing:
                raise SchemaError(f"input is missing required column(s): {', '.join(missing)}")
            header_checked = True
        try:
            records.append(_parse_row(row, mapping))
        except ValueError as exc:
            rejects.append(RejectedRow(row_number=row_number, error=str(exc), raw=dict(row)))
    return ParseResult(records=records, rejects=rejects)


def _parse_row(row: Mapping[str, str], mapping: ColumnMapping) -> RetractedPublication:
    col = mapping.columns
    title = (row.get(col["title"]) or "").strip()
    if not title:
        raise ValueError("empty title")
    pub_year = _parse_year(row.get(col["pub_year"], ""), "pub_year")
    retraction_year = _parse_year(row.get(col["retraction_year"], ""), "retraction_year")
    if retraction_year < pub_year:
        raise ValueError(
            f"year order: retraction_year {retraction_year} precedes pub_year {pub_year}"
        )
    subjects = _parse_subjects(row.get(col["subjects"]), mapping)
    reasons = [r.lower() for r in _split_cell(row.get(col["reasons"]), mapping.delimiter)]
    item_type = mapping.item_type_for(row.get(col["item_type"], "") or "")
    doi = normalize_doi(row.get(col["doi"])) if "doi" in col else None
    rec_id = (row.get(col["id"]) or "").strip() if "id" in col else ""
    if not rec_id:
        rec_id = doi or _stable_id(title, pub_year, retraction_year)

    def _opt(fieldname: str) -> str | None:
        if fieldname not in col:
            return None
        v = (row.get(col[fieldname]) or "").strip()
        return v or None

    return RetractedPublication(
        id=rec_id,
        title=title,
        pub_year=pub_year,
        retraction_year=retraction_year,
        doi=doi,
        subjects=subjects,
        humanities_disciplines=[t.label for t in subjects if t.is_humanities],
        reasons=reasons,
        item_type=item_type,
        venue_title=_opt("venue_title"),
        venue_issn=_opt("venue_issn"),
        venue_isbn=_opt("venue_isbn"),
    )


def read_delimited(path: str | Path) -> list[dict[str, str]]:
    """Read a CSV/TSV file (UTF-8, header row) into row dicts.

    The delimiter is sniffed from the extension: .tsv means tab,
    anything else comma.
    """
    path = Path(path)
    delim = "\t" if path.suffix.lower() == ".tsv" else ","
    with open(path, encoding="utf-8-sig", newline="") as fh:
        return list(csv.DictReader(fh, delimiter=delim))


def filter_humanities(records: Sequence[RetractedPublication]) -> list[RetractedPublication]:
    """Keep records carrying at least one humanities discipline tag."""
    return [r for r in records if r.humanities_disciplines]


@dataclass
class Exclusion:
    id: str
    rationale: str


@dataclass
class ExclusionResult:
    selected: list[RetractedPublication]
    flagged: list[RetractedPublication]

    @property
    def all_records(self) -> list[RetractedPublication]:
        return self.selected + self.flagged


def apply_exclusions(
    records: Sequence[RetractedPublication],
    exclusions: Sequence[Exclusion],
) -> ExclusionResult:
    """Flag excluded records and omit them from downstream selection.

    Records are never deleted: the flag plus rationale stays on the
    record for audit. Unknown ids raise a warning and are ignored.
    """
    known = {r.id for r in records}
    by_id: dict[str, str] = {}
    for exc in exclusions:
        if exc.id not in known:
            warnings.warn(f"exclusion list references unknown id {exc.id!r}; ignored")
            continue
        by_id[exc.id] = exc.rationale
    selected, flagged = [], []
    for rec in records:
        if rec.id in by_id:
            flagged.append(replace(rec, excluded=True, exclusion_note=by_id[rec.id]))
        elif rec.excluded:
            flagged.append(rec)
        else:
            selected.append(rec)
    return ExclusionResult(selected=selected, flagged=flagged)


def load_exclusions(path: str | Path) -> list[Exclusion]:
    data = read_json(path)
    return [Exclusion(id=e["id"], rationale=e.get("rationale", "")) for e in data]


def summarize_retractions(records: Sequence[RetractedPublication]) -> RetractionSummary:
    """Frequency tables over year, discipline, reason and type.

    A record with several reasons counts once in each reason bucket
    (same for disciplines), so those tables may exceed the record total.
    """
    per_year: Counter = Counter(r.retraction_year for r in records)
    per_type: Counter = Counter(r.item_type.value for r in records)
    per_discipline: Counter = Counter()
    per_reason: Counter = Counter()
    for r in records:
        per_discipline.update(set(r.humanities_disciplines))
        per_reason.update(set(r.reasons))
    return RetractionSummary(
        per_year=dict(per_year),
        per_discipline=dict(per_discipline),
        per_reason=dict(per_reason),
        per_type=dict(per_type),
    )


RECORD_STORE_VERSION = 1


def save_records(records: Sequence[RetractedPublication], path: str | Path) -> None:
    write_json(path, {
        "version": RECORD_STORE_VERSION,
        "records": [r.to_dict() for r in records],
    })


def load_records(path: str | Path) -> list[RetractedPublication]:
    data = read_json(path)
    return [RetractedPublication.from_dict(d) for d in data["records"]]


def save_rejects(rejects: Sequence[RejectedRow], path: str | Path) -> None:
    write_json(path, {
        "version": RECORD_STORE_VERSION,
        "rejects": [r.to_dict() for r in rejects],
    })
