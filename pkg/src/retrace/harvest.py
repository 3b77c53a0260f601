"""Harvest citation links from pluggable open citation index sources,
merge them across sources, and enrich the citing entities.

All tests and the default pipeline run on fixture adapters (directories
of per-DOI JSON payloads): one of the two sources the original workflow
used no longer exists, so reproducibility demands offline mode. Live
adapters are optional and rate-limited.
"""

from __future__ import annotations

import hashlib
import re
import threading
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping, Protocol, Sequence

from .errors import AdapterError, DomainError, QuarantineError, TransientFetchError
from .ids import (
    looks_like_isbn,
    looks_like_issn,
    normalize_doi,
    normalize_isbn,
    normalize_issn,
    normalize_title,
)
from .jsonio import read_json, write_json

import json


@dataclass(frozen=True)
class CitationLink:
    citing_id: str  # normalized DOI or source-local id
    cited_id: str  # normalized DOI of the retracted item
    source: str
    creation_year: int | None = None
    citing_title: str | None = None  # join fallback when no DOI

    def to_dict(self) -> dict:
        return {
            "citing_id": self.citing_id,
            "cited_id": self.cited_id,
            "source": self.source,
            "creation_year": self.creation_year,
            "citing_title": self.citing_title,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "CitationLink":
        return cls(
            citing_id=d["citing_id"],
            cited_id=d["cited_id"],
            source=d["source"],
            creation_year=d.get("creation_year"),
            citing_title=d.get("citing_title"),
        )


@dataclass
class CitingEntity:
    id: str
    year: int | None = None
    doi: str | None = None
    title: str | None = None
    venue_title: str | None = None
    venue_ids: list[str] = field(default_factory=list)
    subject_areas: list[str] = field(default_factory=list)
    subject_categories: list[str] = field(default_factory=list)
    abstract: str | None = None
    full_text_available: bool = False
    is_retracted_itself: bool = False
    mentions_retraction: bool | None = None
    sources: set[str] = field(default_factory=set)
    cited_items: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "year": self.year,
            "doi": self.doi,
            "title": self.title,
            "venue_title": self.venue_title,
            "venue_ids": list(self.venue_ids),
            "subject_areas": list(self.subject_areas),
            "subject_categories": list(self.subject_categories),
            "abstract": self.abstract,
            "full_text_available": self.full_text_available,
            "is_retracted_itself": self.is_retracted_itself,
            "mentions_retraction": self.mentions_retraction,
            "sources": sorted(self.sources),
            "cited_items": list(self.cited_items),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "CitingEntity":
        return cls(
            id=d["id"],
            year=d.get("year"),
            doi=d.get("doi"),
            title=d.get("title"),
            venue_title=d.get("venue_title"),
            venue_ids=list(d.get("venue_ids", [])),
            subject_areas=list(d.get("subject_areas", [])),
            subject_categories=list(d.get("subject_categories", [])),
            abstract=d.get("abstract"),
            full_text_available=bool(d.get("full_text_available", False)),
            is_retracted_itself=bool(d.get("is_retracted_itself", False)),
            mentions_retraction=d.get("mentions_retraction"),
            sources=set(d.get("sources", [])),
            cited_items=list(d.get("cited_items", [])),
        )


# --------------------------------------------------------------------------
# Source adapters
# --------------------------------------------------------------------------


class CitationSource(Protocol):
    name: str

    def fetch_raw(self, cited_doi: str) -> bytes: ...

    def parse(self, raw: bytes, cited_doi: str) -> list[CitationLink]: ...


_YEAR_PREFIX_RX = re.compile(r"^(\d{4})")


def _year_from_date(value) -> int | None:
    if value is None:
        return None
    if isinstance(value, int):
        return value
    m = _YEAR_PREFIX_RX.match(str(value).strip())
    return int(m.group(1)) if m else None


def _fixture_filename(doi: str) -> str:
    return doi.replace("/", "_") + ".json"


class CociFixtureSource:
    """COCI-shaped source reading per-DOI JSON arrays from a directory.

    Payload entries carry `citing`, `cited` and `creation` fields; a
    missing file means the source reports no citations for that DOI.
    """

    def __init__(self, name: str, root: str | Path):
        self.name = name
        self.root = Path(root)

    def fetch_raw(self, cited_doi: str) -> bytes:
        path = self.root / _fixture_filename(cited_doi)
        if not path.exists():
            return b"[]"
        return path.read_bytes()

    def parse(self, raw: bytes, cited_doi: str) -> list[CitationLink]:
        try:
            entries = json.loads(raw.decode("utf-8"))
            links = []
            for e in entries:
                citing = normalize_doi(e["citing"]) or e["citing"].strip().lower()
                links.append(CitationLink(
                    citing_id=citing,
                    cited_id=normalize_doi(e["cited"]) or cited_doi,
                    source=self.name,
                    creation_year=_year_from_date(e.get("creation")),
                ))
            return links
        except (ValueError, KeyError, AttributeError, TypeError) as exc:
            raise AdapterError(f"{self.name}: malformed payload for {cited_doi}: {exc}", raw=raw)


class GraphFixtureSource:
    """Second-source adapter: entries carry a source-local `id`, an
    optional `doi`, a `title` and `year` (the title/year pair is the
    cross-source join fallback when the DOI is absent)."""

    def __init__(self, name: str, root: str | Path):
        self.name = name
        self.root = Path(root)

    def fetch_raw(self, cited_doi: str) -> bytes:
        path = self.root / _fixture_filename(cited_doi)
        if not path.exists():
            return b"[]"
        return path.read_bytes()

    def parse(self, raw: bytes, cited_doi: str) -> list[CitationLink]:
        try:
            entries = json.loads(raw.decode("utf-8"))
            links = []
            for e in entries:
                doi = normalize_doi(e.get("doi"))
                links.append(CitationLink(
                    citing_id=doi or str(e["id"]),
                    cited_id=normalize_doi(e.get("cited")) or cited_doi,
                    source=self.name,
                    creation_year=_year_from_date(e.get("year")),
                    citing_title=e.get("title"),
                ))
            return links
        except (ValueError, KeyError, AttributeError, TypeError) as exc:
            raise AdapterError(f"{self.name}: malformed payload for {cited_doi}: {exc}", raw=raw)


class TokenBucket:
    """Simple token-bucket rate limiter (default 5 requests/second)."""

    def __init__(self, rate: float = 5.0, capacity: float | None = None, clock=time.monotonic):
        self.rate = rate
        self.capacity = capacity if capacity is not None else rate
        self._tokens = self.capacity
        self._clock = clock
        self._last = clock()
        self._lock = threading.Lock()

    def acquire(self, sleep=time.sleep) -> None:
        while True:
            with self._lock:
                now = self._clock()
                self._tokens = min(self.capacity, self._tokens + (now - self._last) * self.rate)
                self._last = now
                if self._tokens >= 1.0:
                    self._tokens -= 1.0
                    return
                wait = (1.0 - self._tokens) / self.rate
            sleep(wait)


class CociLiveSource:
    """Live COCI-style REST source. GETs <base_url>/citations/<doi>;
    404 and empty bodies mean no citations. 5xx raises a retryable
    error so fetch_citations can back off."""

    def __init__(self, name: str, base_url: str, rate_limit: TokenBucket | None = None):
        self.name = name
        self.base_url = base_url.rstrip("/")
        self.rate_limit = rate_limit or TokenBucket()

    def fetch_raw(self, cited_doi: str) -> bytes:
        import requests

        self.rate_limit.acquire()
        url = f"{self.base_url}/citations/{cited_doi}"
        try:
            resp = requests.get(url, timeout=30)
        except requests.RequestException as exc:
            raise TransientFetchError(f"{self.name}: network failure for {cited_doi}: {exc}")
        if resp.status_code == 404:
            return b"[]"
        if resp.status_code >= 500:
            raise TransientFetchError(f"{self.name}: HTTP {resp.status_code} for {cited_doi}")
        if resp.status_code != 200:
            raise AdapterError(
                f"{self.name}: HTTP {resp.status_code} for {cited_doi}", raw=resp.content
            )
        return resp.content or b"[]"

    def parse(self, raw: bytes, cited_doi: str) -> list[CitationLink]:
        return CociFixtureSource(self.name, ".").parse(raw, cited_doi)


# --------------------------------------------------------------------------
# Fetching with cache
# --------------------------------------------------------------------------


class FetchCache:
    """Disk cache keyed by (source, doi): cache/<source>/<doi-hash>.json.

    Stores the raw payload bytes, so a cache hit is byte-identical to
    the original fetch. Writes are serialized per key.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self._locks: dict[tuple[str, str], threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _path(self, source: str, doi: str) -> Path:
        digest = hashlib.sha1(doi.encode("utf-8")).hexdigest()
        return self.root / source / f"{digest}.json"

    def _lock_for(self, source: str, doi: str) -> threading.Lock:
        key = (source, doi)
        with self._locks_guard:
            if key not in self._locks:
                self._locks[key] = threading.Lock()
            return self._locks[key]

    def get(self, source: str, doi: str) -> bytes | None:
        path = self._path(source, doi)
        return path.read_bytes() if path.exists() else None

    def put(self, source: str, doi: str, payload: bytes) -> None:
        path = self._path(source, doi)
        with self._lock_for(source, doi):
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".tmp")
            tmp.write_bytes(payload)
            tmp.replace(path)


def fetch_citations(
    source: CitationSource,
    cited_doi: str,
    cache: FetchCache | None = None,
    max_retries: int = 3,
    backoff_base: float = 0.5,
    sleep=time.sleep,
) -> list[CitationLink]:
    """Fetch all citation links a source reports for one DOI.

    Transient failures are retried with exponential backoff up to
    max_retries; a DOI with no citations yields an empty list.
    """
    doi = normalize_doi(cited_doi)
    if doi is None:
        raise DomainError(f"not a DOI: {cited_doi!r}")
    raw = cache.get(source.name, doi) if cache else None
    if raw is None:
        attempt = 0
        while True:
            try:
                raw = source.fetch_raw(doi)
                break
            except TransientFetchError:
                attempt += 1
                if attempt > max_retries:
                    raise
                sleep(backoff_base * (2 ** (attempt - 1)))
        if cache:
            cache.put(source.name, doi, raw)
    return source.parse(raw, doi)


# --------------------------------------------------------------------------
# Merge across sources
# --------------------------------------------------------------------------


def _join_key(link: CitationLink) -> tuple:
    doi = normalize_doi(link.citing_id)
    if doi:
        return ("doi", doi)
    if link.citing_title and link.creation_year is not None:
        return ("title", normalize_title(link.citing_title), link.creation_year)
    return ("local", link.source, link.citing_id)


@dataclass
class YearConflict:
    entity_id: str
    years: list[int]
    kept: int

    def to_dict(self) -> dict:
        return {"entity_id": self.entity_id, "years": self.years, "kept": self.kept}


@dataclass
class MergeResult:
    entities: list[CitingEntity]
    conflicts: list[YearConflict]


def merge_sources(links_by_source: Mapping[str, Sequence[CitationLink]]) -> MergeResult:
    """Deduplicate citing works across sources.

    Join key: normalized DOI when present, else (normalized title, year),
    else the source-local id (which never merges across sources). The
    output size obeys inclusion-exclusion over the key sets; conflicting
    years for one key keep the earliest and log a conflict.
    """
    buckets: dict[tuple, list[CitationLink]] = {}
    for source in sorted(links_by_source):
        for link in links_by_source[source]:
            buckets.setdefault(_join_key(link), []).append(link)
    entities: list[CitingEntity] = []
    conflicts: list[YearConflict] = []
    for key in sorted(buckets, key=repr):
        links = buckets[key]
        dois = sorted({d for d in (normalize_doi(l.citing_id) for l in links) if d})
        doi = dois[0] if dois else None
        if doi:
            ent_id = doi
        else:
            first = min(links, key=lambda l: (l.source, l.citing_id))
            ent_id = f"{first.source}:{first.citing_id}"
        years = sorted({l.creation_year for l in links if l.creation_year is not None})
        year = years[0] if years else None
        if len(years) > 1:
            conflicts.append(YearConflict(entity_id=ent_id, years=years, kept=year))
        titles = [l.citing_title for l in links if l.citing_title]
        entities.append(CitingEntity(
            id=ent_id,
            doi=doi,
            year=year,
            title=titles[0] if titles else None,
            sources={l.source for l in links},
            cited_items=sorted({l.cited_id for l in links}),
        ))
    return MergeResult(entities=entities, conflicts=conflicts)


def entity_links(entity: CitingEntity, source: str = "merged") -> list[CitationLink]:
    """Re-express an entity as links (used to check merge idempotence)."""
    return [
        CitationLink(
            citing_id=entity.doi or entity.id,
            cited_id=cited,
            source=source,
            creation_year=entity.year,
            citing_title=entity.title,
        )
        for cited in entity.cited_items
    ]


# --------------------------------------------------------------------------
# Metadata enrichment
# --------------------------------------------------------------------------


class MetadataSource:
    """Fixture-backed metadata lookup keyed by DOI or entity id."""

    def __init__(self, records: Mapping[str, Mapping]):
        self.records = dict(records)

    @classmethod
    def load(cls, path: str | Path) -> "MetadataSource":
        return cls(read_json(path))

    def lookup(self, entity: CitingEntity) -> Mapping | None:
        for key in (entity.doi, entity.id):
            if key and key in self.records:
                return self.records[key]
        return None


#: Metadata `type` labels that mark an entry as not a scholarly
#: publication; such entities go to the quarantine queue for review.
DEFAULT_INVALID_TYPES = frozenset({
    "bibliography", "retraction notice", "presentation", "data repository",
})


def resolve_metadata(
    entity: CitingEntity,
    metadata: MetadataSource,
    invalid_types: frozenset[str] = DEFAULT_INVALID_TYPES,
) -> CitingEntity:
    """Fill year/title/venue/abstract fields from the metadata source.

    Raises QuarantineError when the entity cannot enter the analysis
    set: unresolvable identifier with no year, no year anywhere, or a
    non-scholarly type label. Paywalled entities (no retrievable text)
    are kept with full_text_available=False.
    """
    if not entity.doi and not entity.id:
        raise QuarantineError("entity has no identifier")
    record = metadata.lookup(entity)
    if record is None:
        if entity.year is None:
            raise QuarantineError(f"unresolvable identifier: {entity.id}")
        return entity
    rec_type = str(record.get("type", "")).strip().lower()
    if rec_type and rec_type in invalid_types:
        raise QuarantineError(f"non-scholarly type: {rec_type}")
    year = entity.year if entity.year is not None else _year_from_date(record.get("year"))
    if year is None:
        raise QuarantineError(f"no publication year resolvable for {entity.id}")
    return replace(
        entity,
        year=year,
        title=entity.title or record.get("title"),
        venue_title=entity.venue_title or record.get("venue_title"),
        venue_ids=list(entity.venue_ids or record.get("venue_ids", [])),
        abstract=entity.abstract or record.get("abstract"),
        full_text_available=bool(record.get("full_text_available", False)),
        is_retracted_itself=bool(record.get("is_retracted", False)),
    )


@dataclass
class QuarantinedEntity:
    entity: CitingEntity
    reason: str

    def to_dict(self) -> dict:
        return {"entity": self.entity.to_dict(), "reason": self.reason}


def enrich_entities(
    entities: Iterable[CitingEntity],
    metadata: MetadataSource,
    invalid_types: frozenset[str] = DEFAULT_INVALID_TYPES,
) -> tuple[list[CitingEntity], list[QuarantinedEntity]]:
    enriched, quarantined = [], []
    for ent in entities:
        try:
            enriched.append(resolve_metadata(ent, metadata, invalid_types))
        except QuarantineError as exc:
            quarantined.append(QuarantinedEntity(entity=ent, reason=exc.reason))
    return enriched, quarantined


# --------------------------------------------------------------------------
# Venue classification
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class VenueClassification:
    venue_key: str
    areas: tuple[str, ...]
    categories: tuple[str, ...]
    method: str  # journal_lookup | book_lcc_mapping | unclassified

    def to_dict(self) -> dict:
        return {
            "venue_key": self.venue_key,
            "areas": list(self.areas),
            "categories": list(self.categories),
            "method": self.method,
        }


class LookupTables:
    """Venue lookup tables: journals by ISSN (or normalized title),
    books by ISBN to an LCC class, and LCC prefixes to areas."""

    def __init__(
        self,
        journal: Mapping[str, tuple[tuple[str, ...], tuple[str, ...]]],
        book: Mapping[str, str],
        lcc_rules: Sequence[tuple[str, str]],
        areas_taxonomy: frozenset[str],
        categories_taxonomy: frozenset[str],
    ):
        self.journal = dict(journal)
        self.book = dict(book)
        # longest prefix first so e.g. "BF" beats "B"
        self.lcc_rules = sorted(lcc_rules, key=lambda r: -len(r[0]))
        self.areas_taxonomy = areas_taxonomy
        self.categories_taxonomy = categories_taxonomy
        for issn, (areas, cats) in self.journal.items():
            bad = [a for a in areas if a not in areas_taxonomy]
            if bad:
                raise DomainError(f"journal table {issn}: unknown area(s) {bad}")
            bad = [c for c in cats if c not in categories_taxonomy]
            if bad:
                raise DomainError(f"journal table {issn}: unknown category(ies) {bad}")
        for prefix, area in self.lcc_rules:
            if area not in areas_taxonomy:
                raise DomainError(f"LCC rule {prefix}: unknown area {area!r}")

    @classmethod
    def load(
        cls,
        journal_csv: str | Path,
        book_csv: str | Path | None = None,
        lcc_csv: str | Path | None = None,
    ) -> "LookupTables":
        import csv as _csv
        from importlib import resources

        def read_taxonomy(name: str) -> frozenset[str]:
            text = resources.files("retrace.data").joinpath(name).read_text("utf-8")
            return frozenset(
                line.strip() for line in text.splitlines()
                if line.strip() and not line.startswith("#")
            )

        areas_tax = read_taxonomy("venue_areas.txt")
        cats_tax = read_taxonomy("venue_categories.txt")

        journal: dict[str, tuple[tuple[str, ...], tuple[str, ...]]] = {}
        with open(journal_csv, encoding="utf-8-sig", newline="") as fh:
            for row in _csv.DictReader(fh):
                key = row["venue_key"].strip()
                key = normalize_issn(key) if looks_like_issn(key) else normalize_title(key)
                areas = tuple(a.strip() for a in row["areas"].split(";") if a.strip())
                cats = tuple(c.strip() for c in (row.get("categories") or "").split(";") if c.strip())
                journal[key] = (areas, cats)

        book: dict[str, str] = {}
        if book_csv:
            with open(book_csv, encoding="utf-8-sig", newline="") as fh:
                for row in _csv.DictReader(fh):
                    book[normalize_isbn(row["isbn"])] = row["lcc"].strip().upper()

        if lcc_csv:
            lcc_path = Path(lcc_csv)
            lcc_text = lcc_path.read_text("utf-8")
        else:
            lcc_text = resources.files("retrace.data").joinpath("lcc_to_area.csv").read_text("utf-8")
        rules: list[tuple[str, str]] = []
        reader = _csv.DictReader(lcc_text.splitlines())
        for row in reader:
            rules.append((row["prefix"].strip().upper(), row["area"].strip()))

        return cls(journal, book, rules, areas_tax, cats_tax)

    def area_for_lcc(self, lcc: str) -> str | None:
        code = lcc.strip().upper()
        for prefix, area in self.lcc_rules:
            if code.startswith(prefix):
                return area
        return None


def classify_venue(
    venue_ids: Sequence[str],
    venue_title: str | None,
    tables: LookupTables,
) -> VenueClassification:
    """Classify a venue into subject areas/categories.

    Journals resolve through the ISSN (or title) table; books through
    ISBN -> LCC -> area rules. Unclassified is a valid outcome, never an
    error.
    """
    for vid in venue_ids:
        vid = vid.strip()
        if looks_like_issn(vid):
            key = normalize_issn(vid)
            if key in tables.journal:
                areas, cats = tables.journal[key]
                return VenueClassification(key, areas, cats, "journal_lookup")
    for vid in venue_ids:
        vid = vid.strip()
        if looks_like_isbn(vid):
            key = normalize_isbn(vid)
            lcc = tables.book.get(key)
            if lcc:
                area = tables.area_for_lcc(lcc)
                if area:
                    return VenueClassification(key, (area,), (), "book_lcc_mapping")
    if venue_title:
        key = normalize_title(venue_title)
        if key in tables.journal:
            areas, cats = tables.journal[key]
            return VenueClassification(key, areas, cats, "journal_lookup")
    fallback_key = venue_ids[0] if venue_ids else (venue_title or "")
    return VenueClassification(str(fallback_key), (), (), "unclassified")


# --------------------------------------------------------------------------
# Stage-file IO
# --------------------------------------------------------------------------


def save_links(
    links: Sequence[CitationLink],
    path: str | Path,
) -> None:
    by_source: dict[str, int] = {}
    for l in links:
        by_source[l.source] = by_source.get(l.source, 0) + 1
    write_json(path, {
        "version": 1,
        "links": [l.to_dict() for l in links],
        "by_source_counts": by_source,
    })


def load_links(path: str | Path) -> list[CitationLink]:
    return [CitationLink.from_dict(d) for d in read_json(path)["links"]]


def save_entities(
    entities: Sequence[CitingEntity],
    path: str | Path,
    conflicts: Sequence[YearConflict] = (),
    quarantined: Sequence[QuarantinedEntity] = (),
) -> None:
    write_json(path, {
        "version": 1,
        "entities": [e.to_dict() for e in entities],
        "conflicts": [c.to_dict() for c in conflicts],
        "quarantined": [q.to_dict() for q in quarantined],
    })


def load_entities(path: str | Path) -> list[CitingEntity]:
    return [CitingEntity.from_dict(d) for d in read_json(path)["entities"]]
