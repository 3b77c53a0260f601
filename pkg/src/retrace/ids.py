"""Identifier normalization shared across ingestion and harvesting.

DOIs arrive in many shapes (bare, doi: prefixed, URL form, mixed case).
Cross-source joins require a single canonical form: lowercase, no URL
prefix, no surrounding whitespace.
"""

from __future__ import annotations

import re
import unicodedata

_DOI_URL_RX = re.compile(r"^https?://(?:dx\.)?doi\.org/", re.I)
_DOI_RX = re.compile(r"^10\.\d{4,9}/\S+$")
_ISSN_RX = re.compile(r"^\d{4}-?\d{3}[\dXx]$")
_ISBN_RX = re.compile(r"^(?:\d[- ]?){9,12}[\dXx]$")
_WS_RX = re.compile(r"\s+")
_TITLE_PUNCT_RX = re.compile(r"[^\w\s]", re.UNICODE)


def normalize_doi(raw: str | None) -> str | None:
    """Canonicalize a DOI: strip URL/`doi:` prefixes, trim, lowercase.

    Returns None for empty input or strings that do not look like a DOI
    after stripping.
    """
    if raw is None:
        return None
    doi = raw.strip()
    doi = _DOI_URL_RX.sub("", doi)
    if doi.lower().startswith("doi:"):
        doi = doi[4:].strip()
    doi = doi.strip().lower()
    if not doi:
        return None
    return doi if _DOI_RX.match(doi) else None


def looks_like_doi(value: str) -> bool:
    return bool(_DOI_RX.match(value.strip().lower()))


def looks_like_issn(value: str) -> bool:
    return bool(_ISSN_RX.match(value.strip()))


def looks_like_isbn(value: str) -> bool:
    return bool(_ISBN_RX.match(value.strip()))


def normalize_issn(value: str) -> str:
    v = value.strip().upper().replace(" ", "")
    if "-" not in v and len(v) == 8:
        v = v[:4] + "-" + v[4:]
    return v


def normalize_isbn(value: str) -> str:
    return value.strip().replace("-", "").replace(" ", "").upper()


def normalize_title(title: str) -> str:
    """Fold a title into a join key: NFC, casefold, no punctuation,
    single spaces. Used only when no DOI is available."""
    t = unicodedata.normalize("NFC", title).casefold()
    t = _TITLE_PUNCT_RX.sub(" ", t)
    return _WS_RX.sub(" ", t).strip()
