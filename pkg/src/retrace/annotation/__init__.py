"""In-text citation modeling, the intent decision tree, the append-only
annotation store, and the workbench HTTP API."""

from .model import (
    CitationContext,
    InTextCitation,
    SectionLabel,
    Sentiment,
    classify_section,
    extract_context,
    load_citations,
    save_citations,
)
from .sentences import split_sentences
from .store import AnnotationRecord, AnnotationStore, StoreLockedError
from .tree import CitoDecisionTree, TraversalState

__all__ = [
    "AnnotationRecord",
    "AnnotationStore",
    "CitationContext",
    "CitoDecisionTree",
    "InTextCitation",
    "SectionLabel",
    "Sentiment",
    "StoreLockedError",
    "TraversalState",
    "classify_section",
    "extract_context",
    "load_citations",
    "save_citations",
    "split_sentences",
]
