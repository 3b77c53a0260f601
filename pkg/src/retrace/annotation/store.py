"""Append-only annotation store (JSON lines, one event per line).

Human judgments are too expensive to lose or silently overwrite: every
annotation is an immutable event, the latest event per citation wins
for reporting, and replaying the log reconstructs the exact state. A
lockfile enforces a single writer; readers see immutable snapshots.
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from ..errors import DomainError, RetraceError
from ..jsonio import dumps_compact
from .model import InTextCitation, Sentiment


class StoreLockedError(RetraceError):
    pass


@dataclass(frozen=True)
class AnnotationRecord:
    seq: int
    citation_id: str
    sentiment: str
    intent: str
    mentions_retraction: bool
    annotator: str
    timestamp: float

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "citation_id": self.citation_id,
            "sentiment": self.sentiment,
            "intent": self.intent,
            "mentions_retraction": self.mentions_retraction,
            "annotator": self.annotator,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "AnnotationRecord":
        return cls(
            seq=int(d["seq"]),
            citation_id=d["citation_id"],
            sentiment=d["sentiment"],
            intent=d["intent"],
            mentions_retraction=bool(d["mentions_retraction"]),
            annotator=d["annotator"],
            timestamp=float(d["timestamp"]),
        )


class AnnotationStore:
    """Event log over a citation registry.

    `citations` maps citation ids to their records; when given, events
    for unknown ids are rejected. `intent_vocabulary` (usually the
    decision tree's) validates the intent enum.
    """

    def __init__(
        self,
        path: str | Path,
        citations: Mapping[str, InTextCitation] | None = None,
        intent_vocabulary: tuple[str, ...] | None = None,
        lock: bool = True,
        clock=time.time,
    ):
        self.path = Path(path)
        self.citations = dict(citations) if citations is not None else None
        self.intent_vocabulary = intent_vocabulary
        self._clock = clock
        self._write_lock = threading.Lock()
        self._events: list[AnnotationRecord] = []
        self._latest: dict[str, AnnotationRecord] = {}
        self._lockfile: Path | None = None
        if lock:
            self._acquire_lock()
        self.path.parent.mkdir(parents=True, exist_ok=True)
        if self.path.exists():
            self._load()

    # -- locking ----------------------------------------------------------

    def _acquire_lock(self) -> None:
        lockfile = self.path.with_name(self.path.name + ".lock")
        try:
            fd = os.open(lockfile, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise StoreLockedError(
                f"annotation store is locked by another writer ({lockfile}); "
                "remove the lockfile if that writer is gone"
            )
        with os.fdopen(fd, "w") as fh:
            fh.write(str(os.getpid()))
        self._lockfile = lockfile

    def close(self) -> None:
        if self._lockfile and self._lockfile.exists():
            self._lockfile.unlink()
            self._lockfile = None

    def __enter__(self) -> "AnnotationStore":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # -- event log --------------------------------------------------------

    def _load(self) -> None:
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = AnnotationRecord.from_dict(json.loads(line))
                self._events.append(rec)
                self._latest[rec.citation_id] = rec

    def record(
        self,
        citation_id: str,
        sentiment: str,
        intent: str,
        mentions_retraction: bool,
        annotator: str,
        timestamp: float | None = None,
    ) -> AnnotationRecord:
        """Validate and append one annotation event."""
        if self.citations is not None and citation_id not in self.citations:
            raise DomainError(f"unknown citation id: {citation_id}")
        try:
            sentiment = Sentiment(sentiment).value
        except ValueError:
            valid = ", ".join(s.value for s in Sentiment)
            raise DomainError(f"invalid sentiment {sentiment!r}; expected one of: {valid}")
        if self.intent_vocabulary is not None and intent not in self.intent_vocabulary:
            raise DomainError(f"intent {intent!r} not in the configured vocabulary")
        if not isinstance(mentions_retraction, bool):
            raise DomainError("mentions_retraction must be a boolean")
        with self._write_lock:
            rec = AnnotationRecord(
                seq=len(self._events) + 1,
                citation_id=citation_id,
                sentiment=sentiment,
                intent=intent,
                mentions_retraction=mentions_retraction,
                annotator=annotator,
                timestamp=self._clock() if timestamp is None else timestamp,
            )
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(dumps_compact(rec.to_dict()) + "\n")
                fh.flush()
            self._events.append(rec)
            self._latest[rec.citation_id] = rec
            return rec

    def latest(self) -> dict[str, AnnotationRecord]:
        """Latest record per citation (the reporting view)."""
        return dict(self._latest)

    def history(self, citation_id: str) -> list[AnnotationRecord]:
        return [e for e in self._events if e.citation_id == citation_id]

    def events(self) -> list[AnnotationRecord]:
        return list(self._events)

    def unannotated_ids(self) -> list[str]:
        if self.citations is None:
            return []
        return sorted(c for c in self.citations if c not in self._latest)

    def state_bytes(self) -> bytes:
        """Canonical bytes of the reporting state; replaying the log
        must reproduce these exactly."""
        state = {cid: rec.to_dict() for cid, rec in self._latest.items()}
        return dumps_compact(state).encode("utf-8")

    @classmethod
    def replay(cls, path: str | Path) -> "AnnotationStore":
        """Rebuild state purely from the log (no lock, no registry)."""
        return cls(path, citations=None, intent_vocabulary=None, lock=False)

    def export_csv(self, path: str | Path) -> None:
        """Write the full event history as CSV (one row per event)."""
        import csv

        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["seq", "citation_id", "sentiment", "intent",
                        "mentions_retraction", "annotator", "timestamp"])
            for e in self._events:
                w.writerow([e.seq, e.citation_id, e.sentiment, e.intent,
                            str(e.mentions_retraction).lower(), e.annotator,
                            repr(e.timestamp)])

    def import_csv(self, path: str | Path) -> int:
        """Append events from a CSV export (same validation as live
        writes; original timestamps preserved, sequence renumbered)."""
        import csv

        count = 0
        with open(path, encoding="utf-8-sig", newline="") as fh:
            for row in csv.DictReader(fh):
                self.record(
                    citation_id=row["citation_id"],
                    sentiment=row["sentiment"],
                    intent=row["intent"],
                    mentions_retraction=row["mentions_retraction"].strip().lower()
                    in ("true", "1", "yes"),
                    annotator=row["annotator"],
                    timestamp=float(row["timestamp"]),
                )
                count += 1
        return count

    def annotated_citations(self) -> list[InTextCitation]:
        """Citation records with the latest annotation applied."""
        if self.citations is None:
            return []
        out = []
        for cid in sorted(self.citations):
            cit = self.citations[cid]
            rec = self._latest.get(cid)
            if rec is not None:
                cit = InTextCitation(
                    id=cit.id,
                    citing_entity_id=cit.citing_entity_id,
                    cited_item_id=cit.cited_item_id,
                    pointer_text=cit.pointer_text,
                    section=cit.section,
                    context=cit.context,
                    sentiment=Sentiment(rec.sentiment),
                    intent=rec.intent,
                    mentions_retraction=rec.mentions_retraction,
                )
            out.append(cit)
        return out
