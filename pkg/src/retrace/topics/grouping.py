"""Aggregate document-topic distributions by metadata (period,
discipline, subject area, intent, section, ...).

A group's row is the mean of its documents' theta rows, renormalized.
Documents with a list-valued key contribute to each listed group; a
missing key lands the document in the "unknown" bucket. Empty groups
simply have no row.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from ..errors import DomainError

UNKNOWN_GROUP = "unknown"


@dataclass
class GroupedTopicTable:
    group_key: str
    rows: dict[str, np.ndarray]  # group value -> length-k distribution
    doc_counts: dict[str, int]

    def to_dict(self) -> dict:
        return {
            "group_key": self.group_key,
            "rows": {g: [float(v) for v in row] for g, row in sorted(self.rows.items())},
            "doc_counts": dict(sorted(self.doc_counts.items())),
        }


def group_topic_distribution(
    theta: np.ndarray,
    doc_ids: Sequence[str],
    doc_metadata: Mapping[str, Mapping],
    group_key: str,
) -> GroupedTopicTable:
    if theta.shape[0] != len(doc_ids):
        raise DomainError("theta row count does not match doc_ids")
    members: dict[str, list[int]] = {}
    for row, doc_id in enumerate(doc_ids):
        value = doc_metadata.get(doc_id, {}).get(group_key)
        if value is None or value == [] or value == "":
            groups = [UNKNOWN_GROUP]
        elif isinstance(value, (list, tuple)):
            groups = [str(v) for v in value]
        else:
            groups = [str(value)]
        for g in groups:
            members.setdefault(g, []).append(row)
    rows: dict[str, np.ndarray] = {}
    counts: dict[str, int] = {}
    for g, idxs in members.items():
        mean = theta[idxs].mean(axis=0)
        rows[g] = mean / mean.sum()
        counts[g] = len(idxs)
    return GroupedTopicTable(group_key=group_key, rows=rows, doc_counts=counts)


def write_grouped_csv(table: GroupedTopicTable, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    k = len(next(iter(table.rows.values()))) if table.rows else 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([table.group_key, "docs"] + [f"topic_{t}" for t in range(k)])
        for g in sorted(table.rows):
            w.writerow([g, table.doc_counts[g]] + [f"{v:.10g}" for v in table.rows[g]])
