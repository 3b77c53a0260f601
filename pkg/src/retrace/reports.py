"""Descriptive-statistics tables and the visualization export bundle.

Every percentage is stored with its count and denominator (and a
2-decimal display string); percentage rows sum to 100 over their stated
denominator. Tables are pure functions of the dataset snapshot, so
re-running a report yields identical bytes.
"""

from __future__ import annotations

import shutil
import tempfile
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from . import svgcharts
from .annotation.model import InTextCitation
from .errors import DomainError
from .harvest import CitingEntity
from .ingest import RetractedPublication
from .jsonio import dumps_canonical, read_json, sha256_file, write_json
from .timeline import FIFTH_LABELS, CitationSeries, PairAssignment, Period, write_series_csv

UNANNOTATED = "unannotated"
UNCLASSIFIED_AREA = "Others"


def pct_display(count: int, denominator: int) -> str:
    return f"{100 * count / denominator:.2f}"


def _pct_cell(count: int, denominator: int) -> dict:
    return {
        "count": count,
        "pct": 100 * count / denominator,
        "pct_display": pct_display(count, denominator),
    }


def _distribution(counter: Mapping[str, int]) -> dict:
    """A labelled frequency table with percentages over its total."""
    denominator = sum(counter.values())
    rows = {
        label: _pct_cell(n, denominator)
        for label, n in sorted(counter.items())
    }
    return {"denominator": denominator, "rows": rows}


@dataclass
class Snapshot:
    """Everything a report needs, assembled from the stage files."""

    records: list[RetractedPublication]
    entities: list[CitingEntity]
    assignments: list[PairAssignment]
    citations: list[InTextCitation] = field(default_factory=list)
    selected_item_ids: set[str] | None = None

    def selected_records(self) -> list[RetractedPublication]:
        recs = [r for r in self.records if not r.excluded]
        if self.selected_item_ids is not None:
            recs = [r for r in recs if r.id in self.selected_item_ids]
        return recs

    def selected_assignments(self) -> list[PairAssignment]:
        keep = {r.id for r in self.selected_records()}
        return [a for a in self.assignments if a.cited_id in keep]


def descriptive_report(snapshot: Snapshot, include_paywalled_in_mention_rate: bool = True) -> dict:
    """Compute every table of the descriptive report.

    The unit of the period tables is the (citing entity, cited item)
    pair, since one entity can sit in different periods relative to
    different cited items; with single-item citers this reduces to
    entity counts. The retraction-mention denominator is the set of
    distinct entities with a during/after-retraction pair; whether
    paywalled (no full text) entities count is an explicit, recorded
    choice.
    """
    assignments = snapshot.selected_assignments()
    if not assignments and not snapshot.entities:
        raise DomainError("empty snapshot: nothing to report")
    records_by_id = {r.id: r for r in snapshot.records}
    entities_by_id = {e.id: e for e in snapshot.entities}

    # --- Fig.5 analogue: pairs per period per cited-item discipline
    by_disc_period: dict[str, Counter] = defaultdict(Counter)
    period_totals: Counter = Counter()
    for a in assignments:
        period_totals[a.assignment.period.value] += 1
        rec = records_by_id.get(a.cited_id)
        if rec is None:
            continue
        for disc in rec.humanities_disciplines:
            by_disc_period[disc][a.assignment.period.value] += 1
    citing_by_period_and_discipline = {
        "unit": "citing-cited pairs",
        "period_totals": {p.value: period_totals.get(p.value, 0) for p in Period},
        "rows": {
            disc: {p.value: counts.get(p.value, 0) for p in Period}
            for disc, counts in sorted(by_disc_period.items())
        },
    }

    # --- Figs. 6/8 analogue: subject-area distribution per period.
    # Unit: (pair, area) assignments; entities without areas count once
    # under the residual bucket so rows still sum to 100%. pair_total
    # carries the plain pair count so period totals stay comparable
    # across tables.
    area_by_period: dict[str, Counter] = {p.value: Counter() for p in Period}
    pairs_by_period: Counter = Counter()
    for a in assignments:
        ent = entities_by_id.get(a.citing_id)
        if ent is None:
            continue
        pairs_by_period[a.assignment.period.value] += 1
        areas = ent.subject_areas or [UNCLASSIFIED_AREA]
        for area in areas:
            area_by_period[a.assignment.period.value][area] += 1
    subject_area_distribution_per_period = {
        p: {**_distribution(c), "pair_total": pairs_by_period[p]}
        for p, c in area_by_period.items() if c
    }

    # --- Fig. 9 analogue: in-text citations by intent / section, with
    # sentiment breakdowns; unannotated citations are counted as such.
    selected_items = {r.id for r in snapshot.selected_records()}
    period_by_pair = {(a.citing_id, a.cited_id): a.assignment.period.value for a in assignments}
    intent_tables: dict[str, Counter] = defaultdict(Counter)
    section_tables: dict[str, Counter] = defaultdict(Counter)
    sentiment_tables: dict[str, Counter] = defaultdict(Counter)
    intent_by_sentiment: dict[str, dict[str, Counter]] = defaultdict(lambda: defaultdict(Counter))
    for cit in snapshot.citations:
        if cit.cited_item_id not in selected_items:
            continue
        period = period_by_pair.get((cit.citing_entity_id, cit.cited_item_id))
        if period is None:
            continue
        intent = cit.intent or UNANNOTATED
        sentiment = cit.sentiment.value if cit.sentiment else UNANNOTATED
        intent_tables[period][intent] += 1
        section_tables[period][cit.section.value] += 1
        sentiment_tables[period][sentiment] += 1
        intent_by_sentiment[period][intent][sentiment] += 1
    in_text = {
        "by_intent": {p: _distribution(c) for p, c in sorted(intent_tables.items())},
        "by_section": {p: _distribution(c) for p, c in sorted(section_tables.items())},
        "by_sentiment": {p: _distribution(c) for p, c in sorted(sentiment_tables.items())},
        "intent_sentiment": {
            p: {i: dict(sorted(s.items())) for i, s in sorted(by_int.items())}
            for p, by_int in sorted(intent_by_sentiment.items())
        },
    }

    # --- retraction-mention rate over P-Ret/P-Post entities
    post_ret_entities = {
        a.citing_id for a in assignments
        if a.assignment.period in (Period.P_RET, Period.P_POST)
    }
    mention_pool = []
    for ent_id in post_ret_entities:
        ent = entities_by_id.get(ent_id)
        if ent is None:
            continue
        if not include_paywalled_in_mention_rate and not ent.full_text_available:
            continue
        mention_pool.append(ent)
    mentioned = sum(1 for e in mention_pool if e.mentions_retraction)
    denom = len(mention_pool)
    retraction_mention = {
        "denominator": denom,
        "mentioned": mentioned,
        "rate_pct": (100 * mentioned / denom) if denom else None,
        "rate_display": pct_display(mentioned, denom) if denom else None,
        "include_paywalled": include_paywalled_in_mention_rate,
    }

    # --- full-text availability over all entities in the snapshot
    n_entities = len(snapshot.entities)
    unavailable = sum(1 for e in snapshot.entities if not e.full_text_available)
    fulltext_unavailable = {
        "denominator": n_entities,
        "count": unavailable,
        "rate_pct": (100 * unavailable / n_entities) if n_entities else None,
        "rate_display": pct_display(unavailable, n_entities) if n_entities else None,
    }

    # --- fifth histograms; P-Ret is its own single column between the
    # two fifth-scaled periods
    fifths: dict[str, dict] = {
        Period.P_PRE.value: {label: 0 for label in FIFTH_LABELS},
        Period.P_RET.value: 0,
        Period.P_POST.value: {label: 0 for label in FIFTH_LABELS},
    }
    for a in assignments:
        if a.assignment.period == Period.P_RET:
            fifths[Period.P_RET.value] += 1
        else:
            fifths[a.assignment.period.value][a.assignment.fifth] += 1

    return {
        "version": 1,
        "citing_by_period_and_discipline": citing_by_period_and_discipline,
        "subject_area_distribution_per_period": subject_area_distribution_per_period,
        "in_text": in_text,
        "retraction_mention": retraction_mention,
        "fulltext_unavailable": fulltext_unavailable,
        "fifth_histograms": fifths,
        "totals": {
            "entities": n_entities,
            "pairs": len(assignments),
            "in_text_citations": sum(
                1 for c in snapshot.citations if c.cited_item_id in selected_items
            ),
            "retracted_items": len(snapshot.selected_records()),
        },
    }


# --------------------------------------------------------------------------
# Visualization export
# --------------------------------------------------------------------------


def _write_grouped_table_csv(table: Mapping, path: Path) -> None:
    """CSV twin of a grouped-topic JSON table (dict form)."""
    import csv

    path.parent.mkdir(parents=True, exist_ok=True)
    rows = table.get("rows", {})
    counts = table.get("doc_counts", {})
    k = len(next(iter(rows.values()))) if rows else 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([table.get("group_key", "group"), "docs"]
                   + [f"topic_{t}" for t in range(k)])
        for group in sorted(rows):
            w.writerow([group, counts.get(group, "")]
                       + [f"{v:.10g}" for v in rows[group]])


def export_visualization(
    report: Mapping,
    destination: str | Path,
    topic_bundles: Mapping[str, Mapping] | None = None,
    grouped_tables: Mapping[str, Mapping] | None = None,
    series: CitationSeries | None = None,
    hashes: Mapping[str, str] | None = None,
) -> Path:
    """Write a self-contained bundle directory, atomically.

    Layout: manifest.json, report.json, topics/*.json, series/*.csv.
    The bundle is built in a temp directory and moved into place, so a
    failed export never leaves a partial bundle. Re-exporting unchanged
    inputs is byte-identical (the manifest carries content hashes, no
    timestamps).
    """
    destination = Path(destination)
    destination.parent.mkdir(parents=True, exist_ok=True)
    if destination.exists() and not destination.is_dir():
        raise DomainError(f"destination {destination} exists and is not a directory")
    tmp = Path(tempfile.mkdtemp(dir=destination.parent, prefix=destination.name + ".tmp"))
    try:
        artifacts: list[Path] = []

        def emit_json(rel: str, obj) -> None:
            path = tmp / rel
            write_json(path, obj)
            artifacts.append(path)

        emit_json("report.json", report)
        if topic_bundles:
            for name, bundle in sorted(topic_bundles.items()):
                emit_json(f"topics/{name}.json", bundle)
        if grouped_tables:
            for name, table in sorted(grouped_tables.items()):
                emit_json(f"topics/grouped_{name}.json", table)
                csv_path = tmp / "topics" / f"grouped_{name}.csv"
                _write_grouped_table_csv(table, csv_path)
                artifacts.append(csv_path)
        if series is not None:
            emit_json("series/citation_series.json", series.to_dict())
            csv_path = tmp / "series" / "citation_series.csv"
            write_series_csv(series, csv_path)
            artifacts.append(csv_path)
            chart = svgcharts.line_chart(
                {**series.per_discipline, "all": series.aggregate},
                "Citations by years after retraction",
            )
            artifacts.append(svgcharts.write_chart(chart, tmp / "charts" / "series.svg"))
        fifths = report.get("fifth_histograms")
        if fifths:
            counts = {}
            for period in (Period.P_PRE.value, Period.P_POST.value):
                for label, n in fifths.get(period, {}).items():
                    counts[f"{period} {label}"] = n
            counts[Period.P_RET.value] = fifths.get(Period.P_RET.value, 0)
            chart = svgcharts.bar_chart(counts, "Citing entities per fifth")
            artifacts.append(svgcharts.write_chart(chart, tmp / "charts" / "fifths.svg"))

        manifest = {
            "version": 1,
            "artifacts": [
                {
                    "path": str(p.relative_to(tmp)),
                    "sha256": sha256_file(p),
                }
                for p in sorted(artifacts)
            ],
            "topics_present": bool(topic_bundles),
            "inputs": dict(sorted((hashes or {}).items())),
            "choices": {
                "mention_rate_includes_paywalled": report.get("retraction_mention", {}).get(
                    "include_paywalled"
                ),
            },
        }
        (tmp / "manifest.json").write_text(dumps_canonical(manifest), encoding="utf-8")
        if destination.exists():
            shutil.rmtree(destination)
        tmp.replace(destination)
    except BaseException:
        shutil.rmtree(tmp, ignore_errors=True)
        raise
    return destination


def load_report(path: str | Path) -> dict:
    return read_json(path)
