"""Place citations on a normalized timeline around the retraction event.

A citation to a retracted work falls in exactly one of three periods:
before the retraction year, in it, or after it. The before/after periods
are rescaled to [-1, 1] and split into five labelled bins ("fifths") so
citation timing is comparable across items with different lifespans.
"""

from __future__ import annotations

import csv
from collections import Counter, defaultdict
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import DomainError
from .jsonio import write_json


class Period(str, Enum):
    P_PRE = "P_PRE"
    P_RET = "P_RET"
    P_POST = "P_POST"


#: Fifth labels, in order. Bounds are inclusive on both ends and, on the
#: 2-decimal grid, partition [-1.00, 1.00] exactly.
FIFTH_LABELS = (
    "[-1.00, -0.61]",
    "[-0.60, -0.21]",
    "[-0.20, 0.20]",
    "[0.21, 0.60]",
    "[0.61, 1.00]",
)

# Upper bounds of each fifth in integer cents; binning happens on the
# cent grid so no float comparison can straddle a label boundary.
_FIFTH_UPPER_CENTS = (-61, -21, 20, 60, 100)


def round_position_cents(x: Fraction) -> int:
    """Round a position in [-1, 1] to integer cents, half away from zero.

    The label gaps (-0.61 vs -0.60) imply a 2-decimal grid; half-away
    rounding keeps the grid symmetric around zero. Exact rational
    arithmetic avoids float boundary artifacts.
    """
    cents = x * 100
    sign = -1 if cents < 0 else 1
    mag = abs(cents)
    floor = mag.numerator // mag.denominator
    rem = mag - floor
    if rem >= Fraction(1, 2):
        floor += 1
    return sign * floor


def fifth_for_cents(cents: int) -> str:
    """Map a rounded position (in cents, -100..100) to its fifth label."""
    if cents < -100 or cents > 100:
        raise DomainError(f"position {cents / 100:.2f} outside [-1, 1]")
    for upper, label in zip(_FIFTH_UPPER_CENTS, FIFTH_LABELS):
        if cents <= upper:
            return label
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class PeriodAssignment:
    period: Period
    normalized_position: float | None  # rounded to 2 decimals; None for P_RET
    fifth: str | None  # None for P_RET

    def to_dict(self) -> dict:
        return {
            "period": self.period.value,
            "normalized_position": self.normalized_position,
            "fifth": self.fifth,
        }


def assign_period(
    citing_year: int,
    pub_year: int,
    retraction_year: int,
    last_citation_year: int | None = None,
) -> PeriodAssignment:
    """Assign one (citing, cited) pair to its period and fifth.

    The pre period spans the cited item's publication year through the
    year before retraction; the post period spans the year after
    retraction through the last citation year observed for the item.
    Positions rescale each span to [-1, 1]; a zero-length span pins the
    position to the final border (x = 1.00).
    """
    y, p, r, last = citing_year, pub_year, retraction_year, last_citation_year
    if p > r:
        raise DomainError(f"publication year {p} after retraction year {r}")
    if y < p:
        raise DomainError(f"citation year {y} predates publication year {p}")
    if y == r:
        return PeriodAssignment(Period.P_RET, None, None)
    if y < r:
        lo, hi = p, r - 1
    else:
        if last is None:
            raise DomainError("last_citation_year required for post-retraction citations")
        if last < y:
            raise DomainError(f"last citation year {last} precedes citing year {y}")
        lo, hi = r + 1, last
    if hi == lo:
        cents = 100
    else:
        x = Fraction(2 * (y - lo), hi - lo) - 1
        cents = round_position_cents(x)
    return PeriodAssignment(
        Period.P_PRE if y < r else Period.P_POST,
        cents / 100.0,
        fifth_for_cents(cents),
    )


@dataclass
class PairAssignment:
    """A PeriodAssignment attached to its (citing, cited) pair."""

    citing_id: str
    cited_id: str
    citing_year: int
    assignment: PeriodAssignment

    def to_dict(self) -> dict:
        d = self.assignment.to_dict()
        d.update({
            "citing_id": self.citing_id,
            "cited_id": self.cited_id,
            "citing_year": self.citing_year,
        })
        return d


def assign_pairs(
    citing_years: Mapping[str, int],
    cited_items: Mapping[str, Sequence[str]],
    item_years: Mapping[str, tuple[int, int]],
) -> list[PairAssignment]:
    """Assign every (citing, cited) pair.

    citing_years: citing entity id -> publication year.
    cited_items: citing entity id -> retracted ids it cites.
    item_years: retracted id -> (pub_year, retraction_year).

    The last citation year per retracted item is taken from the data
    itself: the maximum citing year among the item's citations.
    """
    last_year: dict[str, int] = {}
    for ent_id, cited in cited_items.items():
        y = citing_years[ent_id]
        for item in cited:
            last_year[item] = max(last_year.get(item, y), y)
    out: list[PairAssignment] = []
    for ent_id in sorted(cited_items):
        y = citing_years[ent_id]
        for item in sorted(cited_items[ent_id]):
            if item not in item_years:
                continue
            p, r = item_years[item]
            out.append(PairAssignment(
                citing_id=ent_id,
                cited_id=item,
                citing_year=y,
                assignment=assign_period(y, p, r, last_year[item]),
            ))
    return out


def save_assignments(pairs: Sequence[PairAssignment], path: str | Path) -> None:
    write_json(path, {"version": 1, "assignments": [p.to_dict() for p in pairs]})


def load_assignments(path: str | Path) -> list[PairAssignment]:
    from .jsonio import read_json

    data = read_json(path)
    out = []
    for d in data["assignments"]:
        out.append(PairAssignment(
            citing_id=d["citing_id"],
            cited_id=d["cited_id"],
            citing_year=int(d["citing_year"]),
            assignment=PeriodAssignment(
                period=Period(d["period"]),
                normalized_position=d["normalized_position"],
                fifth=d["fifth"],
            ),
        ))
    return out


@dataclass
class CitationSeries:
    """Citations per discipline as a function of years after retraction.

    Keys run contiguously over the observed range (zero-filled), and the
    "all" aggregate sums every discipline-tagged citation once per pair.
    """

    per_discipline: dict[str, dict[int, int]]
    aggregate: dict[int, int]
    avg_retraction_time: dict[str, float]

    def to_dict(self) -> dict:
        return {
            "per_discipline": {
                d: {str(k): v for k, v in sorted(series.items())}
                for d, series in sorted(self.per_discipline.items())
            },
            "aggregate": {str(k): v for k, v in sorted(self.aggregate.items())},
            "avg_retraction_time": dict(sorted(self.avg_retraction_time.items())),
        }


def _fill_contiguous(counter: Mapping[int, int]) -> dict[int, int]:
    if not counter:
        return {}
    lo, hi = min(counter), max(counter)
    return {k: counter.get(k, 0) for k in range(lo, hi + 1)}


def build_series(
    pairs: Iterable[PairAssignment],
    item_years: Mapping[str, tuple[int, int]],
    item_disciplines: Mapping[str, Sequence[str]],
) -> CitationSeries:
    """Histogram citations by (citing_year - retraction_year).

    A multi-discipline retracted item contributes each citation to every
    one of its disciplines' series; the aggregate counts each pair once.
    """
    per_disc: dict[str, Counter] = defaultdict(Counter)
    agg: Counter = Counter()
    for pair in pairs:
        _, r = item_years[pair.cited_id]
        delta = pair.citing_year - r
        agg[delta] += 1
        for disc in item_disciplines.get(pair.cited_id, ()):
            per_disc[disc][delta] += 1
    avg_rt: dict[str, float] = {}
    by_disc_items: dict[str, list[str]] = defaultdict(list)
    for item, discs in item_disciplines.items():
        if item not in item_years:
            continue
        for disc in discs:
            by_disc_items[disc].append(item)
    for disc, items in by_disc_items.items():
        spans = [item_years[i][1] - item_years[i][0] for i in items]
        if spans:
            avg_rt[disc] = sum(spans) / len(spans)
    return CitationSeries(
        per_discipline={d: _fill_contiguous(c) for d, c in per_disc.items()},
        aggregate=_fill_contiguous(agg),
        avg_retraction_time=avg_rt,
    )


def write_series_csv(series: CitationSeries, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["discipline", "years_after_retraction", "count"])
        for delta in sorted(series.aggregate):
            w.writerow(["all", delta, series.aggregate[delta]])
        for disc in sorted(series.per_discipline):
            for delta in sorted(series.per_discipline[disc]):
                w.writerow([disc, delta, series.per_discipline[disc][delta]])
