#!/usr/bin/env python3
"""Regenerate the bundled mini-corpus fixture (tests/fixtures/mini).

The fixture exercises the whole pipeline: 7 retraction rows (1
malformed), two citation sources with overlap, metadata with abstracts
in two thematic registers, venue tables, affinity judgments that drop
one item, an exclusion, and pre-extracted citation contexts.
Deterministic: rerunning writes identical files.
"""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "mini"

ITEMS = [
    # id, doi, title, pub, ret, subjects, reasons, type, issn/isbn
    ("ret-01", "10.9000/ret.01", "Monastic chant and memory in medieval Europe",
     1999, 2009, "(HUM) History;(HUM) Music", "Plagiarism", "Research Article",
     ("1111-2222", None)),
    ("ret-02", "10.9000/ret.02", "Iconography of the early baroque altarpiece",
     2002, 2010, "(HUM) Arts", "Duplication", "Research Article",
     ("1111-2222", None)),
    ("ret-03", "10.9000/ret.03", "Scripture and ritual in late antiquity",
     2001, 2012, "(HUM) Religion;(HUM) History", "Plagiarism;Fake Peer Review",
     "Research Article", ("3333-4444", None)),
    ("ret-04", "10.9000/ret.04", "Probabilism in scholastic moral thought",
     2004, 2011, "(HUM) Philosophy", "Plagiarism", "Book Chapters/References",
     (None, "9780123456789")),
    ("ret-05", "10.9000/ret.05", "The nature of creative self-citation",
     2003, 2013, "(HUM) Philosophy;(HUM) Arts", "Duplication", "Research Article",
     ("3333-4444", None)),
    ("ret-06", "10.9000/ret.06", "Albumin infusion protocols in intensive care",
     2000, 2008, "(HUM) Journalism;(B/T) Medicine", "Data Fabrication",
     "Research Article", ("5555-6666", None)),
]

# Citing entities: id suffix, year, venue issn, block (h = humanities
# themed abstract, m = medical themed), cites (item indices)
CITERS = [
    ("c01", 2003, "1111-2222", "h", ["ret-01"]),
    ("c02", 2005, "1111-2222", "h", ["ret-01", "ret-02"]),
    ("c03", 2008, "3333-4444", "h", ["ret-01"]),
    ("c04", 2009, "1111-2222", "h", ["ret-01"]),
    ("c05", 2011, "3333-4444", "h", ["ret-01"]),
    ("c06", 2013, "1111-2222", "h", ["ret-01", "ret-03"]),
    ("c07", 2015, "1111-2222", "h", ["ret-01"]),
    ("c08", 2004, "1111-2222", "h", ["ret-02"]),
    ("c09", 2007, "7777-8888", "m", ["ret-02"]),
    ("c10", 2010, "1111-2222", "h", ["ret-02"]),
    ("c11", 2012, "1111-2222", "h", ["ret-02"]),
    ("c12", 2014, "3333-4444", "h", ["ret-02"]),
    ("c13", 2003, "3333-4444", "h", ["ret-03"]),
    ("c14", 2006, "3333-4444", "h", ["ret-03"]),
    ("c15", 2009, "7777-8888", "m", ["ret-03"]),
    ("c16", 2012, "3333-4444", "h", ["ret-03"]),
    ("c17", 2014, "3333-4444", "h", ["ret-03"]),
    ("c18", 2016, "1111-2222", "h", ["ret-03"]),
    ("c19", 2006, "9999-0000", "h", ["ret-04"]),
    ("c20", 2008, "9999-0000", "h", ["ret-04"]),
    ("c21", 2011, "9999-0000", "h", ["ret-04"]),
    ("c22", 2013, "9999-0000", "h", ["ret-04", "ret-05"]),
    ("c23", 2015, "9999-0000", "h", ["ret-04"]),
    ("c24", 2005, "3333-4444", "h", ["ret-05"]),
    ("c25", 2010, "7777-8888", "m", ["ret-05"]),
    ("c26", 2014, "9999-0000", "h", ["ret-05"]),
    ("c27", 2016, "9999-0000", "h", ["ret-05"]),
    ("c28", 2002, "7777-8888", "m", ["ret-06"]),
    ("c29", 2006, "7777-8888", "m", ["ret-06"]),
    ("c30", 2010, "7777-8888", "m", ["ret-06"]),
    ("c31", 2012, "7777-8888", "m", ["ret-06"]),
]

H_WORDS = [
    "monastic chant liturgy manuscripts medieval scriptorium",
    "baroque altarpiece iconography painters patronage workshop",
    "scripture ritual antiquity councils doctrine exegesis",
    "scholastic probabilism casuistry moral theology disputation",
    "archival sources paleography codex marginalia provenance",
    "musical notation polyphony cathedral choir devotion",
]
M_WORDS = [
    "albumin infusion hemodynamic resuscitation intensive care",
    "randomized trial placebo cohort mortality outcomes",
    "sepsis fluid therapy colloid crystalloid dosing",
    "clinical protocol adverse events monitoring patients",
]


def abstract_for(idx: int, block: str) -> str:
    words = H_WORDS if block == "h" else M_WORDS
    a = words[idx % len(words)]
    b = words[(idx * 3 + 1) % len(words)]
    return (f"This study examines {a}. "
            f"We revisit earlier findings on {b}. "
            f"Implications for future scholarship are discussed.")


def main() -> None:
    ROOT.mkdir(parents=True, exist_ok=True)

    # -- records.csv (one malformed row: retraction precedes publication)
    with open(ROOT / "records.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "title", "pub_year", "retraction_year", "subjects",
                    "reasons", "type", "doi", "venue_title", "venue_issn", "venue_isbn"])
        for item_id, doi, title, pub, ret, subjects, reasons, typ, (issn, isbn) in ITEMS:
            w.writerow([item_id, title, pub, ret, subjects, reasons, typ, doi,
                        f"Venue of {item_id}", issn or "", isbn or ""])
        w.writerow(["ret-bad", "A malformed row", 2010, 2005, "(HUM) History",
                    "Plagiarism", "Research Article", "", "", "", ""])

    (ROOT / "mapping.json").write_text(json.dumps({
        "columns": {
            "id": "id", "title": "title", "pub_year": "pub_year",
            "retraction_year": "retraction_year", "subjects": "subjects",
            "reasons": "reasons", "item_type": "type", "doi": "doi",
            "venue_title": "venue_title", "venue_issn": "venue_issn",
            "venue_isbn": "venue_isbn",
        },
        "delimiter": ";",
        "humanities_marker": "HUM",
    }, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    (ROOT / "exclusions.json").write_text(json.dumps([
        {"id": "ret-05", "rationale": "extreme self-citation outlier"},
    ], indent=2, sort_keys=True) + "\n", encoding="utf-8")

    # -- citation source fixtures
    coci = ROOT / "sources" / "coci"
    graph = ROOT / "sources" / "graph"
    coci.mkdir(parents=True, exist_ok=True)
    graph.mkdir(parents=True, exist_ok=True)
    by_item: dict[str, list] = {item[0]: [] for item in ITEMS}
    for cid, year, issn, block, cites in CITERS:
        for item_id in cites:
            by_item[item_id].append((cid, year))
    doi_of = {item[0]: item[1] for item in ITEMS}
    for item_id, citers in by_item.items():
        doi = doi_of[item_id]
        fname = doi.replace("/", "_") + ".json"
        # COCI sees most citers; graph source sees a subset plus two
        # DOI-less local records (merged never across sources)
        coci_entries = [
            {"citing": f"10.8000/{cid}", "cited": doi, "creation": str(year)}
            for cid, year in citers
        ]
        (coci / fname).write_text(
            json.dumps(coci_entries, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        graph_entries = [
            {"id": f"g-{cid}", "doi": f"10.8000/{cid}", "title": f"Citing work {cid}",
             "year": year, "cited": doi}
            for cid, year in citers[::2]
        ]
        if item_id == "ret-01":
            graph_entries.append({
                "id": "g-local-1", "doi": None, "title": "An uncatalogued commentary",
                "year": 2007, "cited": doi,
            })
        (graph / fname).write_text(
            json.dumps(graph_entries, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    # -- metadata for citing entities
    metadata = {}
    for i, (cid, year, issn, block, cites) in enumerate(CITERS):
        doi = f"10.8000/{cid}"
        metadata[doi] = {
            "year": year,
            "title": f"Citing work {cid}",
            "venue_title": f"Journal {issn}",
            "venue_ids": [issn],
            "abstract": abstract_for(i, block),
            "full_text_available": cid not in ("c07", "c25"),
            "is_retracted": cid == "c11",
        }
    metadata["graph:g-local-1"] = {
        "year": 2007, "title": "An uncatalogued commentary",
        "venue_title": "Occasional Papers", "venue_ids": [],
        "abstract": abstract_for(7, "h"), "full_text_available": False,
    }
    (ROOT / "metadata.json").write_text(
        json.dumps(metadata, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    # -- venue tables
    with open(ROOT / "journal_table.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["venue_key", "areas", "categories"])
        w.writerow(["1111-2222", "Arts and Humanities", "History;Music"])
        w.writerow(["3333-4444", "Arts and Humanities;Social Sciences", "Religious Studies"])
        w.writerow(["5555-6666", "Medicine", "General Medicine"])
        w.writerow(["7777-8888", "Medicine;Nursing", ""])
        w.writerow(["9999-0000", "Arts and Humanities", "Philosophy"])
    with open(ROOT / "book_table.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["isbn", "lcc"])
        w.writerow(["9780123456789", "BJ1249"])

    # -- affinity judgments; ret-06 stays below the threshold
    with open(ROOT / "judgments.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["item_id", "title_bonus", "abstract_adjustment", "note"])
        w.writerow(["ret-01", 1, 1, "clearly musicological"])
        w.writerow(["ret-02", 1, 0, "art history"])
        w.writerow(["ret-03", 1, 1, "religious studies"])
        w.writerow(["ret-04", 1, 1, "moral philosophy"])
        w.writerow(["ret-05", 0, 0, ""])
        w.writerow(["ret-06", 0, -1, "intensive care medicine, journalism marginal"])

    # -- in-text citation contexts
    intents = [None, "obtains_background_from", None, "discusses", None]
    contexts = []
    n = 0
    for cid, year, issn, block, cites in CITERS[:12]:
        n += 1
        item = cites[0]
        sections = ["Introduction", "Discussion", "Background and motivation",
                    "Untitled section", "Method"]
        section_title = sections[n % len(sections)]
        contexts.append({
            "id": f"ctx-{n:03d}",
            "citing_entity_id": f"10.8000/{cid}",
            "cited_item_id": item,
            "pointer_text": "[1]",
            "section": {
                "Introduction": "introduction", "Discussion": "discussion",
                "Background and motivation": "background",
                "Untitled section": "middle_section", "Method": "method",
            }[section_title],
            "context": {
                "preceding": "Earlier work set the stage." if n % 3 else None,
                "anchor": f"The argument in [1] shaped this {block} literature.",
                "following": "Later studies refined the claim." if n % 2 else None,
            },
            "sentiment": None,
            "intent": intents[n % len(intents)],
            "mentions_retraction": None,
        })
    (ROOT / "contexts.json").write_text(json.dumps(
        {"version": 1, "citations": contexts}, indent=2, sort_keys=True) + "\n",
        encoding="utf-8")

    print(f"wrote mini fixture under {ROOT}", file=sys.stderr)


if __name__ == "__main__":
    main()
