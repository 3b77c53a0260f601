import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from retrace.errors import SchemaError
from retrace.ingest import (
    ColumnMapping,
    Exclusion,
    ItemType,
    apply_exclusions,
    filter_humanities,
    load_records,
    parse_retraction_records,
    save_records,
    summarize_retractions,
)

from conftest import make_record
from oracles import tally_summary

MAPPING = ColumnMapping(columns={
    "id": "id",
    "title": "title",
    "pub_year": "pub_year",
    "retraction_year": "retraction_year",
    "subjects": "subjects",
    "reasons": "reasons",
    "item_type": "type",
    "doi": "doi",
})


def row(**kw) -> dict:
    base = {
        "id": "", "title": "A study", "pub_year": "2005", "retraction_year": "2010",
        "subjects": "(HUM) History", "reasons": "Plagiarism", "type": "Research Article",
        "doi": "",
    }
    base.update(kw)
    return base


class TestParse:
    def test_subject_cell_splits_into_disciplines(self):
        result = parse_retraction_records([row(subjects="(HUM) History;(HUM) Arts")], MAPPING)
        assert result.rejects == []
        rec = result.records[0]
        assert rec.humanities_disciplines == ["history", "arts"]
        assert all(t.is_humanities for t in rec.subjects)

    def test_non_humanities_macro_not_flagged(self):
        result = parse_retraction_records(
            [row(subjects="(HUM) Journalism;(B/T) Medicine")], MAPPING)
        rec = result.records[0]
        assert rec.humanities_disciplines == ["journalism"]
        assert [t.is_humanities for t in rec.subjects] == [True, False]

    def test_year_order_violation_rejected(self):
        result = parse_retraction_records(
            [row(pub_year="2005", retraction_year="2001")], MAPPING)
        assert result.records == []
        assert len(result.rejects) == 1
        assert "year order" in result.rejects[0].error

    def test_fixture_of_ten_rows_one_malformed(self):
        rows = [row(id=f"r{i}", title=f"Study {i}") for i in range(9)]
        rows.append(row(id="bad", pub_year="not-a-year"))
        result = parse_retraction_records(rows, MAPPING)
        assert len(result.records) == 9
        assert len(result.rejects) == 1
        assert "pub_year" in result.rejects[0].error

    def test_missing_required_column_is_schema_error(self):
        bad = {k: v for k, v in row().items() if k != "subjects"}
        with pytest.raises(SchemaError, match="subjects"):
            parse_retraction_records([bad], MAPPING)

    def test_doi_normalized(self):
        result = parse_retraction_records(
            [row(doi="https://doi.org/10.1234/ABC.5")], MAPPING)
        assert result.records[0].doi == "10.1234/abc.5"

    def test_item_type_buckets(self):
        for label, expected in [
            ("Research Article", ItemType.ARTICLE),
            ("Conference Abstract/Paper", ItemType.ARTICLE),
            ("Book Chapters/References", ItemType.BOOK_CHAPTER),
            ("Commentary/Editorials", ItemType.COMMENTARY_EDITORIAL),
            ("Letter", ItemType.OTHER),
        ]:
            result = parse_retraction_records([row(type=label)], MAPPING)
            assert result.records[0].item_type is expected

    def test_dates_yield_years(self):
        result = parse_retraction_records(
            [row(pub_year="2005-06-01", retraction_year="2010-01-15")], MAPPING)
        rec = result.records[0]
        assert (rec.pub_year, rec.retraction_year) == (2005, 2010)

    def test_parse_serialize_parse_is_identity(self, tmp_path):
        rows = [
            row(id="r1", subjects="(HUM) History;(HUM) Arts", reasons="Plagiarism;Duplication"),
            row(id="r2", type="Book Chapters/References", doi="10.1/x.y"),
        ]
        records = parse_retraction_records(rows, MAPPING).records
        path = tmp_path / "records.json"
        save_records(records, path)
        assert load_records(path) == records
        save_records(load_records(path), tmp_path / "again.json")
        assert (tmp_path / "again.json").read_bytes() == path.read_bytes()


class TestFilterHumanities:
    def test_keeps_tagged(self):
        rec = make_record("a", disciplines=("history",))
        assert filter_humanities([rec]) == [rec]

    def test_drops_untagged(self):
        rec = make_record("a", subjects=(("medicine", False),))
        assert filter_humanities([rec]) == []

    def test_idempotent(self):
        records = [
            make_record("a"),
            make_record("b", subjects=(("medicine", False),)),
        ]
        once = filter_humanities(records)
        assert filter_humanities(once) == once

    def test_474_scale_fixture_all_kept(self):
        records = [make_record(f"r{i}") for i in range(474)]
        assert len(filter_humanities(records)) == 474


class TestExclusions:
    def test_flagged_not_deleted(self):
        records = [make_record("X"), make_record("Y")]
        result = apply_exclusions(records, [Exclusion("X", "self-citation outlier")])
        assert [r.id for r in result.selected] == ["Y"]
        assert [r.id for r in result.flagged] == ["X"]
        assert result.flagged[0].excluded
        assert result.flagged[0].exclusion_note == "self-citation outlier"

    def test_empty_list_is_identity(self):
        records = [make_record("X"), make_record("Y")]
        result = apply_exclusions(records, [])
        assert result.selected == records
        assert result.flagged == []

    def test_unknown_id_warns_and_is_ignored(self):
        records = [make_record("X")]
        with pytest.warns(UserWarning, match="unknown id"):
            result = apply_exclusions(records, [Exclusion("ZZZ", "n/a")])
        assert [r.id for r in result.selected] == ["X"]

    def test_paper_shaped_85_minus_1(self):
        records = [make_record(f"r{i}") for i in range(85)]
        result = apply_exclusions(records, [Exclusion("r7", "high self-citation")])
        assert len(result.selected) == 84

    @given(st.lists(st.sampled_from([f"r{i}" for i in range(12)]), max_size=8),
           st.lists(st.sampled_from([f"r{i}" for i in range(12)]), max_size=8))
    @settings(max_examples=50, deadline=None)
    def test_order_independent(self, ids1, ids2):
        records = [make_record(f"r{i}") for i in range(12)]
        l1 = [Exclusion(i, "r") for i in ids1]
        l2 = [Exclusion(i, "r") for i in ids2]
        combined = apply_exclusions(records, l1 + l2)
        sequential = apply_exclusions(apply_exclusions(records, l1).all_records, l2)
        assert {r.id for r in combined.selected} == {r.id for r in sequential.selected}
        assert {r.id for r in combined.flagged} == {r.id for r in sequential.flagged}


class TestSummary:
    def test_per_year_counts(self):
        records = [
            make_record("a", retraction_year=2010),
            make_record("b", retraction_year=2010),
            make_record("c", retraction_year=2012),
        ]
        summary = summarize_retractions(records)
        assert summary.per_year == {2010: 2, 2012: 1}

    def test_multi_reason_counts_once_per_bucket(self):
        rec = make_record("a", reasons=("plagiarism", "duplication"))
        summary = summarize_retractions([rec])
        assert summary.per_reason == {"plagiarism": 1, "duplication": 1}

    def test_matches_brute_force_tally(self):
        records = [
            make_record(f"r{i}",
                        retraction_year=2005 + i % 7,
                        disciplines=("history", "arts")[: 1 + i % 2],
                        reasons=("plagiarism", "duplication", "ethics")[: 1 + i % 3],
                        item_type=list(ItemType)[i % 4])
            for i in range(40)
        ]
        summary = summarize_retractions(records)
        oracle = tally_summary(records)
        assert summary.per_year == oracle["per_year"]
        assert summary.per_type == oracle["per_type"]
        assert summary.per_discipline == oracle["per_discipline"]
        assert summary.per_reason == oracle["per_reason"]

    def test_per_year_totals_equal_record_count(self):
        records = [make_record(f"r{i}", retraction_year=2000 + i % 5) for i in range(23)]
        summary = summarize_retractions(records)
        assert sum(summary.per_year.values()) == 23
        assert sum(summary.per_type.values()) == 23
