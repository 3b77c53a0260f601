import json
import threading

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from retrace.errors import AdapterError, DomainError, QuarantineError, TransientFetchError
from retrace.harvest import (
    CitationLink,
    CitingEntity,
    CociFixtureSource,
    FetchCache,
    LookupTables,
    MetadataSource,
    TokenBucket,
    _join_key,
    classify_venue,
    enrich_entities,
    entity_links,
    fetch_citations,
    merge_sources,
    resolve_metadata,
)

from conftest import paper_shaped_sources
from oracles import union_count_by_key


@pytest.fixture
def coci_dir(tmp_path):
    root = tmp_path / "coci"
    root.mkdir()
    payload = [
        {"citing": "10.1000/a", "cited": "10.9000/d1", "creation": "2015-03"},
        {"citing": "10.1000/b", "cited": "10.9000/d1", "creation": "2016"},
        {"citing": "10.1000/c", "cited": "10.9000/d1", "creation": "2017-01-02"},
    ]
    (root / "10.9000_d1.json").write_text(json.dumps(payload), encoding="utf-8")
    return root


class TestFetch:
    def test_fixture_source_returns_links_with_provenance(self, coci_dir):
        source = CociFixtureSource("source_b", coci_dir)
        links = fetch_citations(source, "10.9000/d1")
        assert len(links) == 3
        assert all(l.source == "source_b" for l in links)
        assert [l.creation_year for l in links] == [2015, 2016, 2017]
        assert all(l.cited_id == "10.9000/d1" for l in links)

    def test_doi_without_citations_yields_empty(self, coci_dir):
        source = CociFixtureSource("source_b", coci_dir)
        assert fetch_citations(source, "10.9000/unknown") == []

    def test_malformed_payload_preserves_raw(self, tmp_path):
        root = tmp_path / "bad"
        root.mkdir()
        (root / "10.9000_d1.json").write_text('[{"no_citing": 1}]', encoding="utf-8")
        source = CociFixtureSource("source_b", root)
        with pytest.raises(AdapterError) as err:
            fetch_citations(source, "10.9000/d1")
        assert err.value.raw == b'[{"no_citing": 1}]'

    def test_invalid_doi_rejected(self, coci_dir):
        with pytest.raises(DomainError, match="not a DOI"):
            fetch_citations(CociFixtureSource("s", coci_dir), "not-a-doi")

    def test_cache_hit_is_byte_identical_and_skips_source(self, coci_dir, tmp_path):
        cache = FetchCache(tmp_path / "cache")
        source = CociFixtureSource("source_b", coci_dir)
        first = fetch_citations(source, "10.9000/d1", cache=cache)
        raw_before = cache.get("source_b", "10.9000/d1")
        # poison the fixture; the cache must serve the original bytes
        (coci_dir / "10.9000_d1.json").write_text("[]", encoding="utf-8")
        second = fetch_citations(source, "10.9000/d1", cache=cache)
        assert first == second
        assert cache.get("source_b", "10.9000/d1") == raw_before

    def test_transient_errors_retry_with_backoff(self):
        class Flaky:
            name = "flaky"

            def __init__(self):
                self.calls = 0

            def fetch_raw(self, doi):
                self.calls += 1
                if self.calls < 3:
                    raise TransientFetchError("boom")
                return b"[]"

            def parse(self, raw, doi):
                return []

        sleeps = []
        source = Flaky()
        assert fetch_citations(source, "10.9000/d1", sleep=sleeps.append) == []
        assert source.calls == 3
        assert sleeps == [0.5, 1.0]

    def test_backoff_budget_exhausts(self):
        class Dead:
            name = "dead"

            def fetch_raw(self, doi):
                raise TransientFetchError("down")

            def parse(self, raw, doi):
                return []

        with pytest.raises(TransientFetchError):
            fetch_citations(Dead(), "10.9000/d1", max_retries=2, sleep=lambda s: None)

    def test_paper_shaped_aggregate_474_items(self, tmp_path):
        # 474 retracted items; 85 with >= 1 citation; 2054 links total
        root = tmp_path / "agg"
        root.mkdir()
        per_item = [25 if i < 14 else 24 for i in range(85)]  # 14*25 + 71*24 = 2054
        assert sum(per_item) == 2054
        n = 0
        for i, count in enumerate(per_item):
            payload = [
                {"citing": f"10.1000/c{n + j}", "cited": f"10.9000/item{i}", "creation": 2015}
                for j in range(count)
            ]
            n += count
            (root / f"10.9000_item{i}.json").write_text(json.dumps(payload), encoding="utf-8")
        source = CociFixtureSource("source_b", root)
        links_per_item = [
            fetch_citations(source, f"10.9000/item{i}") for i in range(474)
        ]
        with_citations = [ls for ls in links_per_item if ls]
        assert len(with_citations) == 85
        assert sum(len(ls) for ls in links_per_item) == 2054


class TestMerge:
    def test_paper_shaped_counts(self):
        sources = paper_shaped_sources(891, 388, 344)
        result = merge_sources(sources)
        assert len(result.entities) == 935
        shared = [e for e in result.entities if len(e.sources) == 2]
        assert len(shared) == 344

    def test_single_source_is_identity(self):
        sources = paper_shaped_sources(10, 0, 0)
        result = merge_sources({"source_a": sources["source_a"], "source_b": []})
        assert len(result.entities) == 10
        assert all(e.sources == {"source_a"} for e in result.entities)

    @given(st.sets(st.integers(0, 80), max_size=50), st.sets(st.integers(0, 80), max_size=50))
    @settings(max_examples=100, deadline=None)
    def test_inclusion_exclusion(self, ids_a, ids_b):
        links = {
            "a": [CitationLink(f"10.5000/w{i}", "10.9000/x", "a", 2010) for i in ids_a],
            "b": [CitationLink(f"10.5000/w{i}", "10.9000/x", "b", 2010) for i in ids_b],
        }
        result = merge_sources(links)
        assert len(result.entities) == len(ids_a) + len(ids_b) - len(ids_a & ids_b)
        assert len(result.entities) == union_count_by_key(links, _join_key)

    def test_commutative_and_idempotent(self):
        sources = paper_shaped_sources(40, 25, 10)
        forward = merge_sources(sources)
        backward = merge_sources(dict(reversed(list(sources.items()))))
        assert [e.id for e in forward.entities] == [e.id for e in backward.entities]
        again = merge_sources({
            "merged": [l for e in forward.entities for l in entity_links(e)]
        })
        assert [e.id for e in again.entities] == [e.id for e in forward.entities]
        assert [e.cited_items for e in again.entities] == [
            e.cited_items for e in forward.entities]

    def test_year_conflict_keeps_earliest_and_logs(self):
        links = {
            "a": [CitationLink("10.5000/w", "10.9000/x", "a", 2012)],
            "b": [CitationLink("10.5000/w", "10.9000/x", "b", 2010)],
        }
        result = merge_sources(links)
        assert result.entities[0].year == 2010
        assert len(result.conflicts) == 1
        assert result.conflicts[0].years == [2010, 2012]

    def test_title_year_fallback_joins_doiless_records(self):
        links = {
            "a": [CitationLink("local-1", "10.9000/x", "a", 2011, citing_title="The Ship of Theseus")],
            "b": [CitationLink("local-9", "10.9000/x", "b", 2011, citing_title="The ship of THESEUS!")],
        }
        result = merge_sources(links)
        assert len(result.entities) == 1
        assert result.entities[0].sources == {"a", "b"}

    def test_doiless_without_title_never_merges_across_sources(self):
        links = {
            "a": [CitationLink("local-1", "10.9000/x", "a", 2011)],
            "b": [CitationLink("local-1", "10.9000/x", "b", 2011)],
        }
        assert len(merge_sources(links).entities) == 2

    def test_cited_items_union(self):
        links = {
            "a": [CitationLink("10.5000/w", "10.9000/x", "a", 2010),
                  CitationLink("10.5000/w", "10.9000/y", "a", 2010)],
        }
        result = merge_sources(links)
        assert result.entities[0].cited_items == ["10.9000/x", "10.9000/y"]


class TestMetadata:
    def make_source(self):
        return MetadataSource({
            "10.5000/w": {
                "year": 2014, "title": "Citing work", "venue_title": "Journal of Things",
                "venue_ids": ["1234-5678"], "abstract": "An abstract.",
                "full_text_available": True,
            },
            "10.5000/paywalled": {"year": 2015, "title": "Locked", "full_text_available": False},
            "10.5000/noyear": {"title": "No year anywhere"},
            "10.5000/notice": {"year": 2016, "type": "retraction notice"},
        })

    def test_fields_populated(self):
        ent = CitingEntity(id="10.5000/w", doi="10.5000/w", cited_items=["10.9000/x"], sources={"a"})
        enriched = resolve_metadata(ent, self.make_source())
        assert enriched.year == 2014
        assert enriched.venue_title == "Journal of Things"
        assert enriched.full_text_available

    def test_paywalled_entity_retained(self):
        ent = CitingEntity(id="10.5000/paywalled", doi="10.5000/paywalled", sources={"a"})
        enriched = resolve_metadata(ent, self.make_source())
        assert enriched.full_text_available is False
        assert enriched.year == 2015

    def test_no_year_anywhere_quarantined(self):
        ent = CitingEntity(id="10.5000/noyear", doi="10.5000/noyear", sources={"a"})
        with pytest.raises(QuarantineError, match="year"):
            resolve_metadata(ent, self.make_source())

    def test_unresolvable_identifier_quarantined(self):
        ent = CitingEntity(id="10.5000/ghost", doi="10.5000/ghost", sources={"a"})
        with pytest.raises(QuarantineError, match="unresolvable"):
            resolve_metadata(ent, self.make_source())

    def test_invalid_type_label_quarantined(self):
        ent = CitingEntity(id="10.5000/notice", doi="10.5000/notice", sources={"a"})
        with pytest.raises(QuarantineError, match="retraction notice"):
            resolve_metadata(ent, self.make_source())

    def test_enrich_all_partitions(self):
        entities = [
            CitingEntity(id="10.5000/w", doi="10.5000/w", sources={"a"}),
            CitingEntity(id="10.5000/noyear", doi="10.5000/noyear", sources={"a"}),
        ]
        enriched, quarantined = enrich_entities(entities, self.make_source())
        assert [e.id for e in enriched] == ["10.5000/w"]
        assert len(quarantined) == 1 and "year" in quarantined[0].reason


@pytest.fixture
def tables(tmp_path):
    journal = tmp_path / "journal.csv"
    journal.write_text(
        "venue_key,areas,categories\n"
        "1234-5678,Arts and Humanities,History\n"
        "9999-0001,Medicine;Psychology,\n"
        "Journal of Venue Titles,Social Sciences,\n",
        encoding="utf-8",
    )
    book = tmp_path / "book.csv"
    book.write_text("isbn,lcc\n9780123456789,D\n9780000000001,BF109\n", encoding="utf-8")
    return LookupTables.load(journal, book)


class TestVenueClassification:
    def test_journal_lookup(self, tables):
        vc = classify_venue(["1234-5678"], None, tables)
        assert vc.method == "journal_lookup"
        assert vc.areas == ("Arts and Humanities",)
        assert vc.categories == ("History",)

    def test_isbn_to_lcc_history(self, tables):
        vc = classify_venue(["978-0-12-345678-9"], None, tables)
        assert vc.method == "book_lcc_mapping"
        assert vc.areas == ("Arts and Humanities",)

    def test_lcc_longest_prefix_wins(self, tables):
        vc = classify_venue(["9780000000001"], None, tables)
        assert vc.areas == ("Psychology",)  # BF beats B

    def test_unknown_venue_unclassified(self, tables):
        vc = classify_venue(["0000-0000"], "Totally Unknown Venue", tables)
        assert vc.method == "unclassified"
        assert vc.areas == ()

    def test_title_fallback(self, tables):
        vc = classify_venue([], "Journal of Venue   Titles", tables)
        assert vc.method == "journal_lookup"
        assert vc.areas == ("Social Sciences",)

    def test_tables_validate_against_taxonomy(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("venue_key,areas,categories\n1234-5678,Astrologia,\n", encoding="utf-8")
        with pytest.raises(DomainError, match="unknown area"):
            LookupTables.load(bad)


class TestTokenBucket:
    def test_respects_rate(self):
        clock = [0.0]
        sleeps = []

        def fake_sleep(s):
            sleeps.append(s)
            clock[0] += s

        bucket = TokenBucket(rate=5, clock=lambda: clock[0])
        for _ in range(5):
            bucket.acquire(sleep=fake_sleep)
        assert sleeps == []  # burst capacity
        bucket.acquire(sleep=fake_sleep)
        assert sleeps and sleeps[0] == pytest.approx(0.2)

    def test_concurrent_cache_writes_single_payload(self, tmp_path):
        cache = FetchCache(tmp_path / "c")
        payload = b'[{"citing": "10.1000/a", "cited": "10.9000/x", "creation": 2010}]'
        threads = [
            threading.Thread(target=cache.put, args=("s", "10.9000/x", payload))
            for _ in range(8)
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert cache.get("s", "10.9000/x") == payload
