"""Acceptance suite: one test per criterion, each printing a PASS line
and enforcing its runtime budget. Run with `pytest -s tests/test_acceptance.py`
to see the per-criterion lines."""

import itertools
import math
import random
import time
from collections import Counter
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

import numpy as np
from click.testing import CliRunner
from scipy.stats import spearmanr

from retrace.affinity import AffinityInputs, filter_by_affinity, score_affinity
from retrace.annotation import AnnotationStore, CitoDecisionTree
from retrace.cli import main as cli_main
from retrace.harvest import CitationLink, merge_sources
from retrace.ingest import SubjectTag
from retrace.jsonio import read_json, sha256_file
from retrace.reports import descriptive_report
from retrace.timeline import assign_period, Period
from retrace.topics import (
    GibbsLda,
    jsd_matrix,
    classical_mds,
    phi_order,
    rank_terms,
    select_k,
)

from conftest import build_report_snapshot, paper_shaped_sources, two_block_corpus
from oracles import tally_report

FIXTURES = Path(__file__).parent / "fixtures" / "mini"


@contextmanager
def budget(name: str, seconds: float):
    start = time.monotonic()
    yield
    elapsed = time.monotonic() - start
    assert elapsed < seconds, f"{name} took {elapsed:.1f}s (budget {seconds}s)"
    print(f"\n[ACCEPTANCE] {name}: PASS ({elapsed:.1f}s < {seconds:.0f}s)")


def test_merge_arithmetic():
    with budget("merge arithmetic", 5):
        rng = random.Random(20240601)
        for _ in range(200):
            universe = range(rng.randint(1, 120))
            ids_a = {i for i in universe if rng.random() < 0.5}
            ids_b = {i for i in universe if rng.random() < 0.5}
            links = {
                "a": [CitationLink(f"10.5000/w{i}", "10.9000/x", "a", 2010) for i in ids_a],
                "b": [CitationLink(f"10.5000/w{i}", "10.9000/x", "b", 2010) for i in ids_b],
            }
            merged = merge_sources(links)
            assert len(merged.entities) == len(ids_a) + len(ids_b) - len(ids_a & ids_b)
        paper = merge_sources(paper_shaped_sources(891, 388, 344))
        assert len(paper.entities) == 935


def test_fifth_assignment():
    with budget("fifth assignment", 5):
        worked = assign_period(2011, 2002, 2012)
        assert worked.period is Period.P_PRE
        assert worked.fifth == "[0.61, 1.00]"

        rng = random.Random(7)
        bounds = {
            "[-1.00, -0.61]": (-100, -61), "[-0.60, -0.21]": (-60, -21),
            "[-0.20, 0.20]": (-20, 20), "[0.21, 0.60]": (21, 60),
            "[0.61, 1.00]": (61, 100),
        }
        for _ in range(10_000):
            p = rng.randint(1900, 2020)
            r = rng.randint(p, p + 40)
            y = rng.randint(p, r + 40)
            last = max(y, r + 1) + rng.randint(0, 20)
            a = assign_period(y, p, r, last)
            periods = [y < r, y == r, y > r]
            assert periods.count(True) == 1
            assert [Period.P_PRE, Period.P_RET, Period.P_POST][periods.index(True)] is a.period
            if a.period is not Period.P_RET:
                assert -1.0 <= a.normalized_position <= 1.0
                cents = round(a.normalized_position * 100)
                lo, hi = bounds[a.fifth]
                assert lo <= cents <= hi
                others = [f for f, (l, h) in bounds.items() if l <= cents <= h]
                assert others == [a.fifth]
            shifted = assign_period(y + 13, p + 13, r + 13, last + 13)
            assert (shifted.period, shifted.normalized_position, shifted.fifth) == (
                a.period, a.normalized_position, a.fifth)


def test_affinity_rules():
    with budget("affinity rules", 5):
        hum = SubjectTag("history", True, "retraction_db")
        non = SubjectTag("medicine", False, "retraction_db")
        hum_v = SubjectTag("arts and humanities", True, "venue_lookup")
        non_v = SubjectTag("medicine", False, "venue_lookup")
        for venue, allsub, title, abstract in itertools.product(
                (0, 1), (0, 1), (0, 1), (-1, 0, 1)):
            rw = (hum,) if allsub else ((hum, non) if venue else (non,))
            score = score_affinity(AffinityInputs(
                retraction_db_subjects=rw,
                venue_subjects=(hum_v,) if venue else (non_v,),
                title_is_clearly_humanities=bool(title),
                abstract_judgment=abstract,
            ))
            assert score.total == 1 + venue + allsub + title + abstract
            assert 0 <= score.total <= 5

        rng = random.Random(77)
        labels = ["history", "arts", "medicine", "physics", "religion", "law"]
        for _ in range(300):
            rw = tuple(SubjectTag(rng.choice(labels), rng.random() < 0.5, "retraction_db")
                       for _ in range(rng.randint(0, 5)))
            venue = tuple(SubjectTag(rng.choice(labels), rng.random() < 0.5, "venue_lookup")
                          for _ in range(rng.randint(0, 5)))
            title, abstract = rng.random() < 0.5, rng.choice([-1, 0, 1])
            base = score_affinity(AffinityInputs(rw, venue, title, abstract))
            extra = SubjectTag("philosophy", True, "retraction_db")
            assert score_affinity(AffinityInputs(rw + (extra,), venue, title, abstract)
                                  ).total >= base.total
            extra_v = SubjectTag("philosophy", True, "venue_lookup")
            assert score_affinity(AffinityInputs(rw, venue + (extra_v,), title, abstract)
                                  ).total >= base.total

        scores = {}
        for i in range(84):
            if i < 12:
                inputs = AffinityInputs((non,), (non_v,), False, -1 if i < 6 else 0)
            else:
                inputs = AffinityInputs((hum, non), (hum_v,), False, 0)
            scores[f"item-{i:02d}"] = score_affinity(inputs)
        result = filter_by_affinity(scores, threshold=2)
        assert len(result.dropped) == 12
        assert len(result.kept) == 72


def test_lda_sampler():
    with budget("LDA sampler", 60):
        X = two_block_corpus()
        small = X[:10]
        small_tokens = int(small.sum())

        def check(sweep, model):
            assert np.allclose(model.current_phi().sum(axis=1), 1.0, atol=1e-9)
            assert np.allclose(model.current_theta().sum(axis=1), 1.0, atol=1e-9)
            assert model.count_state()["topic_totals"].sum() == small_tokens

        GibbsLda(n_topics=2, n_iterations=30, seed=1).fit(
            small, sweep_callback=check)

        m1 = GibbsLda(n_topics=2, n_iterations=200, seed=7).fit(X)
        m2 = GibbsLda(n_topics=2, n_iterations=200, seed=7).fit(X)
        assert np.array_equal(m1.phi_, m2.phi_) and np.array_equal(m1.theta_, m2.theta_)

        dom = m1.dominant_topics()
        b0, b1 = dom[:20], dom[20:]
        maj0 = Counter(b0).most_common(1)[0][0]
        maj1 = Counter(b1).most_common(1)[0][0]
        assert maj0 != maj1
        purity = (np.sum(b0 == maj0) + np.sum(b1 == maj1)) / len(dom)
        assert purity >= 0.9

        report = select_k(X, range(2, 7), n_iterations=120, seed=7)
        assert report.chosen_k == 2


def test_relevance_and_projection():
    with budget("relevance and projection", 30):
        for seed in range(50):
            rng = np.random.default_rng(seed)
            phi = rng.dirichlet(np.ones(40) * 0.4, size=4)
            p_w = rng.dirichlet(np.ones(40))
            vocab = [f"w{i:02d}" for i in range(40)]
            ranking = rank_terms(phi, p_w, vocab, lam=1.0, top_n=40)
            expected = phi_order(phi)
            for t in range(4):
                assert ranking.terms_for(t) == [vocab[i] for i in expected[t]]

        rng = np.random.default_rng(123)
        phi = rng.dirichlet(np.ones(30) * 0.5, size=5)
        D = jsd_matrix(phi)
        for i in range(5):
            for j in range(5):
                p, q = phi[i], phi[j]
                m = (p + q) / 2
                kl_pm = sum(pi * math.log2(pi / mi) for pi, mi in zip(p, m) if pi > 0)
                kl_qm = sum(qi * math.log2(qi / mi) for qi, mi in zip(q, m) if qi > 0)
                assert abs(D[i, j] - 0.5 * (kl_pm + kl_qm)) < 1e-12

        for seed in range(10):
            phi = np.random.default_rng(1000 + seed).dirichlet(np.ones(30) * 0.5, size=5)
            D = jsd_matrix(phi)
            coords = classical_mds(D)
            embedded = np.sqrt(((coords[:, None, :] - coords[None, :, :]) ** 2).sum(-1))
            iu = np.triu_indices(5, k=1)
            assert spearmanr(D[iu], embedded[iu]).statistic >= 0.8


def test_reports_oracle():
    with budget("reports oracle", 10):
        snapshot = build_report_snapshot()
        assert len(snapshot.entities) == 300
        report = descriptive_report(snapshot)
        oracle = tally_report(snapshot)

        for period, table in report["subject_area_distribution_per_period"].items():
            expected = oracle["area_period"][period]
            assert {a: c["count"] for a, c in table["rows"].items()} == expected
            for area, cell in table["rows"].items():
                exact = Fraction(expected[area] * 100, table["denominator"])
                assert abs(cell["pct"] - float(exact)) < 0.01
        got_disc = {
            d: {p: n for p, n in row.items() if n}
            for d, row in report["citing_by_period_and_discipline"]["rows"].items()
        }
        assert got_disc == oracle["disc_period"]
        for group, key in (("by_intent", "intent_period"),
                           ("by_section", "section_period"),
                           ("by_sentiment", "sentiment_period")):
            for period, table in report["in_text"][group].items():
                assert {k: c["count"] for k, c in table["rows"].items()} == oracle[key][period]
        assert report["retraction_mention"]["denominator"] == oracle["mention"]["denominator"]
        assert report["retraction_mention"]["mentioned"] == oracle["mention"]["mentioned"]
        assert report["fulltext_unavailable"]["count"] == oracle["fulltext_unavailable"]["count"]

        table = report["subject_area_distribution_per_period"]
        assert [table[p]["rows"]["Arts and Humanities"]["pct_display"]
                for p in ("P_PRE", "P_RET", "P_POST")] == ["22.94", "18.42", "18.14"]


def test_decision_tree_and_store(tmp_path):
    with budget("decision tree and store", 10):
        tree = CitoDecisionTree.default()
        paths = tree.leaf_paths()
        assert set(paths) == set(tree.vocabulary)
        for function, path in paths.items():
            state = tree.traverse(list(path))
            assert state.complete and state.function == function
        assert tree.traverse([
            "Reviewing and eventually giving an opinion on the cited entity",
            "Inconsistent with", "10", "0.4"]).function == "critiques"
        assert tree.traverse([
            "Reviewing and eventually giving an opinion on the cited entity",
            "Consistent with", "20", "0.1"]).function == "agrees_with"

        from retrace.annotation.model import CitationContext, InTextCitation, SectionLabel
        citations = {
            f"c{i}": InTextCitation(
                id=f"c{i}", citing_entity_id=f"e{i}", cited_item_id="item",
                pointer_text="[1]", section=SectionLabel.INTRODUCTION,
                context=CitationContext(anchor="Claim [1]."))
            for i in range(50)
        }
        path = tmp_path / "log.jsonl"
        store = AnnotationStore(path, citations, intent_vocabulary=tree.vocabulary)
        rng = random.Random(42)
        for _ in range(1000):
            store.record(
                f"c{rng.randrange(50)}",
                rng.choice(["neutral", "negative", "positive"]),
                rng.choice(list(tree.vocabulary)),
                rng.choice([True, False]),
                f"annotator-{rng.randrange(3)}",
            )
        live_state = store.state_bytes()
        store.close()
        assert AnnotationStore.replay(path).state_bytes() == live_state


def test_end_to_end_pipeline(tmp_path):
    with budget("end-to-end pipeline", 120):
        runner = CliRunner()

        def run(root: Path) -> Path:
            out = root / "out"
            steps = [
                ["ingest", str(FIXTURES / "records.csv"),
                 "--mapping", str(FIXTURES / "mapping.json"),
                 "--exclusions", str(FIXTURES / "exclusions.json"),
                 "--out", str(out / "records.json"),
                 "--rejects", str(out / "rejects.json"),
                 "--summary", str(out / "summary.json")],
                ["harvest", "--records", str(out / "records.json"),
                 "--source", f"coci=coci_fixture:{FIXTURES / 'sources' / 'coci'}",
                 "--source", f"graph=graph_fixture:{FIXTURES / 'sources' / 'graph'}",
                 "--cache", str(out / "cache"),
                 "--links", str(out / "citations.json"),
                 "--entities", str(out / "entities.json"),
                 "--metadata", str(FIXTURES / "metadata.json"),
                 "--journal-table", str(FIXTURES / "journal_table.csv"),
                 "--book-table", str(FIXTURES / "book_table.csv")],
                ["affinity", "score", "--records", str(out / "records.json"),
                 "--sidecar", str(FIXTURES / "judgments.csv"),
                 "--journal-table", str(FIXTURES / "journal_table.csv"),
                 "--book-table", str(FIXTURES / "book_table.csv"),
                 "--out", str(out / "affinity.json")],
                ["affinity", "filter", "--scores", str(out / "affinity.json"),
                 "--records", str(out / "records.json"),
                 "--out", str(out / "selection.json")],
                ["segment", "--records", str(out / "records.json"),
                 "--citations", str(out / "entities.json"),
                 "--selection", str(out / "selection.json"),
                 "--out", str(out / "periods.json")],
                ["corpus", "build", "--source", "abstracts",
                 "--records", str(out / "records.json"),
                 "--entities", str(out / "entities.json"),
                 "--periods", str(out / "periods.json"),
                 "--out", str(out / "corpus.json")],
                ["topics", "fit", "--corpus", str(out / "corpus.json"),
                 "--k", "2", "--seed", "7", "--iterations", "200",
                 "--out", str(out / "model.json")],
                ["report", "--records", str(out / "records.json"),
                 "--entities", str(out / "entities.json"),
                 "--periods", str(out / "periods.json"),
                 "--contexts", str(FIXTURES / "contexts.json"),
                 "--selection", str(out / "selection.json"),
                 "--out", str(out / "report.json")],
                ["export-vis", "--report", str(out / "report.json"),
                 "--corpus", str(out / "corpus.json"),
                 "--model", str(out / "model.json"),
                 "--records", str(out / "records.json"),
                 "--entities", str(out / "entities.json"),
                 "--periods", str(out / "periods.json"),
                 "--dest", str(out / "bundle")],
            ]
            for step in steps:
                result = runner.invoke(cli_main, step, catch_exceptions=False)
                assert result.exit_code == 0, f"{step[:2]} failed: {result.output}"
            return out / "bundle"

        bundle1 = run(tmp_path / "run1")
        bundle2 = run(tmp_path / "run2")
        manifest1 = read_json(bundle1 / "manifest.json")
        for artifact in manifest1["artifacts"]:
            assert sha256_file(bundle1 / artifact["path"]) == artifact["sha256"]
        files1 = sorted(p.relative_to(bundle1) for p in bundle1.rglob("*") if p.is_file())
        files2 = sorted(p.relative_to(bundle2) for p in bundle2.rglob("*") if p.is_file())
        assert files1 == files2
        for rel in files1:
            assert (bundle1 / rel).read_bytes() == (bundle2 / rel).read_bytes(), rel
