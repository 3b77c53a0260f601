"""Command-line entry point: runs the pipeline stage by stage.

Stages hand data to each other through documented JSON/CSV files (no
embedded database), so every step is re-runnable, auditable, and
byte-identical given unchanged inputs. Exit codes: 0 success, 1 data or
config error, 2 usage error.
"""

from __future__ import annotations

from pathlib import Path

import click

from . import affinity as aff
from . import harvest as hv
from . import ingest as ing
from . import reports as rep
from . import timeline as tl
from .annotation.model import load_citations
from .annotation.store import AnnotationStore
from .annotation.tree import CitoDecisionTree
from .config import load_config
from .errors import RetraceError
from .jsonio import read_json, sha256_file, write_json
from .textproc import Corpus, TokenPipelineConfig, build_corpus, default_stopwords, load_wordlist
from .topics import (
    GibbsLda,
    build_vis_bundle,
    group_topic_distribution,
    load_model,
    save_model,
    select_k,
)


def _fail(message: str) -> "click.ClickException":
    return click.ClickException(message)


def _require_file(path: str, what: str, hint: str) -> Path:
    p = Path(path)
    if not p.exists():
        raise _fail(f"{what} missing: {p} (run '{hint}' first)")
    return p


@click.group()
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="Pipeline config file (TOML or JSON).")
@click.pass_context
def main(ctx: click.Context, config_path: str | None) -> None:
    """Open-citation analysis of retracted publications."""
    try:
        ctx.obj = load_config(config_path)
    except RetraceError as exc:
        raise _fail(str(exc))


# ---------------------------------------------------------------------------
# ingest
# ---------------------------------------------------------------------------


@main.command()
@click.argument("input_file", type=click.Path(exists=True))
@click.option("--mapping", "mapping_path", type=click.Path(exists=True), required=True,
              help="Column-mapping config JSON.")
@click.option("--out", "records_path", default="out/records.json", show_default=True)
@click.option("--rejects", "rejects_path", default="out/rejects.json", show_default=True)
@click.option("--summary", "summary_path", default="out/summary.json", show_default=True)
@click.option("--exclusions", "exclusions_path", type=click.Path(exists=True), default=None,
              help="JSON list of {id, rationale} to flag.")
@click.option("--humanities-only/--all-records", default=True, show_default=True,
              help="Keep only records with a humanities discipline tag.")
def ingest(input_file, mapping_path, records_path, rejects_path, summary_path,
           exclusions_path, humanities_only) -> None:
    """Parse retraction records from a CSV/TSV export."""
    try:
        mapping = ing.ColumnMapping.load(mapping_path)
        rows = ing.read_delimited(input_file)
        result = ing.parse_retraction_records(rows, mapping)
        records = result.records
        if humanities_only:
            records = ing.filter_humanities(records)
        if exclusions_path:
            exclusions = ing.load_exclusions(exclusions_path)
            records = ing.apply_exclusions(records, exclusions).all_records
        ing.save_records(sorted(records, key=lambda r: r.id), records_path)
        ing.save_rejects(result.rejects, rejects_path)
        selected = [r for r in records if not r.excluded]
        write_json(summary_path, ing.summarize_retractions(selected).to_dict())
    except RetraceError as exc:
        raise _fail(str(exc))
    click.echo(
        f"ingested {len(records)} record(s) ({len(result.rejects)} rejected) -> {records_path}"
    )


# ---------------------------------------------------------------------------
# harvest
# ---------------------------------------------------------------------------


def _make_source(spec: str):
    try:
        name, rest = spec.split("=", 1)
        kind, location = rest.split(":", 1)
    except ValueError:
        raise _fail(f"bad --source {spec!r}; expected NAME=KIND:LOCATION")
    if kind == "coci_fixture":
        return hv.CociFixtureSource(name, location)
    if kind == "graph_fixture":
        return hv.GraphFixtureSource(name, location)
    if kind == "coci_live":
        return hv.CociLiveSource(name, location)
    raise _fail(f"unknown source kind {kind!r}")


@main.command()
@click.option("--records", "records_path", default="out/records.json", show_default=True)
@click.option("--source", "source_specs", multiple=True, required=True,
              help="Citation source as NAME=KIND:LOCATION (kinds: coci_fixture, graph_fixture, coci_live).")
@click.option("--cache", "cache_dir", default="out/cache", show_default=True)
@click.option("--links", "links_path", default="out/citations.json", show_default=True)
@click.option("--entities", "entities_path", default="out/entities.json", show_default=True)
@click.option("--metadata", "metadata_path", type=click.Path(exists=True), default=None,
              help="Fixture metadata JSON keyed by DOI/id.")
@click.option("--journal-table", type=click.Path(exists=True), default=None)
@click.option("--book-table", type=click.Path(exists=True), default=None)
@click.option("--lcc-table", type=click.Path(exists=True), default=None)
def harvest(records_path, source_specs, cache_dir, links_path, entities_path,
            metadata_path, journal_table, book_table, lcc_table) -> None:
    """Fetch citation links, merge sources, enrich and classify."""
    try:
        records = ing.load_records(_require_file(records_path, "records", "retrace ingest"))
        sources = [_make_source(s) for s in source_specs]
        cache = hv.FetchCache(cache_dir)
        links_by_source: dict[str, list[hv.CitationLink]] = {s.name: [] for s in sources}
        all_links: list[hv.CitationLink] = []
        for rec in records:
            if rec.excluded or not rec.doi:
                continue
            for source in sources:
                links = hv.fetch_citations(source, rec.doi, cache=cache)
                links_by_source[source.name].extend(links)
                all_links.extend(links)
        hv.save_links(all_links, links_path)
        merged = hv.merge_sources(links_by_source)
        entities = merged.entities
        quarantined: list[hv.QuarantinedEntity] = []
        if metadata_path:
            metadata = hv.MetadataSource.load(metadata_path)
            entities, quarantined = hv.enrich_entities(entities, metadata)
        else:
            with_year = [e for e in entities if e.year is not None]
            quarantined = [
                hv.QuarantinedEntity(e, "no publication year resolvable")
                for e in entities if e.year is None
            ]
            entities = with_year
        if journal_table:
            tables = hv.LookupTables.load(journal_table, book_table, lcc_table)
            classified = []
            for ent in entities:
                vc = hv.classify_venue(ent.venue_ids, ent.venue_title, tables)
                ent.subject_areas = list(vc.areas)
                ent.subject_categories = list(vc.categories)
                classified.append(ent)
            entities = classified
        hv.save_entities(entities, entities_path, merged.conflicts, quarantined)
    except RetraceError as exc:
        raise _fail(str(exc))
    click.echo(
        f"harvested {len(all_links)} link(s) -> {len(entities)} entities "
        f"({len(quarantined)} quarantined) -> {entities_path}"
    )


# ---------------------------------------------------------------------------
# affinity
# ---------------------------------------------------------------------------


@main.group("affinity")
def affinity_group() -> None:
    """Score and filter retracted items by humanities affinity."""


@affinity_group.command("score")
@click.option("--records", "records_path", default="out/records.json", show_default=True)
@click.option("--sidecar", "sidecar_path", type=click.Path(exists=True), default=None,
              help="Human-judgment CSV: item_id, title_bonus, abstract_adjustment, note.")
@click.option("--journal-table", type=click.Path(exists=True), default=None)
@click.option("--book-table", type=click.Path(exists=True), default=None)
@click.option("--lcc-table", type=click.Path(exists=True), default=None)
@click.option("--tags", "tags_path", type=click.Path(exists=True), default=None,
              help="Humanities tag list (one per line); defaults to the bundled set.")
@click.option("--out", "scores_path", default="out/affinity.json", show_default=True)
def affinity_score(records_path, sidecar_path, journal_table, book_table,
                   lcc_table, tags_path, scores_path) -> None:
    """Compute per-item affinity scores with a full audit breakdown."""
    try:
        records = ing.load_records(_require_file(records_path, "records", "retrace ingest"))
        tags = aff.HumanitiesTagSet.from_file(tags_path) if tags_path else aff.HumanitiesTagSet.default()
        judgments = aff.load_judgments(sidecar_path) if sidecar_path else {}
        tables = hv.LookupTables.load(journal_table, book_table, lcc_table) if journal_table else None
        scores: dict[str, aff.AffinityScore] = {}
        for rec in records:
            venue_tags: list = []
            if tables is not None:
                ids = [v for v in (rec.venue_issn, rec.venue_isbn) if v]
                vc = hv.classify_venue(ids, rec.venue_title, tables)
                venue_tags = [tags.tag(label, "venue_lookup") for label in vc.areas + vc.categories]
            judgment = judgments.get(rec.id)
            inputs = aff.AffinityInputs(
                retraction_db_subjects=tuple(rec.subjects),
                venue_subjects=tuple(venue_tags),
                title_is_clearly_humanities=bool(judgment.title_bonus) if judgment else False,
                abstract_judgment=judgment.abstract_adjustment if judgment else 0,
            )
            scores[rec.id] = aff.score_affinity(inputs)
        aff.save_scores(scores, scores_path)
    except RetraceError as exc:
        raise _fail(str(exc))
    click.echo(f"scored {len(scores)} item(s) -> {scores_path}")


@affinity_group.command("filter")
@click.option("--scores", "scores_path", default="out/affinity.json", show_default=True)
@click.option("--records", "records_path", default="out/records.json", show_default=True)
@click.option("--threshold", default=2, show_default=True)
@click.option("--out", "selection_path", default="out/selection.json", show_default=True)
def affinity_filter(scores_path, records_path, threshold, selection_path) -> None:
    """Partition items at the affinity threshold."""
    try:
        scores = aff.load_scores(_require_file(scores_path, "scores", "retrace affinity score"))
        records = ing.load_records(_require_file(records_path, "records", "retrace ingest"))
        aff.require_all_scored([r.id for r in records if not r.excluded], scores)
        result = aff.filter_by_affinity(scores, threshold=threshold)
        aff.save_selection(result, selection_path)
    except RetraceError as exc:
        raise _fail(str(exc))
    click.echo(
        f"kept {len(result.kept)} item(s), dropped {len(result.dropped)} -> {selection_path}"
    )


# ---------------------------------------------------------------------------
# segment
# ---------------------------------------------------------------------------


@main.command()
@click.option("--records", "records_path", default="out/records.json", show_default=True)
@click.option("--citations", "entities_path", default="out/entities.json", show_default=True,
              help="Citing-entities file from 'retrace harvest'.")
@click.option("--selection", "selection_path", type=click.Path(), default=None,
              help="Affinity selection; limits segmentation to kept items.")
@click.option("--out", "periods_path", default="out/periods.json", show_default=True)
def segment(records_path, entities_path, selection_path, periods_path) -> None:
    """Assign every (citing, cited) pair to its period and fifth."""
    try:
        records = ing.load_records(_require_file(records_path, "records", "retrace ingest"))
        entities = hv.load_entities(_require_file(entities_path, "citations", "retrace harvest"))
        keep = {r.id for r in records if not r.excluded}
        if selection_path:
            selection = aff.load_selection(_require_file(
                selection_path, "selection", "retrace affinity filter"))
            keep &= set(selection.kept)
        item_years = {
            r.id: (r.pub_year, r.retraction_year) for r in records if r.id in keep
        }
        doi_to_id = {r.doi: r.id for r in records if r.doi and r.id in keep}
        citing_years: dict[str, int] = {}
        cited_items: dict[str, list[str]] = {}
        for ent in entities:
            if ent.year is None:
                continue
            cited = sorted({
                doi_to_id.get(c, c) for c in ent.cited_items
            } & set(item_years))
            if not cited:
                continue
            citing_years[ent.id] = ent.year
            cited_items[ent.id] = cited
        pairs = tl.assign_pairs(citing_years, cited_items, item_years)
        tl.save_assignments(pairs, periods_path)
    except RetraceError as exc:
        raise _fail(str(exc))
    click.echo(f"assigned {len(pairs)} pair(s) -> {periods_path}")


# ---------------------------------------------------------------------------
# corpus
# ---------------------------------------------------------------------------


@main.group("corpus")
def corpus_group() -> None:
    """Build bag-of-words corpora."""


def _period_metadata(pairs: list[tl.PairAssignment]) -> dict[str, list[str]]:
    by_citing: dict[str, list[str]] = {}
    for p in pairs:
        by_citing.setdefault(p.citing_id, [])
        if p.assignment.period.value not in by_citing[p.citing_id]:
            by_citing[p.citing_id].append(p.assignment.period.value)
    return by_citing


@corpus_group.command("build")
@click.option("--source", "text_source", type=click.Choice(["abstracts", "contexts"]),
              default="abstracts", show_default=True)
@click.option("--records", "records_path", default="out/records.json", show_default=True)
@click.option("--entities", "entities_path", default="out/entities.json", show_default=True)
@click.option("--periods", "periods_path", default="out/periods.json", show_default=True)
@click.option("--contexts", "contexts_path", type=click.Path(), default=None,
              help="Pre-extracted in-text citations (required for --source contexts).")
@click.option("--store", "store_path", type=click.Path(), default=None,
              help="Annotation store; attaches intent metadata to context documents.")
@click.option("--extra-stopwords", "extra_stopwords_path", type=click.Path(exists=True), default=None)
@click.option("--min-count", default=1, show_default=True)
@click.option("--no-stemming", is_flag=True, default=False)
@click.option("--out", "corpus_path", default="out/corpus.json", show_default=True)
def corpus_build(text_source, records_path, entities_path, periods_path, contexts_path,
                 store_path, extra_stopwords_path, min_count, no_stemming, corpus_path) -> None:
    """Vectorize abstracts or citation contexts into a corpus file."""
    try:
        records = ing.load_records(_require_file(records_path, "records", "retrace ingest"))
        entities = hv.load_entities(_require_file(entities_path, "entities", "retrace harvest"))
        pairs = tl.load_assignments(_require_file(periods_path, "periods", "retrace segment"))
        period_meta = _period_metadata(pairs)
        doi_to_rec = {r.doi: r for r in records if r.doi}
        recs_by_id = {r.id: r for r in records}

        def disciplines_for(cited_ids: list[str]) -> list[str]:
            discs: set[str] = set()
            for cid in cited_ids:
                rec = recs_by_id.get(cid) or doi_to_rec.get(cid)
                if rec:
                    discs.update(rec.humanities_disciplines)
            return sorted(discs)

        extra = load_wordlist(extra_stopwords_path) if extra_stopwords_path else frozenset()
        cfg = TokenPipelineConfig(
            base_stopwords=default_stopwords(),
            extra_stopwords=extra,
            stemming=not no_stemming,
        )
        docs: list[tuple[str, str, dict]] = []
        if text_source == "abstracts":
            for ent in entities:
                if not ent.abstract or ent.id not in period_meta:
                    continue
                periods = period_meta[ent.id]
                docs.append((ent.id, ent.abstract, {
                    "period": periods[0] if len(periods) == 1 else sorted(periods),
                    "discipline": disciplines_for(ent.cited_items),
                    "subject_areas": sorted(ent.subject_areas),
                }))
        else:
            if not contexts_path:
                raise _fail("--source contexts requires --contexts")
            citations = load_citations(_require_file(
                contexts_path, "contexts", "provide a contexts file"))
            latest = {}
            if store_path and Path(store_path).exists():
                latest = AnnotationStore.replay(store_path).latest()
            pair_period = {
                (p.citing_id, p.cited_id): p.assignment.period.value for p in pairs
            }
            for cit in citations:
                period = pair_period.get((cit.citing_entity_id, cit.cited_item_id))
                if period is None:
                    continue
                rec = latest.get(cit.id)
                intent = rec.intent if rec else (cit.intent or "unknown")
                text = " ".join(cit.context.sentences())
                docs.append((cit.id, text, {
                    "period": period,
                    "discipline": disciplines_for([cit.cited_item_id]),
                    "section": cit.section.value,
                    "intent": intent,
                }))
        corpus = build_corpus(docs, config=cfg, min_count=min_count)
        corpus.save(corpus_path)
    except RetraceError as exc:
        raise _fail(str(exc))
    click.echo(f"built corpus of {len(corpus)} document(s), "
               f"{len(corpus.vocabulary)} term(s) -> {corpus_path}")


# ---------------------------------------------------------------------------
# topics
# ---------------------------------------------------------------------------


@main.group("topics")
def topics_group() -> None:
    """Fit and explore topic models."""


@topics_group.command("fit")
@click.option("--corpus", "corpus_path", default="out/corpus.json", show_default=True)
@click.option("--k", default=10, show_default=True)
@click.option("--alpha", type=float, default=None, help="Defaults to 50/k.")
@click.option("--beta", type=float, default=0.01, show_default=True)
@click.option("--iterations", default=1000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "model_path", default="out/model.json", show_default=True)
def topics_fit(corpus_path, k, alpha, beta, iterations, seed, model_path) -> None:
    """Fit an LDA model with collapsed Gibbs sampling."""
    try:
        corpus = Corpus.load(_require_file(corpus_path, "corpus", "retrace corpus build"))
        model = GibbsLda(n_topics=k, alpha=alpha, beta=beta,
                         n_iterations=iterations, seed=seed)
        model.fit(corpus.to_matrix())
        save_model(model, model_path, corpus_hash=corpus.content_hash())
    except RetraceError as exc:
        raise _fail(str(exc))
    click.echo(f"fitted k={k} model on {len(corpus)} document(s) -> {model_path}")


def _parse_k_range(spec: str) -> list[int]:
    if ".." in spec:
        lo, hi = spec.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(part) for part in spec.split(",") if part.strip()]


@topics_group.command("select-k")
@click.option("--corpus", "corpus_path", default="out/corpus.json", show_default=True)
@click.option("--k", "k_spec", default="2..10", show_default=True,
              help="Range 'LO..HI' (inclusive) or comma list.")
@click.option("--alpha", type=float, default=None)
@click.option("--beta", type=float, default=0.01, show_default=True)
@click.option("--iterations", default=200, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--top-n", default=10, show_default=True)
@click.option("--out", "report_path", default="out/coherence.json", show_default=True)
def topics_select_k(corpus_path, k_spec, alpha, beta, iterations, seed, top_n, report_path) -> None:
    """Pick the topic count by coherence over a k range."""
    try:
        corpus = Corpus.load(_require_file(corpus_path, "corpus", "retrace corpus build"))
        report = select_k(corpus.to_matrix(), _parse_k_range(k_spec), alpha=alpha,
                          beta=beta, n_iterations=iterations, seed=seed, top_n=top_n)
        write_json(report_path, report.to_dict())
    except RetraceError as exc:
        raise _fail(str(exc))
    click.echo(f"chosen_k={report.chosen_k} "
               + " ".join(f"k={k}:{v:.4f}" for k, v in sorted(report.per_k.items()))
               + f" -> {report_path}")


@topics_group.command("export")
@click.option("--corpus", "corpus_path", default="out/corpus.json", show_default=True)
@click.option("--model", "model_path", default="out/model.json", show_default=True)
@click.option("--lambda", "lam", type=float, default=0.3, show_default=True)
@click.option("--top-n", default=30, show_default=True)
@click.option("--group-key", "group_keys", multiple=True, default=("period",), show_default=True)
@click.option("--out", "bundle_path", default="out/visbundle.json", show_default=True)
def topics_export(corpus_path, model_path, lam, top_n, group_keys, bundle_path) -> None:
    """Write the visualization bundle (phi, p(w), vocabulary, topic map,
    relevance rankings, grouped tables)."""
    try:
        corpus = Corpus.load(_require_file(corpus_path, "corpus", "retrace corpus build"))
        model = load_model(_require_file(model_path, "model", "retrace topics fit"))
        bundle = build_vis_bundle(model, corpus, default_lambda=lam,
                                  top_n=top_n, group_keys=tuple(group_keys))
        write_json(bundle_path, bundle)
    except RetraceError as exc:
        raise _fail(str(exc))
    click.echo(f"exported visualization bundle -> {bundle_path}")


# ---------------------------------------------------------------------------
# report / export-vis
# ---------------------------------------------------------------------------


def _load_snapshot(records_path, entities_path, periods_path, contexts_path,
                   store_path, selection_path) -> rep.Snapshot:
    records = ing.load_records(_require_file(records_path, "records", "retrace ingest"))
    entities = hv.load_entities(_require_file(entities_path, "entities", "retrace harvest"))
    pairs = tl.load_assignments(_require_file(periods_path, "periods", "retrace segment"))
    citations = []
    if contexts_path and Path(contexts_path).exists():
        citations = load_citations(contexts_path)
        if store_path and Path(store_path).exists():
            store = AnnotationStore(store_path, citations={c.id: c for c in citations}, lock=False)
            citations = store.annotated_citations()
    selected = None
    if selection_path:
        selected = set(aff.load_selection(_require_file(
            selection_path, "selection", "retrace affinity filter")).kept)
    return rep.Snapshot(
        records=records,
        entities=entities,
        assignments=pairs,
        citations=citations,
        selected_item_ids=selected,
    )


@main.command()
@click.option("--records", "records_path", default="out/records.json", show_default=True)
@click.option("--entities", "entities_path", default="out/entities.json", show_default=True)
@click.option("--periods", "periods_path", default="out/periods.json", show_default=True)
@click.option("--contexts", "contexts_path", type=click.Path(), default=None)
@click.option("--store", "store_path", type=click.Path(), default=None)
@click.option("--selection", "selection_path", type=click.Path(), default=None)
@click.option("--include-paywalled/--exclude-paywalled", default=True, show_default=True,
              help="Count entities without full text in the mention-rate denominator.")
@click.option("--out", "report_path", default="out/report.json", show_default=True)
def report(records_path, entities_path, periods_path, contexts_path, store_path,
           selection_path, include_paywalled, report_path) -> None:
    """Produce the descriptive-statistics report."""
    try:
        snapshot = _load_snapshot(records_path, entities_path, periods_path,
                                  contexts_path, store_path, selection_path)
        result = rep.descriptive_report(
            snapshot, include_paywalled_in_mention_rate=include_paywalled)
        write_json(report_path, result)
    except RetraceError as exc:
        raise _fail(str(exc))
    click.echo(f"report over {result['totals']['entities']} entities -> {report_path}")


@main.command("export-vis")
@click.option("--report", "report_path", default="out/report.json", show_default=True)
@click.option("--corpus", "corpus_path", type=click.Path(), default=None)
@click.option("--model", "model_path", type=click.Path(), default=None)
@click.option("--records", "records_path", default="out/records.json", show_default=True)
@click.option("--entities", "entities_path", default="out/entities.json", show_default=True)
@click.option("--periods", "periods_path", default="out/periods.json", show_default=True)
@click.option("--lambda", "lam", type=float, default=0.3, show_default=True)
@click.option("--group-key", "group_keys", multiple=True, default=("period",), show_default=True)
@click.option("--dest", "dest_dir", default="out/bundle", show_default=True)
def export_vis(report_path, corpus_path, model_path, records_path, entities_path,
               periods_path, lam, group_keys, dest_dir) -> None:
    """Assemble the self-contained visualization bundle directory."""
    try:
        report_data = read_json(_require_file(report_path, "report", "retrace report"))
        records = ing.load_records(_require_file(records_path, "records", "retrace ingest"))
        pairs = tl.load_assignments(_require_file(periods_path, "periods", "retrace segment"))
        item_years = {r.id: (r.pub_year, r.retraction_year) for r in records}
        item_disciplines = {r.id: r.humanities_disciplines for r in records if not r.excluded}
        series = tl.build_series(
            [p for p in pairs if p.cited_id in item_years], item_years, item_disciplines)
        hashes = {"report": sha256_file(report_path)}
        topic_bundles = None
        grouped = None
        if corpus_path and model_path:
            corpus = Corpus.load(_require_file(corpus_path, "corpus", "retrace corpus build"))
            model = load_model(_require_file(model_path, "model", "retrace topics fit"))
            topic_bundles = {
                "vis_bundle": build_vis_bundle(model, corpus, default_lambda=lam,
                                               group_keys=tuple(group_keys)),
            }
            grouped = {
                key: group_topic_distribution(
                    model.theta_, corpus.doc_ids, corpus.doc_metadata, key).to_dict()
                for key in group_keys
            }
            hashes["corpus"] = corpus.content_hash()
            hashes["model"] = sha256_file(model_path)
        dest = rep.export_visualization(
            report_data, dest_dir, topic_bundles=topic_bundles,
            grouped_tables=grouped, series=series, hashes=hashes)
    except RetraceError as exc:
        raise _fail(str(exc))
    click.echo(f"exported bundle -> {dest}")


# ---------------------------------------------------------------------------
# annotate
# ---------------------------------------------------------------------------


@main.group("annotate")
def annotate_group() -> None:
    """Human annotation of in-text citations."""


@annotate_group.command("export")
@click.option("--store", "store_path", default="out/annotations.jsonl", show_default=True)
@click.option("--out", "csv_path", default="out/annotations.csv", show_default=True)
def annotate_export(store_path, csv_path) -> None:
    """Export the annotation event history as CSV."""
    try:
        store = AnnotationStore.replay(_require_file(
            store_path, "store", "retrace annotate serve"))
        store.export_csv(csv_path)
    except RetraceError as exc:
        raise _fail(str(exc))
    click.echo(f"exported {len(store.events())} event(s) -> {csv_path}")


@annotate_group.command("import")
@click.argument("csv_file", type=click.Path(exists=True))
@click.option("--store", "store_path", default="out/annotations.jsonl", show_default=True)
@click.option("--contexts", "contexts_path", type=click.Path(exists=True), default=None,
              help="Contexts file; when given, imports validate citation ids.")
@click.option("--tree", "tree_path", type=click.Path(exists=True), default=None)
def annotate_import(csv_file, store_path, contexts_path, tree_path) -> None:
    """Append annotation events from a CSV export."""
    from .annotation.store import StoreLockedError

    try:
        citations = None
        if contexts_path:
            citations = {c.id: c for c in load_citations(contexts_path)}
        tree = CitoDecisionTree.load(tree_path) if tree_path else CitoDecisionTree.default()
        with AnnotationStore(store_path, citations=citations,
                             intent_vocabulary=tree.vocabulary) as store:
            count = store.import_csv(csv_file)
    except (RetraceError, StoreLockedError) as exc:
        raise _fail(str(exc))
    click.echo(f"imported {count} event(s) -> {store_path}")


@annotate_group.command("serve")
@click.option("--store", "store_path", default="out/annotations.jsonl", show_default=True)
@click.option("--contexts", "contexts_path", type=click.Path(exists=True), required=True)
@click.option("--tree", "tree_path", type=click.Path(exists=True), default=None,
              help="Decision-tree config; defaults to the bundled one.")
@click.option("--exports", "exports_dir", type=click.Path(), default=None,
              help="Directory of visualization bundles to serve.")
@click.option("--ui", "ui_dir", type=click.Path(), default=None,
              help="Built workbench assets to host at /.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8787, show_default=True)
def annotate_serve(store_path, contexts_path, tree_path, exports_dir, ui_dir, host, port) -> None:
    """Serve the annotation API (and the workbench, when built)."""
    import uvicorn

    from .annotation.api import create_app
    from .annotation.store import StoreLockedError

    try:
        citations = {c.id: c for c in load_citations(contexts_path)}
        tree = CitoDecisionTree.load(tree_path) if tree_path else CitoDecisionTree.default()
        store = AnnotationStore(store_path, citations=citations,
                                intent_vocabulary=tree.vocabulary)
    except (RetraceError, StoreLockedError) as exc:
        raise _fail(str(exc))
    app = create_app(store, tree=tree, exports_dir=exports_dir, ui_dir=ui_dir)
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    finally:
        store.close()


if __name__ == "__main__":
    main()
