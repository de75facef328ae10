"""Command-line entry point wiring the modules into pipelines.

Exit codes: 0 success, 1 usage error, 2 data/validation error,
3 non-convergence. Progress goes to stderr; data outputs go to files or
stdout only.
"""

import csv
import dataclasses
import json
import logging
import sys

import click

from . import arpa, ngram, sampler
from .config import load_config
from .documents import IngestReport, ingest, read_jsonl, write_jsonl
from .errors import ConvergenceError, CorpusKitError, DataError
from .evalreport import (
    SKILLS,
    gains,
    load_scores,
    rank_models,
    render,
    skill_scores,
)
from .genre import GenreImputer
from .pipeline import (
    BalanceReport,
    DedupReport,
    LanguageBudget,
    SubsetSpec,
    balance_languages,
    corpus_stats,
    dedup,
    validate_instructions,
)
from .text import word_count

log = logging.getLogger("corpuskit")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NO_CONVERGENCE = 3


@click.group()
@click.option("--seed", type=int, default=0, show_default=True,
              help="Seed for all sampling decisions; never wall-clock.")
@click.option("--config", "config_path", type=click.Path(exists=True),
              help="TOML config with budgets, subsets, metrics, and skills.")
@click.option("--workers", type=int, default=1, show_default=True,
              help="Worker count; has no effect on results.")
@click.pass_context
def cli(ctx, seed, config_path, workers):
    """Corpus curation and benchmark aggregation toolkit."""
    logging.basicConfig(
        stream=sys.stderr, level=logging.INFO,
        format="corpuskit %(levelname)s %(message)s",
    )
    ctx.obj = {
        "seed": seed,
        "config": load_config(config_path) if config_path else None,
        "workers": max(1, workers),
    }


def _seed(ctx, local_seed):
    return local_seed if local_seed is not None else ctx.obj["seed"]


def _require_config(ctx, what):
    cfg = ctx.obj["config"]
    if cfg is None:
        raise DataError(f"{what} requires --config")
    return cfg


# -- lm -------------------------------------------------------------------


@cli.group()
def lm():
    """Train and apply Kneser-Ney language models."""


@lm.command("train")
@click.option("--order", type=int, default=3, show_default=True)
@click.option("--normalize", is_flag=True, help="Normalize text before tokenizing.")
@click.option("--out", "out_path", required=True, type=click.Path())
@click.argument("corpus", type=click.Path(exists=True))
@click.pass_context
def lm_train(ctx, order, normalize, out_path, corpus):
    """Train an n-gram model on a JSONL corpus."""
    texts = (doc.text for doc in read_jsonl(corpus))
    model = ngram.train(texts, order=order, normalize=normalize,
                        workers=ctx.obj["workers"])
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        arpa.save(model, fh)
    log.info("trained order=%d documents=%d tokens=%d out=%s",
             order, model.n_documents_, model.n_tokens_, out_path)


@lm.command("score")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.argument("corpus", type=click.Path(exists=True))
def lm_score(model_path, out_path, corpus):
    """Write per-document perplexities as CSV (id, tokens, perplexity)."""
    with open(model_path, encoding="utf-8") as fh:
        model = arpa.load(fh)
    n = 0
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "tokens", "perplexity"])
        for doc in read_jsonl(corpus):
            total, tokens = model.score_document(doc.text)
            writer.writerow([doc.id, tokens, repr(10.0 ** (-total / tokens))])
            n += 1
    log.info("scored documents=%d out=%s", n, out_path)


# -- sample ---------------------------------------------------------------


def _read_score_csv(path):
    """id -> perplexity from a lm-score CSV."""
    with open(path, encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "perplexity" not in reader.fieldnames:
            raise DataError(f"{path}: expected a CSV with a perplexity column")
        return {row["id"]: float(row["perplexity"]) for row in reader}


def _attach_perplexities(docs, by_id):
    for doc in docs:
        if doc.perplexity is None:
            if doc.id not in by_id:
                raise DataError(f"missing perplexity for document {doc.id}")
            doc = dataclasses.replace(doc, perplexity=by_id[doc.id])
        yield doc


@cli.group()
def sample():
    """Perplexity-based sub-sampling and segmentation."""


@sample.command("fit")
@click.option("--scores", "scores_path", required=True, type=click.Path(exists=True))
@click.option("--ratio", type=float, required=True)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--bins", type=int, default=sampler.DEFAULT_BINS, show_default=True)
@click.option("--tolerance", type=float, default=1e-3, show_default=True)
@click.option("--adjust-mu", is_flag=True)
def sample_fit(scores_path, ratio, out_path, bins, tolerance, adjust_mu):
    """Fit the Gaussian retention curve for a target keep ratio."""
    values = list(_read_score_csv(scores_path).values())
    dist = sampler.build_distribution(values, bins=bins)
    fit = sampler.fit_gaussian(dist, ratio, tolerance=tolerance, adjust_mu=adjust_mu)
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(fit.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    log.info("fit mu=%g sigma=%g n=%g iterations=%d out=%s",
             fit.mu, fit.sigma, fit.n_factor, fit.iterations_used, out_path)


@sample.command("apply")
@click.option("--fit", "fit_path", required=True, type=click.Path(exists=True))
@click.option("--scores", "scores_path", type=click.Path(exists=True),
              help="Join perplexities by id when the corpus lacks them.")
@click.option("--seed", type=int, default=None)
@click.argument("corpus", type=click.Path(exists=True))
@click.pass_context
def sample_apply(ctx, fit_path, scores_path, seed, corpus):
    """Sub-sample a corpus with a fitted retention curve; JSONL to stdout."""
    with open(fit_path, encoding="utf-8") as fh:
        fit = sampler.GaussianFit.from_dict(json.load(fh))
    docs = read_jsonl(corpus)
    if scores_path:
        docs = _attach_perplexities(docs, _read_score_csv(scores_path))
    kept = sampler.subsample(list(docs), fit, _seed(ctx, seed),
                             workers=ctx.obj["workers"])
    write_jsonl(kept, sys.stdout)
    log.info("retained documents=%d", len(kept))


@sample.command("segment")
@click.option("--scores", "scores_path", required=True, type=click.Path(exists=True))
@click.option("--out-prefix", required=True)
@click.option("--bins", type=int, default=sampler.DEFAULT_BINS, show_default=True)
@click.option("--seed", type=int, default=None)
@click.argument("corpus", type=click.Path(exists=True))
@click.pass_context
def sample_segment(ctx, scores_path, out_prefix, bins, seed, corpus):
    """Split a corpus into good/medium/bad quality bands by quartiles."""
    by_id = _read_score_csv(scores_path)
    dist = sampler.build_distribution(list(by_id.values()), bins=bins)
    docs = list(_attach_perplexities(read_jsonl(corpus), by_id))
    bands = sampler.segment(docs, dist, seed=_seed(ctx, seed))
    for label, band in bands.items():
        path = f"{out_prefix}{label}.jsonl"
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            write_jsonl(
                (dataclasses.replace(d, segment=label) for d in band), fh
            )
        log.info("segment=%s documents=%d out=%s", label, len(band), path)


# -- corpus ---------------------------------------------------------------


@cli.group()
def corpus():
    """Document stream operations."""


@corpus.command("ingest")
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--fail-fast", is_flag=True)
@click.argument("input_path", type=click.Path(exists=True))
def corpus_ingest(out_path, fail_fast, input_path):
    """Validate a JSONL corpus and rewrite it with defaults filled in."""
    report = IngestReport()
    with open(input_path, encoding="utf-8") as src, \
            open(out_path, "w", encoding="utf-8", newline="\n") as dst:
        write_jsonl(ingest(src, fail_fast=fail_fast, report=report), dst)
    for line_no, reason in report.skipped:
        log.warning("skipped line %d: %s", line_no, reason)
    log.info("ingested read=%d accepted=%d skipped=%d out=%s",
             report.read, report.accepted, len(report.skipped), out_path)


@corpus.command("dedup")
@click.option("--out", "out_path", required=True, type=click.Path())
@click.argument("input_path", type=click.Path(exists=True))
@click.pass_context
def corpus_dedup(ctx, out_path, input_path):
    """Remove exact duplicates under text normalization; first wins."""
    report = DedupReport()
    kept = dedup(read_jsonl(input_path), report=report,
                 workers=ctx.obj["workers"])
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        write_jsonl(kept, fh)
    log.info("dedup kept=%d dropped=%d out=%s", report.kept, report.dropped, out_path)
    for source, n in sorted(report.dropped_per_source.items()):
        log.info("dedup dropped source=%s count=%d", source, n)


@corpus.command("balance")
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--seed", type=int, default=None)
@click.argument("input_path", type=click.Path(exists=True))
@click.pass_context
def corpus_balance(ctx, out_path, seed, input_path):
    """Sub-sample languages to budget ratios (Table 5 profile by default)."""
    cfg = ctx.obj["config"]
    budget = cfg.budget if cfg and cfg.budget else LanguageBudget()
    report = BalanceReport()
    kept = balance_languages(read_jsonl(input_path), budget, _seed(ctx, seed),
                             report=report, workers=ctx.obj["workers"])
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        write_jsonl(kept, fh)
    for lang in sorted(set(report.kept) | set(report.dropped)):
        log.info("balance language=%s kept=%d dropped=%d achieved=%.4f",
                 lang, report.kept[lang], report.dropped[lang],
                 report.achieved_ratio(lang))


@corpus.command("subset")
@click.option("--name", help="Subset name from the config.")
@click.option("--predicate", help="Inline predicate instead of --config.")
@click.option("--out", "out_path", required=True, type=click.Path())
@click.argument("input_path", type=click.Path(exists=True))
@click.pass_context
def corpus_subset(ctx, name, predicate, out_path, input_path):
    """Extract an ablation subset by metadata predicate."""
    if predicate:
        spec = SubsetSpec(name=name or "inline", predicate=predicate)
    else:
        cfg = _require_config(ctx, "corpus subset without --predicate")
        matches = [s for s in cfg.subsets if s.name == name]
        if not matches:
            raise DataError(f"no subset named {name!r} in config")
        spec = matches[0]
    from .pipeline import build_subset

    docs, report = build_subset(read_jsonl(input_path), spec)
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        write_jsonl(docs, fh)
    log.info("subset name=%s documents=%d words=%d out=%s",
             report.name, report.documents, report.words, out_path)


@corpus.command("impute-genre")
@click.option("--labeled", "labeled_path", required=True,
              type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--seed", type=int, default=None)
@click.argument("input_path", type=click.Path(exists=True))
@click.pass_context
def corpus_impute_genre(ctx, labeled_path, out_path, seed, input_path):
    """Fill in fiction/nonfiction for books with unknown genre."""
    imputer = GenreImputer(seed=_seed(ctx, seed)).fit(read_jsonl(labeled_path))
    docs = imputer.transform(read_jsonl(input_path))
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        write_jsonl(docs, fh)
    log.info("impute-genre holdout_accuracy=%.4f documents=%d out=%s",
             imputer.holdout_accuracy_, len(docs), out_path)


@corpus.command("validate-instructions")
@click.argument("input_path", type=click.Path(exists=True))
def corpus_validate_instructions(input_path):
    """Validate instruction triplets; summary to stdout, failures to stderr."""
    with open(input_path, encoding="utf-8") as fh:
        report = validate_instructions(fh)
    for line_no, reason in report.failures:
        log.warning("line %d: %s", line_no, reason)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["kind", "key", "count"])
    writer.writerow(["summary", "records", report.records])
    writer.writerow(["summary", "passed", report.passed])
    writer.writerow(["summary", "failed", len(report.failures)])
    for cat, n in sorted(report.per_category.items()):
        writer.writerow(["category", cat, n])
    for dom, n in sorted(report.per_domain.items()):
        writer.writerow(["domain", dom, n])


@corpus.command("stats")
@click.argument("input_path", type=click.Path(exists=True))
@click.option("--whitespace-tokens", is_flag=True,
              help="Count tokens by whitespace split (fertility becomes 1.0).")
def corpus_stats_cmd(input_path, whitespace_tokens):
    """Document and word totals per source and language."""
    counter = word_count if whitespace_tokens else None
    report = corpus_stats(read_jsonl(input_path), token_counter=counter)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["kind", "key", "documents", "words"])
    writer.writerow(["total", "", report.documents, report.words])
    for source in sorted(report.per_source):
        writer.writerow(["source", source, report.per_source[source],
                         report.words_per_source[source]])
    for lang in sorted(report.per_language):
        writer.writerow(["language", lang, report.per_language[lang],
                         report.words_per_language[lang]])
    if report.fertility is not None:
        writer.writerow(["fertility", "", "", repr(report.fertility)])


# -- report ---------------------------------------------------------------


@cli.command("report")
@click.option("--scores", "scores_path", required=True, type=click.Path(exists=True))
@click.option("--skills", "skills_path", type=click.Path(exists=True),
              help="TOML config with [skills] and [metrics.*]; defaults to --config.")
@click.option("--baseline", default=None, help="Model used for gain computation.")
@click.option("--out-prefix", default=None,
              help="Write reports.csv and gains.csv with this prefix.")
@click.pass_context
def report_cmd(ctx, scores_path, skills_path, baseline, out_prefix):
    """Aggregate raw benchmark scores into skill tables, ranks, and gains."""
    cfg = load_config(skills_path) if skills_path else _require_config(ctx, "report")
    if cfg.skill_map is None:
        raise DataError("config has no [skills] section")
    with open(scores_path, encoding="utf-8") as fh:
        records = load_scores(fh)
    models = sorted({r.model for r in records})
    reports = [
        skill_scores(m, records, cfg.skill_map, cfg.metrics, cfg.primary_metrics)
        for m in models
    ]
    if baseline:
        reports = gains(reports, baseline)
    if len(models) >= 2:
        ranks = rank_models(records, cfg.skill_map, cfg.metrics, cfg.primary_metrics)
        for r in reports:
            r.ranks = ranks[r.model]
    csv_text, table_text = render(reports, include_gains=bool(baseline))
    sys.stdout.write(table_text)
    if out_prefix:
        with open(f"{out_prefix}reports.csv", "w", encoding="utf-8",
                  newline="\n") as fh:
            fh.write(csv_text)
        if baseline:
            with open(f"{out_prefix}gains.csv", "w", encoding="utf-8",
                      newline="\n") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(["model", "overall_gain"]
                                + [f"gain_{s}" for s in SKILLS])
                for r in sorted(reports, key=lambda r: r.model):
                    writer.writerow(
                        [r.model, f"{r.gain_vs_baseline:.4f}"]
                        + [
                            "" if r.skill_gains.get(s) is None
                            else f"{r.skill_gains[s]:.4f}"
                            for s in SKILLS
                        ]
                    )


# -- entry point ----------------------------------------------------------


def main(argv=None):
    """Dispatch and map exceptions to exit codes."""
    try:
        cli.main(args=argv, standalone_mode=False)
        return EXIT_OK
    except click.UsageError as exc:
        exc.show(file=sys.stderr)
        return EXIT_USAGE
    except click.Abort:
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except (CorpusKitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except click.exceptions.Exit as exc:
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
