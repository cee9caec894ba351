"""cite-scope: batch front door for summarization, training and evaluation.

Config precedence is CLI flags > config file > built-in defaults. The config
file is flat ``key = value`` lines named by RunConfig fields (plus ``corpus``
and ``output``), pointed at by --config or the CITESCOPE_CONFIG env var.

Exit codes: 0 success, 1 usage error, 2 data error, 3 runtime error.
"""

from __future__ import annotations

import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import fields

import click

from .corpus import (
    bundled_corpus_path,
    corpus_stats,
    load_corpus,
)
from .errors import (
    CiteScopeError,
    CorpusIoError,
    DegenerateData,
    EmptyInput,
    MalformedCorpus,
)
from .grouping import FacetClassifier
from .pipeline import (
    ALL_METHODS,
    PIPELINE_METHODS,
    RunConfig,
    prepare_topic,
    summarize_topic,
    train_from_topics,
)
from .rouge import METRICS, evaluate_summary
from .textproc import split_sentences

_CONFIG_KEYS = {f.name for f in fields(RunConfig)} | {"corpus", "output", "workers"}


def _read_config_file(path: str) -> dict:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise click.UsageError(f"{path}:{lineno}: expected key = value")
            key = key.strip()
            if key not in _CONFIG_KEYS:
                raise click.UsageError(f"{path}:{lineno}: unknown config key '{key}'")
            values[key] = value.strip()
    return values


def _merged_config(cli_values: dict, config_path: str | None) -> dict:
    """flags > config file > defaults; only keys explicitly given survive."""
    path = config_path or os.environ.get("CITESCOPE_CONFIG")
    merged = _read_config_file(path) if path else {}
    merged.update({k: v for k, v in cli_values.items() if v is not None})
    return merged


def _run_config(values: dict) -> RunConfig:
    kwargs = {}
    for f in fields(RunConfig):
        if f.name not in values:
            continue
        raw = values[f.name]
        if f.type in ("int", int):
            raw = int(raw)
        elif f.type in ("float", float):
            raw = float(raw)
        kwargs[f.name] = raw
    try:
        return RunConfig(**kwargs)
    except ValueError as exc:
        raise click.UsageError(str(exc))


def _resolve_corpus(values: dict) -> str:
    corpus = values.get("corpus")
    return corpus if corpus else bundled_corpus_path()


@click.group()
def cli():
    """Citation-context summarization of scientific articles."""


_config_opt = click.option("--config", "config_path", default=None,
                           help="Config file (flat key = value).")
_corpus_opt = click.option("--corpus", default=None,
                           help="Corpus manifest path (default: bundled corpus).")
_seed_opt = click.option("--seed", default=None, type=int, help="Random seed.")


@cli.command()
@_corpus_opt
@_config_opt
def ingest(corpus, config_path):
    """Load and validate a corpus, reporting its shape."""
    values = _merged_config({"corpus": corpus}, config_path)
    topics = load_corpus(_resolve_corpus(values))
    click.echo(f"loaded {len(topics)} topics")
    for t in topics:
        click.echo(
            f"  {t.id}: {len(t.citing_articles)} citing articles, "
            f"{len(t.citations)} citations, {len(t.gold_summaries)} gold summaries"
        )


@cli.command()
@_corpus_opt
@_config_opt
def stats(corpus, config_path):
    """Dataset statistics as JSON."""
    values = _merged_config({"corpus": corpus}, config_path)
    topics = load_corpus(_resolve_corpus(values))
    click.echo(json.dumps(corpus_stats(topics).to_dict(), indent=2, sort_keys=True))


def _summarize_corpus(topics, config: RunConfig, classifier, workers: int):
    """One summary per topic, computed on a bounded worker pool."""

    def run(topic):
        index = prepare_topic(topic)
        return topic.id, summarize_topic(topic, config, classifier=classifier, index=index)

    if workers <= 1:
        return [run(t) for t in topics]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, topics))


@cli.command()
@_corpus_opt
@_config_opt
@_seed_opt
@click.option("--method", default=None, type=click.Choice(ALL_METHODS))
@click.option("--budget", "budget_words", default=None, type=int)
@click.option("--strategy", default=None,
              type=click.Choice(["full_text", "keyword_idf", "noun_phrase", "concept_expanded"]))
@click.option("--model", default=None, help="Facet model JSON (discourse methods).")
@click.option("--out", "output", default=None, help="Output directory.")
@click.option("--workers", default=None, type=int)
def summarize(config_path, model, **cli_values):
    """Summarize every topic of the corpus with one method."""
    values = _merged_config(cli_values, config_path)
    config = _run_config(values)
    topics = load_corpus(_resolve_corpus(values))

    classifier = None
    if config.method in ("context-disc-it", "context-disc-div"):
        if not model:
            raise click.UsageError(
                f"method {config.method} requires --model (a trained facet model)"
            )
        with open(model, encoding="utf-8") as fh:
            classifier = FacetClassifier.from_json(fh.read())

    out_dir = values.get("output") or "summaries"
    os.makedirs(out_dir, exist_ok=True)
    workers = int(values.get("workers") or (os.cpu_count() or 1))
    for topic_id, summary in _summarize_corpus(topics, config, classifier, workers):
        with open(os.path.join(out_dir, f"{topic_id}.txt"), "w", encoding="utf-8") as fh:
            fh.write(summary.text + ("\n" if summary.sentences else ""))
        sidecar = {
            "topic": topic_id,
            "method": summary.method,
            "word_count": summary.word_count,
            "sentences": list(summary.provenance),
        }
        with open(
            os.path.join(out_dir, f"{topic_id}.provenance.json"), "w", encoding="utf-8"
        ) as fh:
            json.dump(sidecar, fh, indent=2, sort_keys=True)
        click.echo(f"{topic_id}: {summary.word_count} words -> {out_dir}/{topic_id}.txt")


@cli.command("train-facets")
@_corpus_opt
@_config_opt
@_seed_opt
@click.option("--out", "output", default=None, help="Model output path.")
@click.option("--include-spans", is_flag=True, default=False,
              help="Also train on retrieved reference spans.")
def train_facets(config_path, include_spans, **cli_values):
    """Train the discourse facet classifier and report held-out accuracy."""
    values = _merged_config(cli_values, config_path)
    topics = load_corpus(_resolve_corpus(values))
    seed = int(values.get("seed", 42))
    try:
        classifier, accuracy = train_from_topics(
            topics, seed=seed, include_spans=include_spans
        )
    except DegenerateData as exc:
        raise click.ClickException(str(exc))
    out_path = values.get("output") or "facet_model.json"
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(classifier.to_json())
    click.echo(f"held-out accuracy: {accuracy:.3f}")
    click.echo(f"model written to {out_path}")


def _score_rows(topic, candidate_sentences, method, budget):
    truncate = 100 if budget <= 100 else None
    scores = evaluate_summary(
        candidate_sentences,
        [g.text for g in topic.gold_summaries],
        truncate_gold_to=truncate,
    )
    return [
        {
            "topic": topic.id,
            "method": method,
            "metric": metric,
            "recall": scores[metric].recall,
            "precision": scores[metric].precision,
            "f1": scores[metric].f1,
        }
        for metric in METRICS
    ]


def _oracle_rows(topic, budget):
    """Leave-one-out gold-vs-gold scores, averaged per metric."""
    truncate = 100 if budget <= 100 else None
    acc = {m: [0.0, 0.0, 0.0] for m in METRICS}
    golds = topic.gold_summaries
    for i, gold in enumerate(golds):
        text = gold.text
        if truncate:
            text = " ".join(text.split()[:truncate])
        cand = [s.text for s in split_sentences(text)]
        others = [g.text for j, g in enumerate(golds) if j != i]
        scores = evaluate_summary(cand, others, truncate_gold_to=truncate)
        for m in METRICS:
            acc[m][0] += scores[m].recall
            acc[m][1] += scores[m].precision
            acc[m][2] += scores[m].f1
    n = len(golds)
    return [
        {
            "topic": topic.id,
            "method": "oracle",
            "metric": m,
            "recall": acc[m][0] / n,
            "precision": acc[m][1] / n,
            "f1": acc[m][2] / n,
        }
        for m in METRICS
    ]


def _write_report(rows, out_dir, stem):
    os.makedirs(out_dir, exist_ok=True)
    json_path = os.path.join(out_dir, f"{stem}.json")
    csv_path = os.path.join(out_dir, f"{stem}.csv")
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(rows, fh, indent=2, sort_keys=True)
    columns = list(rows[0].keys()) if rows else ["topic", "method", "metric"]
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns)
        writer.writeheader()
        writer.writerows(rows)
    return json_path, csv_path


@cli.command()
@_corpus_opt
@_config_opt
@click.option("--summaries", "summaries_dir", required=True,
              help="Directory of <topic_id>.txt summaries.")
@click.option("--budget", "budget_words", default=None, type=int)
@click.option("--method", default=None, help="Method label for the report.")
@click.option("--out", "output", default=None, help="Report output directory.")
def evaluate(config_path, summaries_dir, **cli_values):
    """Score a directory of summaries against the corpus gold summaries."""
    values = _merged_config(cli_values, config_path)
    topics = load_corpus(_resolve_corpus(values))
    budget = int(values.get("budget_words", 250))
    method = values.get("method") or "summaries"

    rows = []
    for topic in topics:
        path = os.path.join(summaries_dir, f"{topic.id}.txt")
        if not os.path.exists(path):
            rows.append({"topic": topic.id, "method": method, "metric": "absent",
                         "recall": None, "precision": None, "f1": None})
            continue
        with open(path, encoding="utf-8") as fh:
            sentences = [line.rstrip("\n") for line in fh if line.strip()]
        rows.extend(_score_rows(topic, sentences, method, budget))
    out_dir = values.get("output") or summaries_dir
    json_path, csv_path = _write_report(rows, out_dir, "scores")
    click.echo(f"wrote {json_path} and {csv_path}")


def _mean_std(values):
    if not values:
        return (0.0, 0.0)
    mean = sum(values) / len(values)
    var = sum((v - mean) ** 2 for v in values) / len(values)
    return mean, math.sqrt(var)


@cli.command()
@_corpus_opt
@_config_opt
@_seed_opt
@click.option("--budgets", default="100,250", help="Comma-separated word budgets.")
@click.option("--out", "output", default=None, help="Report output directory.")
@click.option("--workers", default=None, type=int)
def compare(config_path, budgets, **cli_values):
    """Run every method plus the oracle and tabulate mean/std per metric."""
    values = _merged_config(cli_values, config_path)
    topics = load_corpus(_resolve_corpus(values))
    seed = int(values.get("seed", 42))
    out_dir = values.get("output") or "comparison"
    workers = int(values.get("workers") or (os.cpu_count() or 1))
    budget_list = [int(b) for b in budgets.split(",") if b.strip()]

    try:
        classifier, _ = train_from_topics(topics, seed=seed)
    except DegenerateData:
        classifier = None

    method_specs = [
        ("context-comm-it", {}),
        ("context-comm-div", {}),
        ("context-disc-it", {}),
        ("context-disc-div", {}),
        ("lsa", {}),
        ("lexrank", {}),
        ("mmr_0.3", {"method": "mmr", "mmr_lam": 0.3}),
        ("mmr_0.5", {"method": "mmr", "mmr_lam": 0.5}),
        ("mmr_0.7", {"method": "mmr", "mmr_lam": 0.7}),
        ("citation", {}),
    ]

    indexes = {t.id: prepare_topic(t) for t in topics}
    per_topic_rows = []
    failures = []
    for budget in budget_list:
        for label, overrides in method_specs:
            method = overrides.get("method", label)
            if method in ("context-disc-it", "context-disc-div") and classifier is None:
                failures.append({"method": label, "budget": budget,
                                 "error": "no facet annotations to train on"})
                continue
            config = RunConfig(
                method=method, budget_words=budget, seed=seed,
                mmr_lam=overrides.get("mmr_lam", 0.5),
            )

            def run(topic):
                return topic.id, summarize_topic(
                    topic, config, classifier=classifier, index=indexes[topic.id]
                )

            try:
                if workers <= 1:
                    results = [run(t) for t in topics]
                else:
                    with ThreadPoolExecutor(max_workers=workers) as pool:
                        results = list(pool.map(run, topics))
                for topic, (_, summary) in zip(topics, results):
                    per_topic_rows.extend(
                        [
                            dict(row, budget=budget)
                            for row in _score_rows(
                                topic, [s for _, s in summary.sentences], label, budget
                            )
                        ]
                    )
            except CiteScopeError as exc:
                failures.append({"method": label, "budget": budget, "error": str(exc)})
        for topic in topics:
            per_topic_rows.extend(
                dict(row, budget=budget) for row in _oracle_rows(topic, budget)
            )

    # aggregate: one row per (method, budget, metric)
    table = []
    labels = [label for label, _ in method_specs] + ["oracle"]
    for budget in budget_list:
        for label in labels:
            for metric in METRICS:
                rows = [
                    r for r in per_topic_rows
                    if r["method"] == label and r["budget"] == budget
                    and r["metric"] == metric
                ]
                if not rows:
                    continue
                entry = {"method": label, "budget": budget, "metric": metric}
                for stat in ("recall", "precision", "f1"):
                    mean, std = _mean_std([r[stat] for r in rows])
                    entry[f"{stat}_mean"] = mean
                    entry[f"{stat}_std"] = std
                table.append(entry)

    os.makedirs(out_dir, exist_ok=True)
    _write_report(per_topic_rows, out_dir, "per_topic")
    json_path, csv_path = _write_report(table, out_dir, "comparison")
    if failures:
        with open(os.path.join(out_dir, "failures.json"), "w", encoding="utf-8") as fh:
            json.dump(failures, fh, indent=2, sort_keys=True)

    for entry in table:
        if entry["metric"] != "rougeL":
            continue
        click.echo(
            f"{entry['method']:<18} budget={entry['budget']:<4} "
            f"ROUGE-L F {entry['f1_mean']:.3f} +/- {entry['f1_std']:.3f}"
        )
    click.echo(f"wrote {json_path} and {csv_path}")
    if failures:
        click.echo(f"{len(failures)} method runs failed; see failures.json")


def main(argv=None):
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return 1
    except click.ClickException as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 3
    except click.Abort:
        return 1
    except (MalformedCorpus, CorpusIoError, EmptyInput) as exc:
        click.echo(f"data error: {exc}", err=True)
        return 2
    except CiteScopeError as exc:
        click.echo(f"runtime error: {exc}", err=True)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
