"""Operational command line: corpus -> candidates -> evidence -> snapshot -> API."""

from __future__ import annotations

import json
import shutil
import sys
from pathlib import Path

import click

from . import _kernels
from .catalog import build_mention_dictionary
from .classifier.baseline import BaselineConfig, BaselineModel, train_baseline
from .classifier.convert import convert_dataset
from .classifier.instances import (
    load_labeled_instances,
    positive_rate,
    split_counts,
    write_labeled_instances,
)
from .classifier.metrics import evaluate_detection, format_detection_report
from .config import Config
from .corpus import load_corpus_index, stream_corpus
from .pipeline import extract_candidates, read_candidates, write_candidates
from .store import (
    Rejection,
    admit_evidence,
    build_store,
    export_snapshot,
    find_blocklisted,
    load_snapshot,
    read_evidence_file,
    write_evidence_file,
)


@click.group()
def main():
    """Supplement-interaction evidence engine."""


def _load_config(path) -> Config:
    try:
        return Config.load(path)
    except (OSError, ValueError) as exc:
        raise click.ClickException(f"cannot load config {path}: {exc}") from exc


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
def ingest(config_path, corpus_path, out_path):
    """Extract candidate pairs from a corpus file."""
    cfg = _load_config(config_path)
    catalog = cfg.load_catalog()
    dictionary = build_mention_dictionary(catalog)
    stream = stream_corpus(corpus_path)
    with open(out_path, "w", encoding="utf-8") as fh:
        n = write_candidates(extract_candidates(stream, dictionary, catalog), fh)
    click.echo(
        f"candidates: {n} (papers skipped: {stream.skipped.count}, "
        f"kernel backend: {_kernels.BACKEND})"
    )


@main.command()
@click.option("--dataset", type=click.Choice(["ddi2013", "nlm-dailymed"]), required=True)
@click.option("--train", "train_paths", multiple=True, required=True, type=click.Path(exists=True))
@click.option("--test", "test_paths", multiple=True, required=True, type=click.Path(exists=True))
@click.option("--dev-size", default=0, show_default=True)
@click.option("--seed", default=13, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
def convert(dataset, train_paths, test_paths, dev_size, seed, out_path):
    """Convert an annotated interaction XML corpus to normalized instances."""
    instances, stats = convert_dataset(train_paths, test_paths, dataset, dev_size, seed)
    write_labeled_instances(instances, out_path)
    counts = split_counts(instances)
    click.echo(
        f"instances: {len(instances)} "
        f"(train {counts['train']} / dev {counts['dev']} / test {counts['test']}, "
        f"positive {positive_rate(instances):.1%}, "
        f"capped sentences {stats.capped_sentences}, skipped pairs {stats.skipped_pairs})"
    )


@main.command()
@click.option("--instances", "instances_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--seed", default=13, show_default=True)
@click.option("--learning-rate", default=0.2, show_default=True)
@click.option("--max-epochs", default=30, show_default=True)
@click.option("--patience", default=5, show_default=True)
def train(instances_path, out_path, seed, learning_rate, max_epochs, patience):
    """Train the baseline scorer on normalized instances (train + dev splits)."""
    instances = load_labeled_instances(instances_path)
    train_set = [i for i in instances if i.split == "train"]
    dev_set = [i for i in instances if i.split == "dev"]
    config = BaselineConfig(
        seed=seed, learning_rate=learning_rate, max_epochs=max_epochs, patience=patience
    )
    model = train_baseline(train_set, dev_set, config)
    model.save(out_path)
    dev_part = f"{model.dev_f1:.3f}" if model.dev_f1 is not None else "n/a"
    click.echo(
        f"trained on {len(train_set)} instances ({model.epochs_run} epochs, "
        f"dev F1 {dev_part}, backend {_kernels.BACKEND})"
    )


def _scorer_from_options(config_path, model_path):
    if model_path:
        return BaselineModel.load(model_path)
    if config_path:
        return _load_config(config_path).make_scorer()
    raise click.ClickException("pass --model or --config to select a scorer")


@main.command("eval")
@click.option("--instances", "instances_path", required=True, type=click.Path(exists=True))
@click.option("--model", "model_path", type=click.Path(exists=True))
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--split", default="test", show_default=True)
@click.option("--tau", default=0.5, show_default=True)
@click.option("--report", "report_path", type=click.Path())
def eval_cmd(instances_path, model_path, config_path, split, tau, report_path):
    """Detection metrics on one split, per source and overall."""
    instances = [
        i for i in load_labeled_instances(instances_path) if i.split == split
    ]
    if not instances:
        raise click.ClickException(f"no instances with split {split!r}")
    scorer = _scorer_from_options(config_path, model_path)
    rows = []
    for source in sorted({i.source for i in instances}):
        subset = [i for i in instances if i.source == source]
        rows.append((source or "(unlabeled)", evaluate_detection(scorer, subset, tau)))
    rows.append(("All", evaluate_detection(scorer, instances, tau)))
    report = format_detection_report(rows)
    click.echo(report, nl=False)
    if report_path:
        Path(report_path).write_text(report, encoding="utf-8")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--candidates", "candidates_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
def classify(config_path, candidates_path, out_path):
    """Score candidates and admit evidence past the threshold and blocklist."""
    cfg = _load_config(config_path)
    catalog = cfg.load_catalog()
    blocklist = cfg.load_blocklist()
    scorer = cfg.make_scorer()

    candidates = list(read_candidates(candidates_path))
    texts = [c["masked_text"] for c in candidates]
    scores = (
        scorer.score_texts(texts) if hasattr(scorer, "score_texts") else scorer(texts)
    )
    admitted = []
    rejected: dict[str, int] = {}
    for cand, score in zip(candidates, scores):
        result = admit_evidence(cand, float(score), cfg.tau, blocklist, catalog)
        if isinstance(result, Rejection):
            rejected[result.reason] = rejected.get(result.reason, 0) + 1
        else:
            admitted.append(result)
    if hasattr(scorer, "close"):
        scorer.close()
    with open(out_path, "w", encoding="utf-8") as fh:
        n = write_evidence_file(admitted, fh)
    reasons = ", ".join(f"{k}: {v}" for k, v in sorted(rejected.items())) or "none"
    click.echo(f"admitted: {n} / {len(candidates)} (rejections: {reasons})")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--evidence", "evidence_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
def build(config_path, corpus_path, evidence_path, out_path):
    """Aggregate admitted evidence into a snapshot directory."""
    cfg = _load_config(config_path)
    catalog = cfg.load_catalog()
    papers, skipped = load_corpus_index(corpus_path)
    store = build_store(read_evidence_file(evidence_path), papers, catalog, cfg.tau)
    bad = find_blocklisted(store, cfg.load_blocklist())
    if bad:
        raise click.ClickException(f"blocklisted spans reached the store: {bad[:5]}")
    manifest = export_snapshot(store, out_path)
    click.echo(
        f"snapshot: {manifest['counts']['interactions']} interactions, "
        f"{manifest['counts']['evidence']} evidence sentences "
        f"(corpus lines skipped: {skipped.count})"
    )


@main.command()
@click.option(
    "--snapshot", "snapshot_path", envvar="SUPPMINE_SNAPSHOT",
    required=True, type=click.Path(exists=True),
)
@click.option("--bind", envvar="SUPPMINE_BIND", default="127.0.0.1:8000", show_default=True)
def serve(snapshot_path, bind):
    """Serve a snapshot over HTTP."""
    import uvicorn

    from .service import create_app

    store = load_snapshot(snapshot_path)
    host, _, port = bind.partition(":")
    app = create_app(store)
    click.echo(f"serving {snapshot_path} on http://{bind}", err=True)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000), log_level="warning")


@main.command()
@click.option("--snapshot", "snapshot_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
def export(snapshot_path, out_path):
    """Verify a snapshot and copy it (manifest checksums re-checked)."""
    load_snapshot(snapshot_path)
    src, dst = Path(snapshot_path), Path(out_path)
    dst.mkdir(parents=True, exist_ok=True)
    for name in ("manifest.json", "agents.jsonl", "interactions.jsonl"):
        shutil.copyfile(src / name, dst / name)
    load_snapshot(dst)
    click.echo(f"exported snapshot to {dst}")


if __name__ == "__main__":
    sys.exit(main())
