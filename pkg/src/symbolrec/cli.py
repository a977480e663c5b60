"""Command-line interface: build, define, rank, metrics, project, synth,
validate, serve."""

from __future__ import annotations

import json
import os
import sys

import click
import numpy as np

from .errors import SymbolRecError
from .history import DEFAULT_SMOOTHING, ingest, read_event_log
from .lexicon import Lexicon
from .metrics import metrics_report, validate_definitions
from .projection import embed, scatter_svg, vectorize
from .ranker import DEFAULT_ALPHA, rank
from .schema import SurveySchema
from .snapshot import ModelSnapshot
from .synthgen import SynthConfig, generate, write_corpus


def _fail(err: SymbolRecError) -> None:
    click.echo(
        json.dumps({"error_code": err.code, "message": str(err)}), err=True
    )
    sys.exit(1)


def _load_model(path) -> ModelSnapshot:
    return ModelSnapshot.load(path)


@click.group()
def main():
    """Survey recommender with a meta-symbol lexicon."""


@main.command()
@click.option("--events", "events_path", required=True, type=click.Path(exists=True))
@click.option("--schema", "schema_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--smoothing", default=DEFAULT_SMOOTHING, show_default=True)
def build(events_path, schema_path, out_path, smoothing):
    """Ingest an event log and write a model snapshot."""
    try:
        schema = SurveySchema.load(schema_path)
        store = ingest(read_event_log(events_path, schema), schema)
        ModelSnapshot(store=store, smoothing=smoothing).save(out_path)
    except SymbolRecError as e:
        _fail(e)
    click.echo(
        json.dumps(
            {
                "symbols": len(store.symbol_rows),
                "event_users": store.event_user_count,
                "survey_takers": store.total_survey_takers,
            }
        )
    )


@main.command()
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--lexicon", "lexicon_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", default=None, type=click.Path())
def define(model_path, lexicon_path, out_path):
    """Attach a validated lexicon to a snapshot (all problems listed at once)."""
    try:
        snap = _load_model(model_path)
        lex = Lexicon.load(lexicon_path, base_symbols=set(snap.store.symbol_rows))
        snap.lexicon = lex
        snap.save(out_path or model_path)
    except SymbolRecError as e:
        _fail(e)
    click.echo(json.dumps({"meta_symbols": len(lex), "categories": sorted(lex.categories)}))


@main.command("rank")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--answers", "answers_path", required=True, type=click.Path(exists=True))
@click.option("--alpha", default=None, type=float)
@click.option("--focus", default=None, help="comma-separated category list")
@click.option("--limit", default=None, type=int)
@click.option("--smoothing", default=None, type=float)
def rank_cmd(model_path, answers_path, alpha, focus, limit, smoothing):
    """Rank all symbols and meta-symbols for one answer vector."""
    try:
        snap = _load_model(model_path)
        with open(answers_path) as f:
            answers = json.load(f)
        ranked = rank(
            snap.store,
            snap.lexicon,
            answers,
            alpha=snap.alpha if alpha is None else alpha,
            focus=set(focus.split(",")) if focus else None,
            limit=limit,
            smoothing=snap.smoothing if smoothing is None else smoothing,
        )
    except SymbolRecError as e:
        _fail(e)
    for e in ranked.entries:
        click.echo(f"{e.id}\t{e.category}\t{e.log_score:.9f}")


@main.command("metrics")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--category", default=None)
@click.option("--fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
def metrics_cmd(model_path, category, fmt):
    """Per-symbol meaningfulness metrics and per-category averages."""
    try:
        snap = _load_model(model_path)
        report = metrics_report(snap.store, snap.lexicon)
    except SymbolRecError as e:
        _fail(e)
    if category:
        report.symbols[:] = [m for m in report.symbols if m.category == category]
        report.categories[:] = [c for c in report.categories if c.category == category]
    if fmt == "json":
        click.echo(json.dumps(report.to_dict(), indent=2))
    else:
        click.echo(report.to_csv(), nl=False)
        click.echo("# category averages (most abstract first)")
        for c in report.categories:
            click.echo(
                f"# {c.category}: relative_signal={c.mean_relative_signal:.4g} "
                f"snr={c.mean_snr:.4g} (upper bound) history={c.mean_history:.4g} n={c.count}"
            )


@main.command()
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--dim", default=2, type=int, show_default=True)
@click.option("--users", "users_path", default=None, type=click.Path(exists=True))
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--svg", "svg_path", default=None, type=click.Path())
@click.option("--inverse/--no-inverse", default=False, show_default=True)
def project(model_path, dim, users_path, seed, out_path, svg_path, inverse):
    """Distance-preserving projection of the knowledge space."""
    try:
        snap = _load_model(model_path)
        users = None
        if users_path:
            with open(users_path) as f:
                users = json.load(f)
        cloud = vectorize(
            snap.store,
            snap.lexicon,
            users=users,
            smoothing=snap.smoothing,
            include_inverse=inverse,
        )
        emb = embed(cloud, dim=int(dim), seed=seed)
        emb.save(out_path)
        if svg_path:
            scatter_svg(emb, svg_path)
    except SymbolRecError as e:
        _fail(e)
    click.echo(json.dumps({"dim": emb.dim, "stress": emb.stress, "points": len(emb.ids)}))


@main.command()
@click.option("--config", "config_path", default=None, type=click.Path(exists=True))
@click.option("--seed", default=None, type=int)
@click.option("--out-dir", required=True, type=click.Path())
def synth(config_path, seed, out_dir):
    """Generate a seeded synthetic corpus with ground-truth archetypes."""
    try:
        cfg = SynthConfig.load(config_path) if config_path else SynthConfig()
        if seed is not None:
            cfg = SynthConfig(**(cfg.to_dict() | {"seed": seed}))
        corpus = generate(cfg)
        write_corpus(corpus, out_dir)
    except SymbolRecError as e:
        _fail(e)
    click.echo(
        json.dumps(
            {
                "users": cfg.users,
                "symbols": cfg.base_symbol_count,
                "out_dir": os.path.abspath(out_dir),
            }
        )
    )


@main.command()
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--native", "native_path", required=True, type=click.Path(exists=True))
@click.option("--defined", "defined_path", required=True, type=click.Path(exists=True))
@click.option("--users", "users_path", required=True, type=click.Path(exists=True))
@click.option("--alpha", default=DEFAULT_ALPHA, show_default=True)
@click.option("--min-members", default=4, show_default=True)
def validate(model_path, native_path, defined_path, users_path, alpha, min_members):
    """Mean Spearman correlation between native items and defined counterparts."""
    try:
        snap = _load_model(model_path)
        with open(native_path) as f:
            native = json.load(f)
        with open(defined_path) as f:
            defined = json.load(f)
        with open(users_path) as f:
            users = json.load(f)
        result = validate_definitions(
            snap.store,
            snap.lexicon,
            list(zip(native, defined)),
            users,
            alpha=alpha,
            smoothing=snap.smoothing,
            min_members=min_members,
        )
    except SymbolRecError as e:
        _fail(e)
    click.echo(
        json.dumps(
            {
                "mean_spearman": result.mean,
                "users": len(result.per_user),
                "pairs_used": len(result.pairs_used),
            }
        )
    )


@main.command()
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--port", default=int(os.environ.get("SYMBOLREC_PORT", "8000")), show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--users", "users_path", default=None, type=click.Path(exists=True),
              help="answer vectors embedded as reference points")
def serve(model_path, port, host, seed, users_path):
    """Read-only HTTP service over a snapshot."""
    import uvicorn

    from .server import create_app

    try:
        snap = _load_model(model_path)
        users = None
        if users_path:
            with open(users_path) as f:
                users = json.load(f)
    except SymbolRecError as e:
        _fail(e)
    uvicorn.run(create_app(snap, seed=seed, users=users), host=host, port=port)


if __name__ == "__main__":
    main()
