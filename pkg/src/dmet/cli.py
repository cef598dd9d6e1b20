"""Command-line interface.

All machine-readable output is canonical JSON (sorted keys, compact), and
the same payload builders back the HTTP service, so the two surfaces agree
byte for byte. The store root comes from the DMET_STORE environment
variable, defaulting to ./dmet-store.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import calibration as calib
from .canonical import canonical_json, parse_timestamp
from .exports import ExportKind, UnknownSelector, export_plot_data
from .pipeline import classify_and_explain, profile_payload
from .policy import default_policy, load_policy
from .scoring import default_model, score_corpus
from .store import CorpusStore, store_root_from_env
from .taxonomy import Level, LexiconError, load_lexicon, validate_lexicon
from .temporal import build_series, series_to_csv


def _store() -> CorpusStore:
    return CorpusStore(store_root_from_env())


def _context(store: CorpusStore):
    lex = store.active_lexicon()
    model = store.active_model() or default_model()
    policy = store.active_policy() or default_policy()
    return lex, model, policy


@click.group()
def main() -> None:
    """Continuum-based classification of actors and content."""


@main.group()
def lexicon() -> None:
    """Lexicon tools."""


@lexicon.command("validate")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
def lexicon_validate(file: str) -> None:
    """Validate a lexicon document; non-zero exit on any problem."""
    try:
        lex = load_lexicon(Path(file))
    except LexiconError as exc:
        click.echo(f"INVALID: {exc}")
        sys.exit(1)
    problems = validate_lexicon(lex)
    if problems:
        for p in problems:
            click.echo(str(p))
        sys.exit(1)
    click.echo(f"OK: {len(lex.cues)} cues, version {lex.version}")


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
def ingest(file: str) -> None:
    """Ingest a JSON-lines file of content items (idempotent by id)."""
    report = _store().ingest(file)
    click.echo(canonical_json(report.to_dict()))
    if report.rejected:
        sys.exit(1)


@main.command()
@click.option("--actor", required=True)
@click.option("--from", "from_ts", required=True)
@click.option("--to", "to_ts", required=True)
def scan(actor: str, from_ts: str, to_ts: str) -> None:
    """Scan an actor's items in a time range; one JSON line per item."""
    store = _store()
    lex, model, policy = _context(store)
    items = store.items(actor, parse_timestamp(from_ts), parse_timestamp(to_ts))
    for item, score in score_corpus(items, lex, model, policy):
        click.echo(
            canonical_json(
                {
                    "content_id": item.id,
                    "fired_cues": [fc.to_dict() for fc in score.fired_cues],
                    "level_evidence": list(score.level_evidence),
                    "requires_human_review": score.requires_human_review,
                }
            )
        )


@main.command()
@click.option("--actor", required=True)
@click.option("--window-days", type=int, default=None)
def profile(actor: str, window_days: int) -> None:
    """Aggregate and classify an actor; prints the profile document."""
    store = _store()
    lex, model, policy = _context(store)
    prof, outcome = classify_and_explain(
        actor, store.items(actor), lex, model, policy, window_days=window_days
    )
    click.echo(canonical_json(profile_payload(prof, outcome)))


@main.command()
@click.option("--actor", required=True)
@click.option("--cadence-days", type=int, required=True)
def track(actor: str, cadence_days: int) -> None:
    """Windowed profile series for an actor, as CSV."""
    store = _store()
    lex, model, policy = _context(store)
    series = build_series(store.items(actor), lex, model, policy, cadence_days)
    click.echo(series_to_csv(series), nl=False)


@main.command()
@click.option("--labels", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--boundary", type=click.Choice(["1", "2", "3"]), required=True)
@click.option("--l2", type=float, default=0.0)
def calibrate(labels: str, boundary: str, l2: float) -> None:
    """Fit cue weights and level cut-offs from a labeled CSV."""
    examples = calib.read_labeled_csv(labels)
    result = calib.calibrate(examples, Level(int(boundary)), l2=l2)
    store = _store()
    store.save_model(result.model)
    click.echo(
        canonical_json(
            {
                "model": result.model.to_dict(),
                "converged": result.fit.converged,
                "iterations": result.fit.iterations,
                "final_loss": result.fit.loss_history[-1],
                "aucs": list(result.threshold_calibration.aucs),
                "raw_thresholds": list(result.threshold_calibration.raw_thresholds),
                "diagnostics": list(result.diagnostics),
            }
        )
    )


@main.command()
@click.option("--actor", required=True)
@click.option("--policy", "policy_file", required=True, type=click.Path(exists=True))
def classify(actor: str, policy_file: str) -> None:
    """Classify an actor under an explicit policy file."""
    store = _store()
    lex = store.active_lexicon()
    model = store.active_model() or default_model()
    policy = load_policy(Path(policy_file))
    _, outcome = classify_and_explain(actor, store.items(actor), lex, model, policy)
    store.append_audit(outcome.audit)
    click.echo(
        canonical_json(
            {
                "actor_id": actor,
                "computed_level": int(outcome.computed_level),
                "computed_level_name": outcome.computed_level.label,
                "effective_level": int(outcome.effective_level),
                "effective_level_name": outcome.effective_level.label,
                "confidence": outcome.confidence,
                "dehumanization_override": outcome.dehumanization_override,
                "policy_version": policy.version,
            }
        )
    )


@main.command()
@click.option("--actor", required=True)
def explain(actor: str) -> None:
    """Print (and append to the audit log) the full audit record."""
    store = _store()
    lex, model, policy = _context(store)
    _, outcome = classify_and_explain(actor, store.items(actor), lex, model, policy)
    store.append_audit(outcome.audit)
    click.echo(outcome.audit.canonical())


@main.command()
@click.option(
    "--kind",
    type=click.Choice([k.value for k in ExportKind]),
    required=True,
)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--actor", default=None)
@click.option("--region", "regions", multiple=True)
@click.option("--cadence-days", type=int, default=7)
def export(
    kind: str, out: str, actor: str, regions: tuple[str, ...], cadence_days: int
) -> None:
    """Write plot-ready CSV for the selected chart kind."""
    store = _store()
    lex, model, policy = _context(store)
    try:
        doc = export_plot_data(
            store,
            ExportKind(kind),
            lex,
            model,
            policy,
            actor_id=actor,
            regions=list(regions) or None,
            cadence_days=cadence_days,
        )
    except UnknownSelector as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    Path(out).write_text(doc, encoding="utf-8")
    click.echo(f"wrote {out}")


@main.command()
@click.option("--bind", default="127.0.0.1:8234")
def serve(bind: str) -> None:
    """Run the HTTP API for the review console."""
    import uvicorn

    from .service import create_app

    host, _, port = bind.partition(":")
    app = create_app(_store())
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8234))


if __name__ == "__main__":
    main()
