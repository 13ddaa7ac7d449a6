"""The `forge` command line: corpus generation, injection, mining, gold set
unification, annotation serving, agreement, evaluation, and verifiability.

Exit codes: 0 success, 2 configuration error, 3 provider error, 4 validation
failure.
"""

import json
import sys
from typing import Optional

import click

from .agreement import AgreementReport
from .annotation import AnnotationError, AnnotationService
from .config import ConfigError, RunConfig, load_config
from .corpus import GoldItem, Mode, RecordStore, StoreError
from .evaluation import EvaluationError
from .fixtures import FixtureError
from .generation import GenerationError
from .injection import InjectionError
from .pipeline import (
    PipelineError,
    build_providers,
    run_pipeline,
    write_manifest,
)
from .prompts import PromptLibrary
from .providers import JudgeParseError, ProviderError
from .verifiability import classify_gold_set

EXIT_CONFIG = 2
EXIT_PROVIDER = 3
EXIT_VALIDATION = 4

_VALIDATION_ERRORS = (
    GenerationError,
    InjectionError,
    EvaluationError,
    AnnotationError,
    StoreError,
    FixtureError,
    PipelineError,
    JudgeParseError,
)


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _config(path: Optional[str], seed: Optional[int], mock: Optional[bool]) -> RunConfig:
    overrides = {}
    if seed is not None:
        overrides["seed"] = seed
    if mock is not None:
        overrides["mock_providers"] = mock
    try:
        return load_config(path, overrides)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))


def _run_stages(config, store, seed, mock, stages):
    cfg = _config(config, seed, mock)
    try:
        manifest = run_pipeline(cfg, store, stages)
    except ProviderError as exc:
        _fail(EXIT_PROVIDER, str(exc))
    except _VALIDATION_ERRORS as exc:
        _fail(EXIT_VALIDATION, str(exc))
    write_manifest(manifest, store + ".manifest.json")
    for stage in manifest.stages:
        counts = ", ".join(f"{k}={v}" for k, v in stage.counts.items())
        click.echo(f"{stage.name}: {counts}")
    return manifest


def _common(func):
    func = click.option("--config", "config_path", type=click.Path(), default=None,
                        help="Run configuration file (YAML).")(func)
    func = click.option("--store", required=True, type=click.Path(),
                        help="Record store path (JSONL).")(func)
    func = click.option("--seed", type=int, default=None, help="Override the run seed.")(func)
    func = click.option("--mock-providers/--live-providers", "mock", default=None,
                        help="Force mock or live model backends.")(func)
    return func


@click.group()
def main():
    """Synthetic contradiction corpora: generate, inject, mine, annotate,
    evaluate."""


@main.command()
@_common
def generate(config_path, store, seed, mock):
    """Generate the base document corpus."""
    _run_stages(config_path, store, seed, mock, ["generate"])


@main.command()
@_common
def inject(config_path, store, seed, mock):
    """Inject contradictions per the configured per-domain policies."""
    _run_stages(config_path, store, seed, mock, ["inject"])


@main.command()
@_common
def mine(config_path, store, seed, mock):
    """Mine candidate contradiction pairs with the hybrid detector."""
    _run_stages(config_path, store, seed, mock, ["mine"])


@main.command()
@_common
def unify(config_path, store, seed, mock):
    """Build the unified gold candidate set (detector union plus injected)."""
    _run_stages(config_path, store, seed, mock, ["unify"])


@main.command()
@_common
def run(config_path, store, seed, mock):
    """Run the full pipeline end to end."""
    _run_stages(config_path, store, seed, mock, None)


@main.group()
def annotate():
    """Annotation workflows."""


@annotate.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--store", required=True, type=click.Path())
@click.option("--token", default="", help="Shared API token; empty disables auth.")
@click.option("--static-dir", type=click.Path(), default=None,
              help="Directory with the built annotation UI.")
@click.option("--annotator", "annotators", multiple=True,
              help="Pre-registered annotator id (repeatable).")
def serve(port, host, store, token, static_dir, annotators):
    """Serve the annotation API (and UI, when built) over HTTP."""
    import uvicorn

    from .service import app_from_store

    try:
        app = app_from_store(store, token=token, static_dir=static_dir,
                             annotators=list(annotators))
    except StoreError as exc:
        _fail(EXIT_VALIDATION, str(exc))
    uvicorn.run(app, host=host, port=port)


def _service_from_store(store_path: str) -> AnnotationService:
    store = RecordStore(store_path)
    items = store.load_kind(GoldItem)
    return AnnotationService(items, store=store)


def _echo_report(report: AgreementReport) -> None:
    def fmt(value):
        return "undefined" if value is None else f"{value:.4f}"

    click.echo(f"items: {report.n_items}  annotators: {report.n_annotators}")
    click.echo(f"percent agreement: {fmt(report.percent_agreement)}")
    click.echo(f"cohen kappa:       {fmt(report.cohen_kappa)}")
    click.echo(f"krippendorff alpha: {fmt(report.kripp_alpha)}")
    for metric, reason in report.reasons.items():
        click.echo(f"  ({metric} undefined: {reason})")


@main.command()
@click.option("--store", required=True, type=click.Path())
@click.option("--mode", type=click.Choice(["self", "pairwise"]), default=None)
def iaa(store, mode):
    """Inter-annotator agreement over collected pair labels."""
    try:
        service = _service_from_store(store)
        report = service.iaa(Mode(mode) if mode else None)
    except StoreError as exc:
        _fail(EXIT_VALIDATION, str(exc))
    _echo_report(report)


@main.command()
@_common
def evaluate(config_path, store, seed, mock):
    """Score the detectors against the consolidated human labels."""
    manifest = _run_stages(config_path, store, seed, mock, ["evaluate"])
    reports = manifest.results.get("evaluation", [])
    if reports:
        click.echo(json.dumps(reports, indent=2, sort_keys=True))


@main.command()
@_common
def verifiability(config_path, store, seed, mock):
    """Classify confirmed contradictions by retrieval verifiability."""
    cfg = _config(config_path, seed, mock)
    try:
        service = _service_from_store(store)
        gold = [g for g in service.export_gold() if g.human_label == 1]
        prompts = PromptLibrary(cfg.generation.get("prompt_overrides") or None)
        bundle = build_providers(cfg, prompts)
        results = classify_gold_set(gold, bundle.chat, prompts)
    except ProviderError as exc:
        _fail(EXIT_PROVIDER, str(exc))
    except _VALIDATION_ERRORS as exc:
        _fail(EXIT_VALIDATION, str(exc))
    click.echo(json.dumps(results, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
