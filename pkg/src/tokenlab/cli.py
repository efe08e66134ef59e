"""Command-line surface: generate, classify, report, verify-tokens, serve."""
from __future__ import annotations

import os

import click

from .config import ExperimentConfig, default_config, load_config
from .dataset import DatasetError, read_records_csv, write_records_csv
from .experiment import (
    DistinctnessError,
    classify_records,
    generate_records,
    run_experiment,
)
from .report import (
    render_crosstable_text,
    render_distinctness_text,
    render_summary_text,
)
from .tokens import build_token_set, check_distinctness

CONFIG_ENV = "TOKENLAB_CONFIG"


def _load(config_path: str | None, seed: int | None, out: str | None) -> ExperimentConfig:
    from dataclasses import replace

    path = config_path or os.environ.get(CONFIG_ENV)
    if path:
        if not os.path.exists(path):
            raise click.ClickException(f"config file not found: {path}")
        try:
            config = load_config(path)
        except (ValueError, OSError) as exc:
            raise click.ClickException(f"failed to load config {path}: {exc}") from exc
    else:
        config = default_config()
    if seed is not None:
        config = replace(config, master_seed=seed)
    if out is not None:
        config = replace(config, out_dir=out)
    return config.resolved()


def _common(fn):
    fn = click.option(
        "--config",
        "config_path",
        type=click.Path(),
        default=None,
        help=f"JSON config path (falls back to ${CONFIG_ENV}, then built-in defaults).",
    )(fn)
    fn = click.option("--seed", type=int, default=None, help="Override the master seed.")(fn)
    fn = click.option("--out", type=click.Path(), default=None, help="Override the output directory.")(fn)
    return fn


@click.group()
def main() -> None:
    """Artificial market sessions under information-token conditions."""


@main.command()
@_common
@click.option("--workers", type=int, default=1, show_default=True, help="Cohort worker processes.")
def generate(config_path, seed, out, workers) -> None:
    """Run every cohort and write the dataset CSV."""
    config = _load(config_path, seed, out)
    records = generate_records(config, workers=workers)
    path = os.path.join(config.out_dir, "dataset.csv")
    write_records_csv(path, records)
    click.echo(f"wrote {len(records)} records to {path}")


@main.command()
@_common
@click.option(
    "--dataset",
    "dataset_path",
    type=click.Path(),
    default=None,
    help="Dataset CSV to classify (default: <out_dir>/dataset.csv).",
)
@click.option("--table/--no-table", default=False, help="Also print the full cross-table.")
def classify(config_path, seed, out, dataset_path, table) -> None:
    """Split a dataset, classify the test half, print success summaries."""
    config = _load(config_path, seed, out)
    path = dataset_path or os.path.join(config.out_dir, "dataset.csv")
    if not os.path.exists(path):
        raise click.ClickException(f"dataset file not found: {path}")
    try:
        records = read_records_csv(path)
    except DatasetError as exc:
        raise click.ClickException(str(exc)) from exc
    try:
        result = classify_records(records, config)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    if table:
        click.echo(render_crosstable_text(result.table))
    click.echo(render_summary_text(result.summaries), nl=False)


@main.command()
@_common
@click.option("--force", is_flag=True, help="Run even if token distinctness fails.")
@click.option("--figures/--no-figures", default=True, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True, help="Cohort worker processes.")
def report(config_path, seed, out, force, figures, workers) -> None:
    """Full run: dataset, report text, manifest and figures."""
    config = _load(config_path, seed, out)
    try:
        bundle = run_experiment(config, force=force, emit_figures=figures, workers=workers)
    except DistinctnessError as exc:
        click.echo(render_distinctness_text(exc.report), nl=False, err=True)
        raise click.ClickException(str(exc)) from exc
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(f"dataset: {bundle.dataset_path}")
    click.echo(f"report: {bundle.report_path}")
    click.echo(f"manifest: {bundle.manifest_path}")
    for p in bundle.figure_paths:
        click.echo(f"figure: {p}")
    click.echo(render_summary_text(bundle.classification.summaries), nl=False)


@main.command("verify-tokens")
@_common
def verify_tokens(config_path, seed, out) -> None:
    """Print the token distinctness report; exit nonzero if insufficient."""
    config = _load(config_path, seed, out)
    tokens = build_token_set(config.virtue)
    report_ = check_distinctness(
        tokens,
        threshold=config.distinctness_threshold,
        item_scale=config.behavior.item_scale,
    )
    click.echo(render_distinctness_text(report_), nl=False)
    if not report_.sufficient:
        raise click.ClickException("token set is not pairwise distinct")


@main.command()
@_common
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8700, show_default=True)
def serve(config_path, seed, out, host, port) -> None:
    """Serve live trading sessions over HTTP and WebSocket."""
    import uvicorn

    from .server import create_app

    config = _load(config_path, seed, out)
    uvicorn.run(create_app(config), host=host, port=port, log_level="info")


if __name__ == "__main__":
    main()
