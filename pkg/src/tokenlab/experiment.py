"""End-to-end experiment harness.

One call takes a config to a finished bundle: build the token set, gate on
distinctness, simulate every cohort, persist the dataset, split, classify,
tabulate. Everything downstream of the config and master seed is
deterministic, so rerunning a bundle reproduces its files byte for byte.
"""
from __future__ import annotations

import json
import os
import platform
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .agents import CohortSpec, run_cohort
from .analytics import (
    CohortStat,
    CrossTable,
    PerformanceRecord,
    SuccessSummary,
    cohort_stats,
    cross_table,
    feature_matrix,
    knn_classify,
    split,
    standardize_apply,
    standardize_fit,
    success_summary,
)
from .config import ExperimentConfig, config_digest, config_to_dict
from .dataset import write_records_csv
from .rng import derive_seed
from .tokens import (
    TOKEN_IDS,
    InformationToken,
    TokenDistinctnessReport,
    build_token_set,
    check_distinctness,
)

__all__ = [
    "DistinctnessError",
    "ClassificationResult",
    "ReportBundle",
    "generate_records",
    "classify_records",
    "run_experiment",
]

TOKEN_ORDER = TOKEN_IDS


class DistinctnessError(RuntimeError):
    """Raised when the token set fails its pairwise-distance gate."""

    def __init__(self, report: TokenDistinctnessReport):
        self.report = report
        super().__init__(
            "token set is not pairwise distinct: min off-diagonal distance "
            f"{report.min_offdiagonal:.4f} < threshold {report.threshold:.4f}"
        )


@dataclass(frozen=True)
class ClassificationResult:
    train: list[PerformanceRecord]
    test: list[PerformanceRecord]
    actual: list[str]
    predicted: list[str]
    table: CrossTable
    summaries: dict[str, SuccessSummary]

    @property
    def accuracy(self) -> float:
        return self.table.diagonal() / self.table.n if self.table.n else 0.0


@dataclass(frozen=True)
class ReportBundle:
    config: ExperimentConfig
    records: list[PerformanceRecord]
    tokens: dict[str, InformationToken]
    distinctness: TokenDistinctnessReport
    stats: list[CohortStat]
    classification: ClassificationResult
    manifest: dict
    dataset_path: str | None = None
    report_path: str | None = None
    manifest_path: str | None = None
    figure_paths: tuple[str, ...] = ()


def _cohort_task(args) -> list[PerformanceRecord]:
    config, label = args
    tokens = {t.token_id: t for t in build_token_set(config.virtue)}
    spec = CohortSpec(
        token_id=label,
        n_subjects=config.cohort_counts[label],
        seed_base=derive_seed(config.master_seed, "cohort", label),
    )
    return run_cohort(
        spec,
        tokens[label],
        config.virtue,
        config.market,
        mapping=config.behavior,
        base=config.base_profile,
    )


def generate_records(config: ExperimentConfig, workers: int = 1) -> list[PerformanceRecord]:
    """Simulate every cohort in token order; stable output order regardless
    of worker count."""
    config = config.resolved()
    config.validate()
    tasks = [(config, label) for label in TOKEN_ORDER]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            cohorts = list(pool.map(_cohort_task, tasks))
    else:
        cohorts = [_cohort_task(t) for t in tasks]
    records: list[PerformanceRecord] = []
    for cohort in cohorts:
        records.extend(cohort)
    return records


def classify_records(
    records: list[PerformanceRecord], config: ExperimentConfig
) -> ClassificationResult:
    config = config.resolved()
    train, test = split(records, config.split_spec)
    params = standardize_fit(feature_matrix(train))
    train_x = standardize_apply(feature_matrix(train), params)
    test_x = standardize_apply(feature_matrix(test), params)
    train_y = [r.token_label for r in train]
    actual = [r.token_label for r in test]
    predicted = knn_classify(train_x, train_y, test_x, config.knn, classes=list(TOKEN_ORDER))
    table = cross_table(actual, predicted, TOKEN_ORDER)
    summaries = {
        scope: success_summary(table, scope) for scope in ("all-tokens", "T1:T6")
    }
    return ClassificationResult(
        train=train,
        test=test,
        actual=actual,
        predicted=predicted,
        table=table,
        summaries=summaries,
    )


def run_experiment(
    config: ExperimentConfig,
    force: bool = False,
    emit_files: bool = True,
    emit_figures: bool = True,
    workers: int = 1,
) -> ReportBundle:
    config = config.resolved()
    config.validate()

    token_list = build_token_set(config.virtue)
    tokens = {t.token_id: t for t in token_list}
    distinctness = check_distinctness(
        token_list,
        threshold=config.distinctness_threshold,
        item_scale=config.behavior.item_scale,
    )
    if not distinctness.sufficient and not force:
        raise DistinctnessError(distinctness)

    records = generate_records(config, workers=workers)
    stats = cohort_stats(records)
    classification = classify_records(records, config)

    manifest = {
        "config_digest": config_digest(config),
        "master_seed": config.master_seed,
        "record_count": len(records),
        "train_count": len(classification.train),
        "test_count": len(classification.test),
        "versions": {
            "tokenlab": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
        "config": config_to_dict(config),
    }

    bundle = ReportBundle(
        config=config,
        records=records,
        tokens=tokens,
        distinctness=distinctness,
        stats=stats,
        classification=classification,
        manifest=manifest,
    )
    if emit_files:
        bundle = write_bundle(bundle, emit_figures=emit_figures)
    return bundle


def write_bundle(bundle: ReportBundle, emit_figures: bool = True) -> ReportBundle:
    """Write dataset, report text, manifest and figures under out_dir."""
    from .report import render_report_text

    out_dir = bundle.config.out_dir
    os.makedirs(out_dir, exist_ok=True)

    dataset_path = os.path.join(out_dir, "dataset.csv")
    write_records_csv(dataset_path, bundle.records)

    report_path = os.path.join(out_dir, "report.txt")
    with open(report_path, "w", encoding="utf-8") as fh:
        fh.write(render_report_text(bundle))

    manifest_path = os.path.join(out_dir, "manifest.json")
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(bundle.manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")

    figure_paths: tuple[str, ...] = ()
    if emit_figures:
        from .figures import render_figures

        figure_paths = tuple(render_figures(bundle, os.path.join(out_dir, "figures")))

    return ReportBundle(
        config=bundle.config,
        records=bundle.records,
        tokens=bundle.tokens,
        distinctness=bundle.distinctness,
        stats=bundle.stats,
        classification=bundle.classification,
        manifest=bundle.manifest,
        dataset_path=dataset_path,
        report_path=report_path,
        manifest_path=manifest_path,
        figure_paths=figure_paths,
    )
