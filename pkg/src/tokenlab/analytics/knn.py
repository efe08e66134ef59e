"""Nearest-neighbour classification of performance records.

The feature space defaults to the single net-profit scalar. Features are
z-scored with the training population's mean and (population) standard
deviation before distances are taken, so train and test live on one scale
and no test-set statistic leaks into the transform.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .records import PerformanceRecord

__all__ = [
    "KnnConfig",
    "StandardizeParams",
    "feature_matrix",
    "standardize_fit",
    "standardize_apply",
    "knn_classify",
]


@dataclass(frozen=True)
class KnnConfig:
    k: int = 5

    def validate(self) -> None:
        if self.k < 1:
            raise ValueError(f"k must be positive, got {self.k}")
        if self.k % 2 == 0:
            raise ValueError(f"k must be odd to limit vote ties, got {self.k}")


@dataclass(frozen=True)
class StandardizeParams:
    mean: np.ndarray
    sd: np.ndarray
    constant: np.ndarray  # bool mask of zero-variance columns


def feature_matrix(
    records: list[PerformanceRecord], extra_keys: tuple[str, ...] = ()
) -> np.ndarray:
    """Records as a float (n, 1 + len(extra_keys)) array, net profit first."""
    rows = []
    for r in records:
        row = [float(r.net_profit)]
        for key in extra_keys:
            row.append(float(r.extra_features[key]))
        rows.append(row)
    return np.asarray(rows, dtype=np.float64)


def standardize_fit(train: np.ndarray) -> StandardizeParams:
    if train.ndim != 2 or train.shape[0] == 0:
        raise ValueError("training matrix must be 2-d and non-empty")
    mean = train.mean(axis=0)
    sd = train.std(axis=0)  # population sd
    constant = sd == 0.0
    return StandardizeParams(mean=mean, sd=sd, constant=constant)


def standardize_apply(x: np.ndarray, params: StandardizeParams) -> np.ndarray:
    """Z-score columns; zero-variance columns map to 0 rather than NaN."""
    safe_sd = np.where(params.constant, 1.0, params.sd)
    z = (x - params.mean) / safe_sd
    if params.constant.any():
        z[:, params.constant] = 0.0
    return z


def knn_classify(
    train_x: np.ndarray,
    train_y: list[str],
    test_x: np.ndarray,
    config: KnnConfig | None = None,
    classes: list[str] | None = None,
) -> list[str]:
    """Predict one label per test row by majority vote of the k nearest
    training rows (Euclidean).

    Deterministic by construction: equidistant neighbours are taken in
    training-index order, a vote tie goes to the tied class with the
    smaller mean neighbour distance, and any remaining tie to the class
    listed first in `classes`.
    """
    config = config or KnnConfig()
    config.validate()
    if len(train_y) != train_x.shape[0]:
        raise ValueError("train_x and train_y disagree on length")
    if config.k > train_x.shape[0]:
        raise ValueError(
            f"k={config.k} exceeds the {train_x.shape[0]} available training rows"
        )
    if classes is None:
        classes = sorted(set(train_y))
    class_rank = {label: i for i, label in enumerate(classes)}
    for label in train_y:
        if label not in class_rank:
            raise ValueError(f"training label {label!r} missing from class list")

    diff = test_x[:, None, :] - train_x[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=-1))

    predictions: list[str] = []
    for row in dist:
        order = np.argsort(row, kind="stable")[: config.k]
        votes: dict[str, int] = {}
        dist_sum: dict[str, float] = {}
        for idx in order.tolist():
            label = train_y[idx]
            votes[label] = votes.get(label, 0) + 1
            dist_sum[label] = dist_sum.get(label, 0.0) + float(row[idx])
        best = max(votes.values())
        tied = [label for label, v in votes.items() if v == best]
        if len(tied) > 1:
            tied.sort(key=lambda lb: (dist_sum[lb] / votes[lb], class_rank[lb]))
        predictions.append(tied[0])
    return predictions
