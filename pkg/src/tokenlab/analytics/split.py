"""Train/test partitioning of performance records.

Two modes: `pooled-random` draws a seeded uniform sample of the whole
dataset for training (no stratification; per-class test counts fall where
they fall, which is how visibly uneven test tallies arise), and
`fixed-counts` reproduces an exact per-token (train, test) table.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..rng import substream
from .records import PerformanceRecord

__all__ = ["SplitSpec", "split"]


@dataclass(frozen=True)
class SplitSpec:
    mode: str = "pooled-random"  # or "fixed-counts"
    ratio: float = 0.7  # train fraction, pooled-random mode
    seed: int = 0
    fixed_counts: dict[str, tuple[int, int]] | None = None  # label -> (train, test)

    def validate(self) -> None:
        if self.mode not in ("pooled-random", "fixed-counts"):
            raise ValueError(f"unknown split mode: {self.mode!r}")
        if self.mode == "pooled-random" and not 0.0 < self.ratio < 1.0:
            raise ValueError(f"ratio must be in (0, 1), got {self.ratio}")
        if self.mode == "fixed-counts" and not self.fixed_counts:
            raise ValueError("fixed-counts mode requires a fixed_counts table")


def split(
    records: list[PerformanceRecord], spec: SplitSpec
) -> tuple[list[PerformanceRecord], list[PerformanceRecord]]:
    """Disjoint, exhaustive (train, test) partition; deterministic in spec."""
    if not records:
        raise ValueError("cannot split an empty record list")
    spec.validate()

    if spec.mode == "pooled-random":
        n_train = int(spec.ratio * len(records))
        perm = substream(spec.seed, "split").permutation(len(records))
        chosen = set(perm[:n_train].tolist())
        train = [r for i, r in enumerate(records) if i in chosen]
        test = [r for i, r in enumerate(records) if i not in chosen]
        return train, test

    assert spec.fixed_counts is not None
    by_label: dict[str, list[int]] = {}
    for i, r in enumerate(records):
        by_label.setdefault(r.token_label, []).append(i)

    for label, (n_train, n_test) in spec.fixed_counts.items():
        available = len(by_label.get(label, []))
        if n_train + n_test != available:
            raise ValueError(
                f"fixed counts for {label} claim {n_train}+{n_test} records "
                f"but the dataset holds {available}"
            )
    extra = sorted(set(by_label) - set(spec.fixed_counts))
    if extra:
        raise ValueError(f"dataset holds labels missing from fixed_counts: {', '.join(extra)}")

    train_idx: set[int] = set()
    for label, indices in by_label.items():
        n_train, _ = spec.fixed_counts[label]
        perm = substream(spec.seed, "split", label).permutation(len(indices))
        train_idx.update(indices[j] for j in perm[:n_train].tolist())

    train = [r for i, r in enumerate(records) if i in train_idx]
    test = [r for i, r in enumerate(records) if i not in train_idx]
    return train, test
