"""Actual-versus-predicted contingency table and summary statistics."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .records import PerformanceRecord

__all__ = [
    "CrossTable",
    "SuccessSummary",
    "CohortStat",
    "cross_table",
    "success_summary",
    "cohort_stats",
    "percent_half_up",
]


@dataclass(frozen=True)
class CrossTable:
    classes: tuple[str, ...]
    counts: np.ndarray  # (c, c) int, rows = actual, cols = predicted
    row_totals: np.ndarray
    col_totals: np.ndarray
    n: int

    @property
    def row_props(self) -> np.ndarray:
        safe = np.where(self.row_totals == 0, 1, self.row_totals)
        return self.counts / safe[:, None]

    @property
    def col_props(self) -> np.ndarray:
        safe = np.where(self.col_totals == 0, 1, self.col_totals)
        return self.counts / safe[None, :]

    @property
    def table_props(self) -> np.ndarray:
        return self.counts / (self.n if self.n else 1)

    def check(self) -> None:
        assert self.counts.sum() == self.n
        assert (self.counts.sum(axis=1) == self.row_totals).all()
        assert (self.counts.sum(axis=0) == self.col_totals).all()
        nonzero = self.row_totals > 0
        assert np.allclose(self.row_props[nonzero].sum(axis=1), 1.0, atol=1e-9)

    def diagonal(self) -> int:
        return int(np.trace(self.counts))


@dataclass(frozen=True)
class SuccessSummary:
    scope: str
    success: int
    missed: int
    percent: int  # integer percent, halves rounded up

    @property
    def total(self) -> int:
        return self.success + self.missed


@dataclass(frozen=True)
class CohortStat:
    label: str
    count: int
    mean: float
    sd: float | None  # sample sd; undefined below two observations


def percent_half_up(numerator: int, denominator: int) -> int:
    """Integer percent with exact half-up rounding (13 for 12.5%)."""
    if denominator <= 0:
        raise ValueError("denominator must be positive")
    return (200 * numerator + denominator) // (2 * denominator)


def cross_table(
    actual: list[str], predicted: list[str], classes: list[str] | tuple[str, ...]
) -> CrossTable:
    if len(actual) != len(predicted):
        raise ValueError("actual and predicted disagree on length")
    index = {label: i for i, label in enumerate(classes)}
    counts = np.zeros((len(classes), len(classes)), dtype=np.int64)
    for a, p in zip(actual, predicted):
        if a not in index:
            raise ValueError(f"actual label {a!r} missing from class list")
        if p not in index:
            raise ValueError(f"predicted label {p!r} missing from class list")
        counts[index[a], index[p]] += 1
    table = CrossTable(
        classes=tuple(classes),
        counts=counts,
        row_totals=counts.sum(axis=1),
        col_totals=counts.sum(axis=0),
        n=int(counts.sum()),
    )
    table.check()
    return table


def success_summary(table: CrossTable, scope: str = "all-tokens") -> SuccessSummary:
    """Hit/miss tally over a row scope.

    `all-tokens` covers every row; `T1:T6` restricts to the six informative
    rows but still counts any off-diagonal prediction (control included) as
    a miss.
    """
    if scope == "all-tokens":
        rows = list(range(len(table.classes)))
    elif scope == "T1:T6":
        rows = [i for i, label in enumerate(table.classes) if label != "T7"]
        if len(rows) != 6:
            raise ValueError("T1:T6 scope expects exactly six non-control classes")
    else:
        raise ValueError(f"unknown summary scope: {scope!r}")
    success = int(sum(table.counts[i, i] for i in rows))
    total = int(sum(table.row_totals[i] for i in rows))
    missed = total - success
    return SuccessSummary(
        scope=scope,
        success=success,
        missed=missed,
        percent=percent_half_up(success, total) if total else 0,
    )


def cohort_stats(records: list[PerformanceRecord]) -> list[CohortStat]:
    """Per-token count, mean and sample sd of net profit, in label order."""
    groups: dict[str, list[int]] = {}
    for r in records:
        groups.setdefault(r.token_label, []).append(r.net_profit)
    stats = []
    for label in sorted(groups):
        values = np.asarray(groups[label], dtype=np.float64)
        sd = float(values.std(ddof=1)) if len(values) >= 2 else None
        stats.append(
            CohortStat(label=label, count=len(values), mean=float(values.mean()), sd=sd)
        )
    return stats
