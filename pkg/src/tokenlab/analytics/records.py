"""Informational performance records: one subject, one session, one profit."""
from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["PerformanceRecord", "TOKEN_LABELS"]

TOKEN_LABELS = ("T1", "T2", "T3", "T4", "T5", "T6", "T7")


@dataclass(frozen=True)
class PerformanceRecord:
    record_id: str
    subject_id: str
    token_label: str
    net_profit: int  # ticks x shares for the whole session
    seed: int
    extra_features: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.token_label not in TOKEN_LABELS:
            raise ValueError(f"unknown token label: {self.token_label!r}")
