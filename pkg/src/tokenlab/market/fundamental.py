"""Fundamental value paths with a pinned terminal drift.

The instrument's fundamental follows a seeded random-walk bridge: Gaussian
noise shapes the interior of the path while both endpoints are pinned, so
the terminal return always lands on the requested drift target (up to
integer-tick rounding). This makes the upward-drift premise objectively
true in every session rather than true on average.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..rng import substream

__all__ = ["FundamentalPath", "generate_fundamental", "DRIFT_RANGE"]

# Admissible terminal drift for a session: an upward move of 2% to 5%.
DRIFT_RANGE = (0.02, 0.05)


@dataclass(frozen=True)
class FundamentalPath:
    values: np.ndarray  # int64 ticks, one per session step
    drift_target: float

    @property
    def terminal_return(self) -> float:
        return float(self.values[-1]) / float(self.values[0]) - 1.0

    def check(self, tolerance: float = 0.005) -> None:
        if np.any(self.values <= 0):
            raise AssertionError("fundamental path must stay positive")
        err = abs(self.terminal_return - self.drift_target)
        if err > tolerance:
            raise AssertionError(
                f"terminal return {self.terminal_return:.5f} misses target "
                f"{self.drift_target:.5f} by {err:.5f}"
            )


def generate_fundamental(
    seed: int,
    steps: int,
    drift_target: float,
    volatility: float,
    start_price: int = 10_000,
    allow_out_of_range: bool = False,
) -> FundamentalPath:
    """Seeded bridge path of `steps` tick values from `start_price`.

    `volatility` is the relative dispersion of the unpinned walk over the
    whole session; 0 gives the deterministic linear ramp. Identical
    (seed, parameters) always reproduce the identical path. Targets
    outside DRIFT_RANGE are rejected unless `allow_out_of_range` is set
    (kept for what-if runs).
    """
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    if volatility < 0:
        raise ValueError(f"volatility must be >= 0, got {volatility}")
    if start_price <= 0:
        raise ValueError(f"start_price must be positive, got {start_price}")
    lo, hi = DRIFT_RANGE
    if not (lo <= drift_target <= hi) and not allow_out_of_range:
        raise ValueError(
            f"drift_target {drift_target} outside [{lo}, {hi}] "
            "(pass allow_out_of_range=True to override)"
        )

    n = steps - 1
    t = np.arange(steps, dtype=np.float64) / n
    end = start_price * (1.0 + drift_target)
    ramp = start_price + (end - start_price) * t

    if volatility > 0:
        rng = substream(seed, "fundamental")
        z = rng.standard_normal(n)
        walk = np.concatenate(([0.0], np.cumsum(z)))
        bridge = walk - t * walk[-1]
        ramp = ramp + (volatility * start_price / np.sqrt(n)) * bridge

    values = np.maximum(np.rint(ramp).astype(np.int64), 1)
    return FundamentalPath(values=values, drift_target=drift_target)
