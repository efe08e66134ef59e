"""Background order flow: ambient liquidity anchored to the fundamental.

Arrivals are Poisson per step. Each arriving order draws a side, a
passive/aggressive role, a size, and a price a dispersed number of ticks
away from the contemporaneous fundamental value, so the standing book
follows the drift. Passive orders quote away from the value (buys below,
sells above); aggressive orders cross toward it (buys above, sells below)
and take whatever rests inside their price. Everything is a limit order:
background noise is price-bounded by construction, so it can supply and
consume liquidity near the value but never sweep the book to stale deep
levels the way an unbounded market order would.

The whole stream is generated in one vectorized pass from a seeded
substream and is therefore reproducible.

Background buys and sells are owned by two pooled accounts ("flow-buy",
"flow-sell") so that every trade involving only background flow still has
distinct buyer and seller identities.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from ..rng import substream
from .fundamental import FundamentalPath

__all__ = ["FlowParams", "FlowOrderSpec", "FlowStream", "generate_background_flow"]

FLOW_BUYER = "flow-buy"
FLOW_SELLER = "flow-sell"


@dataclass(frozen=True)
class FlowParams:
    arrival_rate: float = 0.6  # mean orders per step
    passive_fraction: float = 0.8  # remainder cross the spread
    price_dispersion: float = 2.0  # mean tick offset from the fundamental
    mean_quantity: float = 10.0  # mean order size in shares

    def validate(self) -> None:
        if self.arrival_rate < 0:
            raise ValueError(f"arrival_rate must be >= 0, got {self.arrival_rate}")
        if not 0.0 <= self.passive_fraction <= 1.0:
            raise ValueError(f"passive_fraction must be in [0, 1], got {self.passive_fraction}")
        if self.price_dispersion < 0:
            raise ValueError(f"price_dispersion must be >= 0, got {self.price_dispersion}")
        if self.mean_quantity < 1:
            raise ValueError(f"mean_quantity must be >= 1, got {self.mean_quantity}")


class FlowOrderSpec(NamedTuple):
    step: int
    side: str  # "buy" | "sell"
    kind: str  # always "limit" for background flow
    price: int | None
    quantity: int


class FlowStream:
    """Ordered background orders for one session, materialized as arrays."""

    def __init__(self, steps, sides, prices, quantities):
        self.steps = steps
        self.sides = sides
        self.prices = prices
        self.quantities = quantities

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[FlowOrderSpec]:
        for i in range(len(self.steps)):
            yield FlowOrderSpec(
                self.steps[i],
                "buy" if self.sides[i] else "sell",
                "limit",
                self.prices[i],
                self.quantities[i],
            )

    def per_step(self, n_steps: int) -> list[list[FlowOrderSpec]]:
        """Orders grouped by step index (arrival order preserved)."""
        grouped: list[list[FlowOrderSpec]] = [[] for _ in range(n_steps)]
        for spec in self:
            grouped[spec.step].append(spec)
        return grouped


def generate_background_flow(
    seed: int, params: FlowParams, fundamental: FundamentalPath
) -> FlowStream:
    """Reproducible stream of background orders for one session."""
    params.validate()
    n_steps = len(fundamental.values)
    rng = substream(seed, "flow")

    counts = rng.poisson(params.arrival_rate, n_steps)
    total = int(counts.sum())
    if total == 0:
        return FlowStream([], [], [], [])

    step_idx = np.repeat(np.arange(n_steps), counts)
    is_buy = rng.random(total) < 0.5
    is_passive = rng.random(total) < params.passive_fraction
    offsets = np.floor(rng.exponential(params.price_dispersion, total)).astype(np.int64) + 1
    quantities = rng.poisson(params.mean_quantity - 1.0, total) + 1

    anchor = fundamental.values[step_idx]
    # Passive buys sit below the value, aggressive buys reach above it;
    # mirrored for sells.
    below = anchor - offsets
    above = anchor + offsets
    prices = np.where(is_buy, np.where(is_passive, below, above), np.where(is_passive, above, below))
    prices = np.maximum(prices, 1)

    return FlowStream(
        step_idx.tolist(),
        is_buy.tolist(),
        prices.tolist(),
        [int(q) for q in quantities.tolist()],
    )
