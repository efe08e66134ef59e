"""Token-conditioned synthetic subjects.

Each subject reads one information token, derives a behavior profile from
the token's encoding through a configurable mapping table, and trades one
session as a directional taker (market orders only, no resting quotes).
The mapping is the lab's stand-in for how a human might respond to the
message; every constant is config-exposed and none is an empirical claim.

The mapping's `separation` dial interpolates between the base profile
(0: every token behaves identically, token effects erased) and the full
table (1: shipped defaults).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .analytics.records import PerformanceRecord
from .market.book import MARKET
from .market.session import MarketConfig, MarketView, OrderTicket, run_session
from .rng import derive_seed, substream
from .tokens import InformationToken, InformationVirtue, encode_token

__all__ = [
    "BehaviorProfile",
    "BehaviorMapping",
    "CohortSpec",
    "DEFAULT_BASE_PROFILE",
    "DEFAULT_BEHAVIOR_MAPPING",
    "derive_behavior",
    "position_target",
    "agent_step",
    "TokenAgent",
    "run_cohort",
]


@dataclass(frozen=True)
class BehaviorProfile:
    intensity: float  # [0, 1]; 0 means no directional orders at all
    reaction_delay: int  # steps before the first action
    size_factor: int  # shares per action
    noise_sd: float  # relative sizing wobble per action
    direction_confidence: float  # [-1, 1]; sign picks the trading side


@dataclass(frozen=True)
class BehaviorMapping:
    """Encoding -> profile table, plus agent action constants."""

    separation: float = 1.0  # 0 collapses every token onto the base profile
    weight_determinism: float = 0.35
    weight_probability: float = 0.30
    weight_specificity: float = 0.18
    weight_item_load: float = 0.28  # information-load drag on aggressiveness
    intensity_cap: float = 0.9
    delay_per_extra_item: float = 4.0  # reading-time steps per item beyond the first
    size_slope: float = 3.0  # shares per action added per unit intensity
    position_scale: float = 40.0  # shares at intensity 1, full confidence
    position_gamma: float = 2.2  # convexity of target position in intensity
    explore_rate: float = 0.15  # undirected action rate factor when unguided
    item_scale: float = 12.0
    intensity_jitter_sd: float = 0.005
    delay_jitter_sd: float = 1.5
    confidence_jitter_sd: float = 0.005

    def validate(self) -> None:
        if not 0.0 <= self.separation <= 1.0:
            raise ValueError(f"separation must be in [0, 1], got {self.separation}")
        if self.item_scale <= 0:
            raise ValueError("item_scale must be positive")
        if not 0 < self.intensity_cap <= 1.0:
            raise ValueError("intensity_cap must be in (0, 1]")


DEFAULT_BEHAVIOR_MAPPING = BehaviorMapping()

DEFAULT_BASE_PROFILE = BehaviorProfile(
    intensity=0.1,
    reaction_delay=5,
    size_factor=1,
    noise_sd=0.05,
    direction_confidence=0.0,
)


def _clip(x: float, lo: float, hi: float) -> float:
    return lo if x < lo else hi if x > hi else x


def derive_behavior(
    token: InformationToken,
    base: BehaviorProfile,
    rng: np.random.Generator,
    mapping: BehaviorMapping = DEFAULT_BEHAVIOR_MAPPING,
) -> BehaviorProfile:
    """Behavior profile for one subject under one token condition.

    Deterministic in (token, base, mapping, rng state): the token encoding
    sets the table values, `separation` interpolates them against the
    base, and a small per-subject jitter is drawn from `rng`. Intensity
    rises with determinism and stated probability; the reaction delay
    stretches with the number of items the subject has to read.
    """
    mapping.validate()
    det, prob, items, spec = (float(v) for v in encode_token(token))
    load = items / mapping.item_scale

    intensity_full = _clip(
        base.intensity
        + mapping.weight_determinism * det
        + mapping.weight_probability * prob
        + mapping.weight_specificity * spec
        - mapping.weight_item_load * load,
        0.0,
        mapping.intensity_cap,
    )
    delay_full = base.reaction_delay + mapping.delay_per_extra_item * max(0.0, items - 1.0)
    size_full = base.size_factor + mapping.size_slope * intensity_full
    confidence_full = _clip(det + max(0.0, 2.0 * (prob - 0.5)), 0.0, 1.0)

    s = mapping.separation
    intensity = base.intensity + s * (intensity_full - base.intensity)
    delay = base.reaction_delay + s * (delay_full - base.reaction_delay)
    size = base.size_factor + s * (size_full - base.size_factor)
    confidence = base.direction_confidence + s * (confidence_full - base.direction_confidence)

    # Per-subject jitter; draw order is fixed so records stay reproducible.
    intensity = _clip(intensity + rng.normal(0.0, mapping.intensity_jitter_sd), 0.0, 1.0)
    delay = max(0.0, delay + rng.normal(0.0, mapping.delay_jitter_sd))
    confidence = _clip(confidence + rng.normal(0.0, mapping.confidence_jitter_sd), -1.0, 1.0)

    return BehaviorProfile(
        intensity=intensity,
        reaction_delay=int(round(delay)),
        size_factor=max(1, int(round(size))),
        noise_sd=base.noise_sd,
        direction_confidence=confidence,
    )


def position_target(profile: BehaviorProfile, mapping: BehaviorMapping) -> int:
    """Signed share target implied by a profile; 0 when unguided."""
    if profile.intensity <= 0.0 or profile.direction_confidence == 0.0:
        return 0
    magnitude = (
        mapping.position_scale
        * profile.intensity**mapping.position_gamma
        * abs(profile.direction_confidence)
    )
    return int(math.copysign(round(magnitude), profile.direction_confidence))


def agent_step(
    view: MarketView,
    profile: BehaviorProfile,
    step: int,
    rng: np.random.Generator,
    mapping: BehaviorMapping = DEFAULT_BEHAVIOR_MAPPING,
) -> OrderTicket | None:
    """One decision: work toward the target position, or poke around.

    Nothing is emitted before the reaction delay. A guided subject sends
    market orders toward its target, with per-step emission probability
    equal to its intensity and clip sizes around its size factor. An
    unguided subject (target 0, intensity > 0) occasionally trades one
    share on a random side and unwinds it again.
    """
    if profile.intensity <= 0.0 or step < profile.reaction_delay:
        return None

    target = position_target(profile, mapping)
    position = view.position

    if target != 0:
        remaining = target - position
        if remaining == 0:
            return None
        if rng.random() >= profile.intensity:
            return None
        size = profile.size_factor
        if profile.noise_sd > 0:
            size = max(1, int(round(size * (1.0 + rng.normal(0.0, profile.noise_sd)))))
        qty = min(abs(remaining), size)
        side = "buy" if remaining > 0 else "sell"
        return OrderTicket(side=side, kind=MARKET, quantity=qty)

    # Exploratory mode: no guidance, low-rate round trips.
    if rng.random() >= profile.intensity * mapping.explore_rate:
        return None
    if position != 0:
        side = "sell" if position > 0 else "buy"
        return OrderTicket(side=side, kind=MARKET, quantity=min(abs(position), profile.size_factor))
    side = "buy" if rng.random() < 0.5 else "sell"
    return OrderTicket(side=side, kind=MARKET, quantity=1)


class TokenAgent:
    """Session controller wrapping one behavior profile."""

    def __init__(self, profile: BehaviorProfile, mapping: BehaviorMapping = DEFAULT_BEHAVIOR_MAPPING):
        self.profile = profile
        self.mapping = mapping
        self.orders_emitted = 0

    def __call__(self, view: MarketView, step: int, rng: np.random.Generator) -> OrderTicket | None:
        ticket = agent_step(view, self.profile, step, rng, self.mapping)
        if ticket is not None:
            self.orders_emitted += 1
        return ticket


@dataclass(frozen=True)
class CohortSpec:
    token_id: str
    n_subjects: int
    seed_base: int


def run_cohort(
    spec: CohortSpec,
    token: InformationToken,
    virtue: InformationVirtue,
    config: MarketConfig,
    mapping: BehaviorMapping = DEFAULT_BEHAVIOR_MAPPING,
    base: BehaviorProfile = DEFAULT_BASE_PROFILE,
) -> list[PerformanceRecord]:
    """Independent sessions for one cohort; one record per subject.

    Subjects never repeat across cohorts (ids carry the token label), and
    each subject runs exactly one session under exactly one token. The
    market's admissible drift range is pinned to the virtue for every
    cohort, control included: only the message is withheld, not the move.
    """
    if spec.n_subjects <= 0:
        raise ValueError(f"cohort for {spec.token_id} needs n_subjects > 0")
    if token.token_id != spec.token_id:
        raise ValueError(f"cohort spec {spec.token_id} paired with token {token.token_id}")

    config = replace(config, drift_low=virtue.magnitude_low, drift_high=virtue.magnitude_high)
    if config.drift_mode == "fixed" and not (
        virtue.magnitude_low <= config.drift_target <= virtue.magnitude_high
    ):
        raise ValueError(
            f"fixed drift target {config.drift_target} falls outside the virtue's "
            f"[{virtue.magnitude_low}, {virtue.magnitude_high}]"
        )

    records = []
    for i in range(spec.n_subjects):
        session_seed = derive_seed(spec.seed_base, "subject", i)
        profile = derive_behavior(token, base, substream(session_seed, "behavior"), mapping)
        if profile.reaction_delay >= config.steps:
            raise ValueError(
                f"derived reaction delay {profile.reaction_delay} >= session steps {config.steps}"
            )
        agent = TokenAgent(profile, mapping)
        result = run_session(config, agent, session_seed)
        records.append(
            PerformanceRecord(
                record_id=f"{spec.token_id}-{i:03d}",
                subject_id=f"{spec.token_id}-s{i:03d}",
                token_label=spec.token_id,
                net_profit=result.net_profit,
                seed=session_seed,
            )
        )
    return records
