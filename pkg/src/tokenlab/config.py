"""Experiment configuration: typed bundle, JSON round-trip, validation.

A config captures everything a full run depends on, so a (config, seed)
pair pins the dataset and every downstream table byte for byte.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, replace

import jsonschema

from .agents import DEFAULT_BASE_PROFILE, BehaviorMapping, BehaviorProfile
from .analytics import KnnConfig, SplitSpec
from .market import FlowParams, MarketConfig
from .tokens import TOKEN_IDS, InformationVirtue

__all__ = [
    "ExperimentConfig",
    "DEFAULT_COHORT_COUNTS",
    "DEFAULT_FIXED_COUNTS",
    "default_config",
    "config_from_dict",
    "config_to_dict",
    "config_digest",
    "load_config",
    "CONFIG_SCHEMA",
]

DEFAULT_COHORT_COUNTS = {
    "T1": 30,
    "T2": 35,
    "T3": 31,
    "T4": 30,
    "T5": 30,
    "T6": 34,
    "T7": 33,
}

DEFAULT_FIXED_COUNTS = {
    "T1": (23, 7),
    "T2": (26, 9),
    "T3": (24, 7),
    "T4": (20, 10),
    "T5": (21, 9),
    "T6": (26, 8),
    "T7": (19, 14),
}


@dataclass(frozen=True)
class ExperimentConfig:
    master_seed: int = 1729
    out_dir: str = "out"
    cohort_counts: dict[str, int] | None = None
    virtue: InformationVirtue = InformationVirtue()
    market: MarketConfig = MarketConfig()
    behavior: BehaviorMapping = BehaviorMapping()
    base_profile: BehaviorProfile = DEFAULT_BASE_PROFILE
    split_spec: SplitSpec = SplitSpec(mode="fixed-counts", fixed_counts=None)
    knn: KnnConfig = KnnConfig()
    distinctness_threshold: float = 0.1

    def resolved(self) -> "ExperimentConfig":
        """Fill optional tables with the shipped defaults."""
        cfg = self
        if cfg.cohort_counts is None:
            cfg = replace(cfg, cohort_counts=dict(DEFAULT_COHORT_COUNTS))
        if cfg.split_spec.mode == "fixed-counts" and cfg.split_spec.fixed_counts is None:
            cfg = replace(
                cfg, split_spec=replace(cfg.split_spec, fixed_counts=dict(DEFAULT_FIXED_COUNTS))
            )
        return cfg

    def validate(self) -> None:
        cfg = self.resolved()
        assert cfg.cohort_counts is not None
        unknown = sorted(set(cfg.cohort_counts) - set(TOKEN_IDS))
        if unknown:
            raise ValueError(f"cohort counts name unknown tokens: {', '.join(unknown)}")
        missing = sorted(set(TOKEN_IDS) - set(cfg.cohort_counts))
        if missing:
            raise ValueError(f"cohort counts missing tokens: {', '.join(missing)}")
        for label, n in cfg.cohort_counts.items():
            if n < 1:
                raise ValueError(f"cohort {label} needs at least one subject, got {n}")
        cfg.market.validate()
        cfg.behavior.validate()
        cfg.split_spec.validate()
        cfg.knn.validate()
        if not 0.0 < cfg.distinctness_threshold:
            raise ValueError("distinctness threshold must be positive")


def default_config() -> ExperimentConfig:
    return ExperimentConfig().resolved()


CONFIG_SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "master_seed": {"type": "integer", "minimum": 0},
        "out_dir": {"type": "string", "minLength": 1},
        "cohort_counts": {
            "type": "object",
            "patternProperties": {"^T[1-7]$": {"type": "integer", "minimum": 1}},
            "additionalProperties": False,
        },
        "virtue": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "direction": {"enum": ["up", "down"]},
                "magnitude_low": {"type": "number", "exclusiveMinimum": 0},
                "magnitude_high": {"type": "number", "exclusiveMinimum": 0},
                "horizon": {"type": "string"},
                "statement": {"type": "string"},
            },
        },
        "market": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "steps": {"type": "integer", "minimum": 1},
                "start_price": {"type": "integer", "minimum": 1},
                "drift_mode": {"enum": ["fixed", "uniform"]},
                "drift_target": {"type": "number"},
                "volatility": {"type": "number", "minimum": 0},
                "initial_levels": {"type": "integer", "minimum": 0},
                "initial_level_qty": {"type": "integer", "minimum": 1},
                "flow": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "arrival_rate": {"type": "number", "minimum": 0},
                        "passive_fraction": {"type": "number", "minimum": 0, "maximum": 1},
                        "price_dispersion": {"type": "number", "exclusiveMinimum": 0},
                        "mean_quantity": {"type": "number", "minimum": 1},
                    },
                },
            },
        },
        "behavior": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "separation": {"type": "number", "minimum": 0, "maximum": 1},
                "weight_determinism": {"type": "number"},
                "weight_probability": {"type": "number"},
                "weight_specificity": {"type": "number"},
                "weight_item_load": {"type": "number"},
                "intensity_cap": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
                "delay_per_extra_item": {"type": "number", "minimum": 0},
                "size_slope": {"type": "number", "minimum": 0},
                "position_scale": {"type": "number", "minimum": 0},
                "position_gamma": {"type": "number", "exclusiveMinimum": 0},
                "explore_rate": {"type": "number", "minimum": 0, "maximum": 1},
                "item_scale": {"type": "number", "exclusiveMinimum": 0},
                "intensity_jitter_sd": {"type": "number", "minimum": 0},
                "delay_jitter_sd": {"type": "number", "minimum": 0},
                "confidence_jitter_sd": {"type": "number", "minimum": 0},
            },
        },
        "base_profile": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "intensity": {"type": "number", "minimum": 0, "maximum": 1},
                "reaction_delay": {"type": "integer", "minimum": 0},
                "size_factor": {"type": "number", "minimum": 0},
                "noise_sd": {"type": "number", "minimum": 0},
                "direction_confidence": {"type": "number", "minimum": -1, "maximum": 1},
            },
        },
        "split": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "mode": {"enum": ["pooled-random", "fixed-counts"]},
                "ratio": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                "seed": {"type": "integer", "minimum": 0},
                "fixed_counts": {
                    "type": ["object", "null"],
                    "patternProperties": {
                        "^T[1-7]$": {
                            "type": "array",
                            "items": {"type": "integer", "minimum": 0},
                            "minItems": 2,
                            "maxItems": 2,
                        }
                    },
                    "additionalProperties": False,
                },
            },
        },
        "knn": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"k": {"type": "integer", "minimum": 1}},
        },
        "distinctness_threshold": {"type": "number", "exclusiveMinimum": 0},
    },
}


def config_to_dict(config: ExperimentConfig) -> dict:
    cfg = config.resolved()
    out = {
        "master_seed": cfg.master_seed,
        "out_dir": cfg.out_dir,
        "cohort_counts": dict(sorted(cfg.cohort_counts.items())),
        "virtue": {
            "direction": cfg.virtue.direction,
            "magnitude_low": cfg.virtue.magnitude_low,
            "magnitude_high": cfg.virtue.magnitude_high,
            "horizon": cfg.virtue.horizon,
            "statement": cfg.virtue.statement,
        },
        "market": {
            "steps": cfg.market.steps,
            "start_price": cfg.market.start_price,
            "drift_mode": cfg.market.drift_mode,
            "drift_target": cfg.market.drift_target,
            "volatility": cfg.market.volatility,
            "initial_levels": cfg.market.initial_levels,
            "initial_level_qty": cfg.market.initial_level_qty,
            "flow": {
                "arrival_rate": cfg.market.flow.arrival_rate,
                "passive_fraction": cfg.market.flow.passive_fraction,
                "price_dispersion": cfg.market.flow.price_dispersion,
                "mean_quantity": cfg.market.flow.mean_quantity,
            },
        },
        "behavior": {
            "separation": cfg.behavior.separation,
            "weight_determinism": cfg.behavior.weight_determinism,
            "weight_probability": cfg.behavior.weight_probability,
            "weight_specificity": cfg.behavior.weight_specificity,
            "weight_item_load": cfg.behavior.weight_item_load,
            "intensity_cap": cfg.behavior.intensity_cap,
            "delay_per_extra_item": cfg.behavior.delay_per_extra_item,
            "size_slope": cfg.behavior.size_slope,
            "position_scale": cfg.behavior.position_scale,
            "position_gamma": cfg.behavior.position_gamma,
            "explore_rate": cfg.behavior.explore_rate,
            "item_scale": cfg.behavior.item_scale,
            "intensity_jitter_sd": cfg.behavior.intensity_jitter_sd,
            "delay_jitter_sd": cfg.behavior.delay_jitter_sd,
            "confidence_jitter_sd": cfg.behavior.confidence_jitter_sd,
        },
        "base_profile": {
            "intensity": cfg.base_profile.intensity,
            "reaction_delay": cfg.base_profile.reaction_delay,
            "size_factor": cfg.base_profile.size_factor,
            "noise_sd": cfg.base_profile.noise_sd,
            "direction_confidence": cfg.base_profile.direction_confidence,
        },
        "split": {
            "mode": cfg.split_spec.mode,
            "ratio": cfg.split_spec.ratio,
            "seed": cfg.split_spec.seed,
            "fixed_counts": (
                {k: list(v) for k, v in sorted(cfg.split_spec.fixed_counts.items())}
                if cfg.split_spec.fixed_counts is not None
                else None
            ),
        },
        "knn": {"k": cfg.knn.k},
        "distinctness_threshold": cfg.distinctness_threshold,
    }
    return out


def config_from_dict(data: dict) -> ExperimentConfig:
    jsonschema.validate(data, CONFIG_SCHEMA)
    base = default_config()

    virtue = base.virtue
    if "virtue" in data:
        virtue = replace(virtue, **data["virtue"])

    market = base.market
    if "market" in data:
        fields = dict(data["market"])
        flow = market.flow
        if "flow" in fields:
            flow = replace(flow, **fields.pop("flow"))
        market = replace(market, flow=flow, **fields)

    behavior = base.behavior
    if "behavior" in data:
        behavior = replace(behavior, **data["behavior"])

    profile = base.base_profile
    if "base_profile" in data:
        profile = replace(profile, **data["base_profile"])

    split_spec = base.split_spec
    if "split" in data:
        fields = dict(data["split"])
        if fields.get("fixed_counts") is not None:
            fields["fixed_counts"] = {
                k: (int(v[0]), int(v[1])) for k, v in fields["fixed_counts"].items()
            }
        split_spec = replace(split_spec, **fields)

    knn = base.knn
    if "knn" in data:
        knn = replace(knn, **data["knn"])

    config = ExperimentConfig(
        master_seed=data.get("master_seed", base.master_seed),
        out_dir=data.get("out_dir", base.out_dir),
        cohort_counts=dict(data["cohort_counts"]) if "cohort_counts" in data else base.cohort_counts,
        virtue=virtue,
        market=market,
        behavior=behavior,
        base_profile=profile,
        split_spec=split_spec,
        knn=knn,
        distinctness_threshold=data.get("distinctness_threshold", base.distinctness_threshold),
    ).resolved()
    config.validate()
    return config


def load_config(path: str) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))


def config_digest(config: ExperimentConfig) -> str:
    """Stable content hash of the fully resolved configuration."""
    canonical = json.dumps(config_to_dict(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
