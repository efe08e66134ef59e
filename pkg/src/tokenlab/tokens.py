"""Information tokens: seven message conditions expressing one fixed virtue.

The virtue is the source-perspective meaning held constant across
conditions: the stock will drift up 2-5% over the session. Six tokens
express it through a 3x2 grid of modality (deterministic, probabilistic,
quantity-load) by information level (high, low); the seventh is a control
with no guidance at all.

Each token carries a numeric encoding (determinism, stated_probability,
item_count, specificity). Pairwise distinctness of the encodings is the
machine-checkable surrogate for a human manipulation check: conditions
must be separated in encoding space before behavior can be attributed to
them.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "TOKEN_IDS",
    "ENCODING_DIMS",
    "InformationVirtue",
    "InformationToken",
    "TokenDistinctnessReport",
    "DEFAULT_TOKEN_TEMPLATES",
    "build_token_set",
    "encode_token",
    "check_distinctness",
]

TOKEN_IDS = ("T1", "T2", "T3", "T4", "T5", "T6", "T7")
ENCODING_DIMS = ("determinism", "stated_probability", "item_count", "specificity")

CONTROL = "control"


@dataclass(frozen=True)
class InformationVirtue:
    direction: str = "up"
    magnitude_low: float = 0.02
    magnitude_high: float = 0.05
    horizon: str = "one session"
    statement: str = "stock price for company 'X' will increase today"

    def __post_init__(self) -> None:
        if not 0 < self.magnitude_low <= self.magnitude_high:
            raise ValueError(
                f"need 0 < magnitude_low <= magnitude_high, got "
                f"({self.magnitude_low}, {self.magnitude_high})"
            )


@dataclass(frozen=True)
class InformationToken:
    token_id: str
    modality: str  # deterministic | probabilistic | quantity-load | control
    level: str  # high | low | none
    artifact_text: str
    encoding: tuple[float, float, float, float]
    virtue: InformationVirtue | None = None  # None only for the control token

    @property
    def is_control(self) -> bool:
        return self.modality == CONTROL


_VIRTUE_LINE = "Stock price for company 'X' will increase today."

_FILLER_ITEMS = [
    "Sector trading volumes were mixed through the morning.",
    "A peer company announced a routine board reshuffle.",
    "Analysts noted seasonal patterns in retail order flow.",
    "The exchange scheduled maintenance for next weekend.",
    "Commodity indices were broadly flat overnight.",
    "A regional conference on market structure opens Friday.",
    "Short interest in the sector was unchanged last week.",
    "An industry newsletter reviewed last quarter's filings.",
    "Currency markets showed limited overnight movement.",
    "A ratings agency reaffirmed the sector outlook.",
    "Options volumes matched their monthly average.",
]


def _bullets(items: list[str]) -> str:
    return "\n".join(f"- {line}" for line in items)


# Editable defaults: artifact texts plus the numeric parameters feeding the
# encoding. item_scale sets the normalization of item_count when measuring
# distinctness.
DEFAULT_TOKEN_TEMPLATES: dict = {
    "item_scale": 12,
    "assignment": {
        "T1": "deterministic:high",
        "T2": "deterministic:low",
        "T3": "probabilistic:high",
        "T4": "probabilistic:low",
        "T5": "quantity-load:high",
        "T6": "quantity-load:low",
        "T7": "control",
    },
    "cells": {
        "deterministic:high": {
            "text": "Confirmed: the stock price of company 'X' WILL rise 2% to 5% today.",
            "determinism": 1.0,
            "stated_probability": 1.0,
            "item_count": 1,
            "specificity": 1.0,
        },
        "deterministic:low": {
            "text": "Company 'X' stock will go up today.",
            "determinism": 1.0,
            "stated_probability": 1.0,
            "item_count": 1,
            "specificity": 0.3,
        },
        "probabilistic:high": {
            "text": "There is a 90% probability that company 'X' stock rises 2% to 5% today.",
            "determinism": 0.0,
            "stated_probability": 0.9,
            "item_count": 1,
            "specificity": 0.9,
        },
        "probabilistic:low": {
            "text": "Some chance (around 60%) that company 'X' stock rises today.",
            "determinism": 0.0,
            "stated_probability": 0.6,
            "item_count": 1,
            "specificity": 0.3,
        },
        "quantity-load:high": {
            "text": _bullets(_FILLER_ITEMS[:6] + [_VIRTUE_LINE] + _FILLER_ITEMS[6:]),
            "determinism": 0.5,
            "stated_probability": 0.85,
            "item_count": 12,
            "specificity": 0.5,
        },
        "quantity-load:low": {
            "text": _bullets([_FILLER_ITEMS[0], _VIRTUE_LINE, _FILLER_ITEMS[1]]),
            "determinism": 0.5,
            "stated_probability": 0.85,
            "item_count": 3,
            "specificity": 0.5,
        },
        "control": {
            "text": "",
            "determinism": 0.0,
            "stated_probability": 0.0,
            "item_count": 0,
            "specificity": 0.0,
        },
    },
}

_REQUIRED_CELLS = (
    "deterministic:high",
    "deterministic:low",
    "probabilistic:high",
    "probabilistic:low",
    "quantity-load:high",
    "quantity-load:low",
    "control",
)


def build_token_set(
    virtue: InformationVirtue, templates: dict | None = None
) -> list[InformationToken]:
    """The seven token conditions; T1-T6 share `virtue`, T7 is the control."""
    templates = templates if templates is not None else DEFAULT_TOKEN_TEMPLATES
    cells = templates.get("cells", {})
    assignment = templates.get("assignment", DEFAULT_TOKEN_TEMPLATES["assignment"])
    missing = [c for c in _REQUIRED_CELLS if c not in cells]
    if missing:
        raise ValueError(f"token templates missing cells: {', '.join(missing)}")

    tokens = []
    for token_id in TOKEN_IDS:
        cell_name = assignment.get(token_id)
        if cell_name is None or cell_name not in cells:
            raise ValueError(f"no template cell assigned for {token_id}")
        cell = cells[cell_name]
        modality, _, level = cell_name.partition(":")
        if modality == CONTROL:
            level = "none"
        encoding = (
            float(cell["determinism"]),
            float(cell["stated_probability"]),
            float(cell["item_count"]),
            float(cell["specificity"]),
        )
        tokens.append(
            InformationToken(
                token_id=token_id,
                modality=modality,
                level=level,
                artifact_text=str(cell["text"]),
                encoding=encoding,
                virtue=None if modality == CONTROL else virtue,
            )
        )

    controls = [t for t in tokens if t.is_control]
    if len(controls) != 1:
        raise ValueError(f"expected exactly one control token, found {len(controls)}")
    return tokens


def encode_token(token: InformationToken) -> np.ndarray:
    """Numeric encoding of a token; identical calls give identical vectors."""
    if token.is_control:
        return np.zeros(len(ENCODING_DIMS))
    return np.asarray(token.encoding, dtype=np.float64)


@dataclass
class TokenDistinctnessReport:
    token_ids: list[str]
    pairwise_distance: np.ndarray  # symmetric, zero diagonal; normalized space
    min_offdiagonal: float  # over non-control (T1..T6) pairs
    threshold: float
    sufficient: bool
    item_scale: float = 12.0
    notes: list[str] = field(default_factory=list)


def check_distinctness(
    tokens: list[InformationToken],
    threshold: float = 0.1,
    item_scale: float | None = None,
) -> TokenDistinctnessReport:
    """Pairwise encoding distances; sufficient iff every non-control pair
    is separated by strictly more than `threshold`.

    Distances are Euclidean over the encodings with item_count divided by
    a fixed `item_scale` so all dimensions live on comparable [0, 1]-ish
    ranges. The scale is fixed (not data-dependent): scaling every
    encoding by c scales every distance by c.
    """
    if item_scale is None:
        item_scale = float(DEFAULT_TOKEN_TEMPLATES["item_scale"])
    if item_scale <= 0:
        raise ValueError("item_scale must be positive")

    vectors = np.stack([encode_token(t) for t in tokens])
    scale = np.array([1.0, 1.0, item_scale, 1.0])
    normed = vectors / scale
    diff = normed[:, None, :] - normed[None, :, :]
    distances = np.sqrt((diff**2).sum(axis=2))

    non_control = [i for i, t in enumerate(tokens) if not t.is_control]
    offdiag = [
        distances[i, j] for i in non_control for j in non_control if i < j
    ]
    min_off = float(min(offdiag)) if offdiag else float("nan")

    return TokenDistinctnessReport(
        token_ids=[t.token_id for t in tokens],
        pairwise_distance=distances,
        min_offdiagonal=min_off,
        threshold=threshold,
        sufficient=bool(offdiag) and min_off > threshold,
        item_scale=item_scale,
    )
