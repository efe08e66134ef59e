"""Deterministic random streams.

Every stochastic component in the lab draws from numpy's PCG64 generator,
seeded through ``SeedSequence`` so that one master seed fans out into
independent, reproducible substreams. Substream identity is a path of
labels (strings or ints); the same path always yields the same stream,
regardless of creation order.
"""
from __future__ import annotations

import hashlib

import numpy as np

__all__ = ["substream", "derive_seed"]


def _path_key(part: int | str) -> int:
    if isinstance(part, bool):
        raise TypeError("bool is not a valid stream path component")
    if isinstance(part, int):
        if part < 0:
            raise ValueError(f"negative path component: {part}")
        return part
    digest = hashlib.sha256(part.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def substream(seed: int, *path: int | str) -> np.random.Generator:
    """A PCG64 generator for the stream identified by (seed, *path)."""
    key = tuple(_path_key(p) for p in path)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def derive_seed(seed: int, *path: int | str) -> int:
    """A uint64 seed derived from (seed, *path); stable across runs."""
    key = tuple(_path_key(p) for p in path)
    state = np.random.SeedSequence(seed, spawn_key=key).generate_state(1, dtype=np.uint64)
    return int(state[0])
