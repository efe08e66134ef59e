"""Seeded substream plumbing: stability, independence, input checking."""
import numpy as np
import pytest

from tokenlab.rng import derive_seed, substream


def test_same_path_same_stream():
    a = substream(42, "flow").random(10)
    b = substream(42, "flow").random(10)
    assert np.array_equal(a, b)


def test_different_paths_differ():
    a = substream(42, "flow").random(10)
    b = substream(42, "agent").random(10)
    c = substream(43, "flow").random(10)
    assert not np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_path_component_types():
    assert np.array_equal(
        substream(1, "subject", 3).random(4), substream(1, "subject", 3).random(4)
    )
    # String and int components address different streams.
    assert not np.array_equal(
        substream(1, "subject", 3).random(4), substream(1, "subject", "3").random(4)
    )


def test_frozen_stream_values():
    # Regression anchor: these values pin the generator algorithm itself.
    g = substream(7, "x")
    got = [g.random() for _ in range(3)]
    assert got == pytest.approx(
        [0.3776141476426135, 0.2714229497172622, 0.3561767239997671], abs=0.0
    )


def test_derive_seed_stable_and_frozen():
    assert derive_seed(0, "subject", 0) == derive_seed(0, "subject", 0)
    assert derive_seed(0, "subject", 0) == 14173023165257038000
    assert derive_seed(0, "subject", 0) != derive_seed(0, "subject", 1)
    assert derive_seed(0, "subject", 0) != derive_seed(1, "subject", 0)


def test_invalid_path_components():
    with pytest.raises(TypeError):
        substream(0, True)
    with pytest.raises(ValueError):
        substream(0, -1)
    with pytest.raises(ValueError):
        derive_seed(0, -5)
