"""Shared fixtures.

The default dataset takes about half a second to simulate, so it is
generated once per test session and shared read-only.
"""
from __future__ import annotations

import pytest

from tokenlab.config import default_config
from tokenlab.experiment import generate_records
from tokenlab.market import MarketConfig


@pytest.fixture(scope="session")
def default_records():
    return generate_records(default_config())


@pytest.fixture(scope="session")
def quick_market() -> MarketConfig:
    """A short session for unit tests that only need a working market."""
    return MarketConfig(steps=130)
