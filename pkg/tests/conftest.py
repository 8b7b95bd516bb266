"""Shared fixtures for the probvec test suite."""

from __future__ import annotations

import pytest

from probvec.rngcore import MersenneTwister, ScriptedSource


@pytest.fixture
def rng() -> MersenneTwister:
    return MersenneTwister(20240611)


@pytest.fixture
def scripted():
    """Factory for a source that replays the given uniforms."""

    def _make(*values: float) -> ScriptedSource:
        return ScriptedSource(values)

    return _make
