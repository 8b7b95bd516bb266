"""
Uniform pseudo-random number sources.

This module provides the 32-bit Mersenne Twister (MT19937) used by every
sampler, plus a scripted source that replays a fixed sequence of uniforms
(injected draws for exact tests, or numbers dumped by an external true RNG).
All sources count the uniforms they hand out, so draw budgets such as
"2(d-1) per unbiased vector" can be checked exactly.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable
from pathlib import Path
from typing import Protocol, runtime_checkable

import numpy as np

from probvec.config import MAX_SEED
from probvec.models import ProbVecError

logger = logging.getLogger(__name__)

# MT19937 parameters
N = 624
M = 397
MATRIX_A = 0x9908B0DF
UPPER_MASK = 0x80000000
LOWER_MASK = 0x7FFFFFFF
MASK_32 = 0xFFFFFFFF
INIT_MULTIPLIER = 1812433253

_MAG01 = np.array([0, MATRIX_A], dtype=np.uint32)
_TO_UNIT = 2.0**-32

# Blocks of the twist that only read words already final for this generation
_TWIST_BLOCKS = ((0, N - M), (N - M, 2 * (N - M)), (2 * (N - M), N - 1))


class RngError(ProbVecError):
    """Base exception for uniform source errors."""

    pass


class SourceExhaustedError(RngError):
    """Raised when a scripted source has no values left."""

    pass


class InvalidUniformError(RngError):
    """Raised when a scripted value lies outside [0, 1)."""

    pass


@runtime_checkable
class UniformSource(Protocol):
    """Minimal interface every sampler draws from."""

    @property
    def draw_count(self) -> int: ...

    def next_uniform(self) -> float: ...

    def uniforms(self, n: int) -> list[float]: ...


def _twist(mt: np.ndarray) -> np.ndarray:
    """Return the next generation of the 624-word state."""
    mt = mt.copy()
    for lo, hi in _TWIST_BLOCKS:
        y = (mt[lo:hi] & UPPER_MASK) | (mt[lo + 1 : hi + 1] & LOWER_MASK)
        src = (lo + M) % N
        mt[lo:hi] = mt[src : src + (hi - lo)] ^ (y >> 1) ^ _MAG01[y & 1]

    y_last = (int(mt[N - 1]) & UPPER_MASK) | (int(mt[0]) & LOWER_MASK)
    mt[N - 1] = int(mt[M - 1]) ^ (y_last >> 1) ^ (MATRIX_A if y_last & 1 else 0)
    return mt


def _temper(mt: np.ndarray) -> np.ndarray:
    y = mt.copy()
    y ^= y >> 11
    y ^= (y << 7) & np.uint32(0x9D2C5680)
    y ^= (y << 15) & np.uint32(0xEFC60000)
    y ^= y >> 18
    return y


class MersenneTwister:
    """Seedable MT19937 generator with a monotone draw counter.

    The state is twisted a whole block at a time with numpy; tempered words
    are then handed out one by one. Initialization and tempering follow the
    published reference recurrence bit-exactly, so seed 5489 yields
    3499211612 as its first word.

    Attributes:
        seed: The 32-bit seed this generator was initialized with.
        state: Current 624-word state (one generation of the recurrence).
        index: Position of the next word in the tempered block.
    """

    def __init__(self, seed: int = 5489) -> None:
        if not 0 <= seed <= MAX_SEED:
            raise RngError(f"MT19937 seed must be an unsigned 32-bit integer, got {seed}")

        self.seed = seed
        self.state = self._init_state(seed)
        self.index = N
        self._draw_count = 0
        self._words: list[int] = []
        self._floats: list[float] = []

    @staticmethod
    def _init_state(seed: int) -> np.ndarray:
        words = [seed & MASK_32]
        for i in range(1, N):
            prev = words[-1]
            words.append((INIT_MULTIPLIER * (prev ^ (prev >> 30)) + i) & MASK_32)
        return np.array(words, dtype=np.uint32)

    def _refill(self) -> None:
        self.state = _twist(self.state)
        tempered = _temper(self.state)
        self._words = tempered.tolist()
        self._floats = (tempered.astype(np.float64) * _TO_UNIT).tolist()
        self.index = 0

    @property
    def draw_count(self) -> int:
        return self._draw_count

    def next_uint32(self) -> int:
        """Return the next raw tempered 32-bit word (counts as one draw)."""
        if self.index >= N:
            self._refill()
        word = self._words[self.index]
        self.index += 1
        self._draw_count += 1
        return word

    def next_uniform(self) -> float:
        """Return raw_word * 2**-32, a value in the half-open interval [0, 1)."""
        if self.index >= N:
            self._refill()
        value = self._floats[self.index]
        self.index += 1
        self._draw_count += 1
        return value

    def uniforms(self, n: int) -> list[float]:
        """Return the next *n* uniforms in stream order."""
        out: list[float] = []
        remaining = n
        while remaining > 0:
            if self.index >= N:
                self._refill()
            take = min(remaining, N - self.index)
            out.extend(self._floats[self.index : self.index + take])
            self.index += take
            remaining -= take
        self._draw_count += n
        return out

    def __repr__(self) -> str:
        return f"MersenneTwister(seed={self.seed}, draw_count={self._draw_count})"


# Alias used by the module-level helpers below
RngState = MersenneTwister


class ScriptedSource:
    """Replays a fixed sequence of uniforms.

    Used to inject exact draws into the samplers, and to feed numbers that
    were produced elsewhere (for instance by a hardware or quantum RNG and
    saved to a text file) through the same interface as MT19937.
    """

    def __init__(self, values: Iterable[float]) -> None:
        self._values = [float(v) for v in values]
        for position, value in enumerate(self._values):
            if not 0.0 <= value < 1.0:
                raise InvalidUniformError(
                    f"Scripted value #{position} = {value!r} is outside [0, 1)"
                )
        self._position = 0

    @classmethod
    def from_file(cls, path: str | Path) -> ScriptedSource:
        """Load one uniform per line; blank lines and '#' comments are skipped.

        Raises:
            RngError: If the file cannot be read or a line is not a number.
        """
        path = Path(path)
        try:
            lines = path.read_text(encoding="utf-8").splitlines()
        except OSError as e:
            raise RngError(f"Cannot read uniform source file {path}: {e}") from e

        values: list[float] = []
        for lineno, line in enumerate(lines, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                values.append(float(text))
            except ValueError as e:
                raise RngError(f"{path}:{lineno}: not a number: {text!r}") from e

        logger.info(f"Loaded {len(values)} uniforms from {path}")
        return cls(values)

    @property
    def draw_count(self) -> int:
        return self._position

    @property
    def remaining(self) -> int:
        return len(self._values) - self._position

    def next_uniform(self) -> float:
        if self._position >= len(self._values):
            raise SourceExhaustedError(
                f"Scripted source exhausted after {self._position} draws"
            )
        value = self._values[self._position]
        self._position += 1
        return value

    def uniforms(self, n: int) -> list[float]:
        if n > self.remaining:
            raise SourceExhaustedError(
                f"Requested {n} draws but only {self.remaining} remain"
            )
        out = self._values[self._position : self._position + n]
        self._position += n
        return out


def seed_rng(seed: int) -> RngState:
    """Return a freshly seeded MT19937 state with draw_count = 0."""
    return RngState(seed)


def next_uniform(state: UniformSource) -> float:
    """Draw one uniform in [0, 1) and advance *state*."""
    return state.next_uniform()


def next_uint32(state: RngState) -> int:
    """Draw one raw 32-bit MT19937 word and advance *state*."""
    return state.next_uint32()


def draw_count(state: UniformSource) -> int:
    """Number of uniforms produced by *state* since seeding."""
    return state.draw_count
