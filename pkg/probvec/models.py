"""
Data models for probvec.

Frozen dataclasses for the generated objects (probability vectors,
permutations, pure states, benchmark records) and the root of the package's
exception hierarchy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from probvec.config import SUM_TOLERANCE


class ProbVecError(Exception):
    """Base exception for every error raised by probvec."""

    pass


class SimplexViolationError(ProbVecError):
    """Raised when a vector or state breaks its normalization invariants."""

    pass


class InvalidPermutationError(ProbVecError):
    """Raised when a mapping is not a bijection on 1..d."""

    pass


class MethodId(str, Enum):
    """Generation procedure that produced a probability vector."""

    IID = "iid"
    NORMALIZATION = "norm"
    TRIG = "trig"
    TRIG_EXACT = "trig-exact"

    @classmethod
    def parse(cls, text: str) -> MethodId:
        """Look up a method by its serialized name.

        Raises:
            ValueError: If *text* names no method.
        """
        for method in cls:
            if method.value == text:
                return method
        choices = ", ".join(m.value for m in cls)
        raise ValueError(f"Unknown method '{text}' (expected one of: {choices})")

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ProbabilityVector:
    """A point on the probability simplex plus its provenance.

    Attributes:
        components: The d probabilities p_1..p_d, in order.
        method: Procedure that generated the components.
        shuffled: Whether a random permutation was applied.
        draws_used: Uniform variates consumed to produce this vector.
    """

    components: tuple[float, ...]
    method: MethodId
    shuffled: bool = False
    draws_used: int = 0

    def __post_init__(self) -> None:
        if len(self.components) < 2:
            raise SimplexViolationError(
                f"A probability vector needs d >= 2 components, got {len(self.components)}"
            )
        if min(self.components) < 0.0:
            raise SimplexViolationError(f"Negative component in {self.components}")
        total = math.fsum(self.components)
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise SimplexViolationError(
                f"Components sum to {total!r}, not 1 within {SUM_TOLERANCE}"
            )

    @property
    def dim(self) -> int:
        return len(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, index: int) -> float:
        return self.components[index]

    def __str__(self) -> str:
        values = ", ".join(f"{p:.6f}" for p in self.components)
        flag = "shuffled" if self.shuffled else "biased"
        return f"{self.method}[{flag}, draws={self.draws_used}]({values})"


@dataclass(frozen=True)
class Permutation:
    """A rearrangement (k_1, ..., k_d) of the indices 1..d."""

    mapping: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.mapping) != list(range(1, len(self.mapping) + 1)):
            raise InvalidPermutationError(
                f"{self.mapping} is not a permutation of 1..{len(self.mapping)}"
            )

    @property
    def dim(self) -> int:
        return len(self.mapping)

    @classmethod
    def identity(cls, d: int) -> Permutation:
        return cls(tuple(range(1, d + 1)))


@dataclass(frozen=True)
class PureState:
    """A unit vector of d complex amplitudes c_j = sqrt(p_j) * exp(i * phi_j)."""

    amplitudes: tuple[complex, ...]

    def __post_init__(self) -> None:
        norm_sq = math.fsum(abs(c) ** 2 for c in self.amplitudes)
        if abs(norm_sq - 1.0) > SUM_TOLERANCE:
            raise SimplexViolationError(
                f"State has squared norm {norm_sq!r}, not 1 within {SUM_TOLERANCE}"
            )

    @property
    def dim(self) -> int:
        return len(self.amplitudes)

    @property
    def probabilities(self) -> tuple[float, ...]:
        """Measurement probabilities |c_j|^2 in the computational basis."""
        return tuple(abs(c) ** 2 for c in self.amplitudes)


@dataclass(frozen=True)
class BenchRecord:
    """Timing of one batch of unbiased vectors.

    Attributes:
        method: Generation method that was timed.
        dim: Dimension d of the vectors.
        reps: Number of vectors generated inside the timed region.
        total_seconds: Wall-clock duration of the timed region.
    """

    method: MethodId
    dim: int
    reps: int
    total_seconds: float

    def __post_init__(self) -> None:
        if self.reps < 1:
            raise ValueError(f"reps must be >= 1, got {self.reps}")
        if self.total_seconds <= 0.0:
            raise ValueError(f"total_seconds must be positive, got {self.total_seconds}")

    @property
    def per_vector_seconds(self) -> float:
        return self.total_seconds / self.reps
