"""Seedable pseudo-random probability vectors, unbiased shuffles and pure states."""

from probvec.models import (
    BenchRecord,
    MethodId,
    Permutation,
    ProbabilityVector,
    ProbVecError,
    PureState,
)
from probvec.rngcore import MersenneTwister, ScriptedSource, UniformSource, seed_rng
from probvec.sampler import sample, sample_unbiased

__version__ = "1.0.0"

__all__ = [
    "BenchRecord",
    "MersenneTwister",
    "MethodId",
    "Permutation",
    "ProbVecError",
    "ProbabilityVector",
    "PureState",
    "ScriptedSource",
    "UniformSource",
    "sample",
    "sample_unbiased",
    "seed_rng",
]
