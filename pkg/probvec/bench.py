"""
Timing harness for the unbiased generators.

Measures the wall-clock cost of one shuffled probability vector as a function
of its dimension, for the normalization and trigonometric methods. Uniform
generation and the shuffle are inside the timed region; file output never is.
"""

from __future__ import annotations

import logging
import math
import statistics
import time
from collections.abc import Callable, Iterable, Sequence

import numpy as np

from probvec.config import BENCH_RUNS, BENCH_WARMUP_REPS, MIN_TIMED_SECONDS
from probvec.models import BenchRecord, MethodId, ProbVecError
from probvec.rngcore import UniformSource
from probvec.sampler import UNBIASED_METHODS, sample_unbiased

logger = logging.getLogger(__name__)

Clock = Callable[[], float]

MAX_DOUBLINGS = 40


class BenchError(ProbVecError):
    """Raised when a timing cannot be obtained."""

    pass


def format_duration(seconds: float) -> str:
    """Format seconds as a human-readable duration (e.g. "2 min, 5 s", "3.2 ms")."""
    if seconds < 1.0:
        if seconds < 1e-3:
            return f"{seconds * 1e6:.1f} us"
        return f"{seconds * 1e3:.1f} ms"
    minutes, secs = divmod(int(seconds), 60)
    if minutes > 0:
        return f"{minutes} min, {secs} s"
    return f"{seconds:.2f} s"


def _run_batch(method: MethodId, d: int, reps: int, rng: UniformSource) -> None:
    for _ in range(reps):
        sample_unbiased(method, d, rng)


def time_method(
    method: MethodId,
    d: int,
    reps: int,
    rng: UniformSource,
    clock: Clock | None = None,
    min_seconds: float = MIN_TIMED_SECONDS,
) -> BenchRecord:
    """Time *reps* unbiased vectors, doubling *reps* until the batch lasts min_seconds.

    A warm-up batch runs first and is excluded from the measurement.

    Raises:
        BenchError: If the batch never reaches min_seconds.
    """
    if method not in UNBIASED_METHODS:
        raise BenchError(f"Only norm and trig can be benchmarked, not {method}")
    if reps < 1:
        raise BenchError(f"reps must be >= 1, got {reps}")
    if clock is None:
        clock = time.perf_counter

    _run_batch(method, d, BENCH_WARMUP_REPS, rng)

    for _ in range(MAX_DOUBLINGS):
        start = clock()
        _run_batch(method, d, reps, rng)
        elapsed = clock() - start
        if elapsed >= min_seconds:
            record = BenchRecord(method=method, dim=d, reps=reps, total_seconds=elapsed)
            logger.debug(
                f"{method} d={d}: {reps} vectors in {format_duration(elapsed)} "
                f"({format_duration(record.per_vector_seconds)} per vector)"
            )
            return record
        reps *= 2

    raise BenchError(f"Timed region for {method} d={d} never reached {min_seconds}s")


def median_record(
    method: MethodId,
    d: int,
    reps: int,
    rng: UniformSource,
    runs: int = BENCH_RUNS,
    clock: Clock | None = None,
) -> BenchRecord:
    """Run time_method *runs* times and keep the run with the median per-vector time.

    Args:
        method: ``NORMALIZATION`` or ``TRIG``.
        d: Dimension.
        reps: Initial batch size handed to each run.
        rng: Source shared by all runs.
        runs: Number of runs; the lower median is kept for an even count.
        clock: Timer; ``time.perf_counter`` when None.

    Returns:
        The record of the median run.

    Raises:
        BenchError: If runs < 1, or from time_method.
    """
    if runs < 1:
        raise BenchError(f"runs must be >= 1, got {runs}")
    records = [time_method(method, d, reps, rng, clock=clock) for _ in range(runs)]
    target = statistics.median_low(r.per_vector_seconds for r in records)
    return next(r for r in records if r.per_vector_seconds == target)


def dimension_grid(max_dim: int) -> list[int]:
    """Powers of two 2, 4, ..., up to *max_dim*."""
    if max_dim < 2:
        raise BenchError(f"max_dim must be >= 2, got {max_dim}")
    return [2**k for k in range(1, int(math.log2(max_dim)) + 1)]


def sweep(
    methods: Iterable[MethodId],
    dims: Sequence[int],
    reps: int,
    rng: UniformSource,
    runs: int = BENCH_RUNS,
    clock: Clock | None = None,
) -> list[BenchRecord]:
    """Median timings for every (method, dim); one method finishes before the next starts."""
    records: list[BenchRecord] = []
    for method in methods:
        logger.info(f"Benchmarking {method} over d={list(dims)}")
        for d in dims:
            records.append(median_record(method, d, reps, rng, runs=runs, clock=clock))
    return records


def loglog_slope(records: Sequence[BenchRecord]) -> float:
    """Least-squares slope of log(per-vector time) against log(d)."""
    dims = {r.dim for r in records}
    if len(dims) < 2:
        raise BenchError("A slope needs records for at least two dimensions")
    x = np.log([r.dim for r in records])
    y = np.log([r.per_vector_seconds for r in records])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)
