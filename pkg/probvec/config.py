"""
Configuration constants for probvec.

Numerical tolerances, retry limits and CLI defaults shared by every module.
Nothing here is read from the environment: a run is fully determined by its
command-line flags.
"""

from __future__ import annotations

from typing import Final

# ── Numerical tolerances ──────────────────────────────────────────────────────

SUM_TOLERANCE: Final[float] = 1e-12
MEANS_TOLERANCE: Final[float] = 1e-9

# ── Sampling ──────────────────────────────────────────────────────────────────

IID_MAX_RETRIES: Final[int] = 16
MAX_SEED: Final[int] = 2**32 - 1

# ── Benchmark harness ─────────────────────────────────────────────────────────

MIN_TIMED_SECONDS: Final[float] = 0.010
BENCH_RUNS: Final[int] = 5
BENCH_WARMUP_REPS: Final[int] = 64

# ── CLI defaults ──────────────────────────────────────────────────────────────

DEFAULT_SEED: Final[int] = 5489
DEFAULT_BINS: Final[int] = 64
DEFAULT_SAMPLES: Final[int] = 1000
DEFAULT_DIM: Final[int] = 4
DEFAULT_THRESHOLD: Final[float] = 0.8
DEFAULT_FORMAT: Final[str] = "csv"
OUTPUT_FORMATS: Final[tuple[str, ...]] = ("csv", "json")
COMMANDS: Final[tuple[str, ...]] = (
    "generate",
    "means",
    "hist",
    "tail",
    "compare",
    "simplex",
    "bench",
    "qstate",
)

# ── File emission ─────────────────────────────────────────────────────────────

# 17 significant digits round-trip every IEEE double exactly
CSV_FLOAT_FORMAT: Final[str] = "%.17g"
LOG_FORMAT: Final[str] = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
