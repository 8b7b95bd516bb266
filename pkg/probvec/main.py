"""
probvec - pseudo-random probability vector generator

Main entry point. Each command runs one pipeline deterministically from its
seed, writes a CSV or JSON result for external plotting, and prints a one-line
summary (command, seed, draws consumed, output path) to standard output.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from pythonjsonlogger import jsonlogger

from probvec import bench, quantum, report_writer, sampler, stats
from probvec.config import (
    BENCH_RUNS,
    COMMANDS,
    DEFAULT_BINS,
    DEFAULT_DIM,
    DEFAULT_FORMAT,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_THRESHOLD,
    LOG_FORMAT,
    MAX_SEED,
    OUTPUT_FORMATS,
)
from probvec.models import MethodId, ProbabilityVector, ProbVecError
from probvec.rngcore import MersenneTwister, seed_rng

logger = logging.getLogger(__name__)


class ConfigError(ProbVecError, ValueError):
    """Raised for invalid flag values or flag combinations."""

    pass


@dataclass
class RunConfig:
    """Validated configuration of one CLI run.

    Attributes:
        command: Pipeline to execute (see config.COMMANDS).
        method: Generation method for the sampling commands.
        dim: Dimension d (the largest d for ``bench``).
        samples: Vectors to draw (initial repetitions for ``bench``).
        seed: MT19937 seed.
        bins: Histogram bins for ``hist`` and ``compare``.
        threshold: Tail threshold for ``tail``.
        shuffle: Whether sampled vectors are shuffled.
        output_path: Destination file; defaults to ``<command>.<format>``.
        format: ``csv`` or ``json``.
        component: 1-based component binned by ``hist``.
        runs: Timing repetitions per point for ``bench``.
    """

    command: str
    method: MethodId = MethodId.NORMALIZATION
    dim: int = DEFAULT_DIM
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    bins: int = DEFAULT_BINS
    threshold: float = DEFAULT_THRESHOLD
    shuffle: bool = False
    output_path: Path | None = None
    format: str = DEFAULT_FORMAT
    component: int = 1
    runs: int = BENCH_RUNS

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"[CONFIG] Unknown command '{self.command}'")
        if self.dim < 2:
            raise ConfigError(f"[CONFIG] --dim must be >= 2, got {self.dim}")
        if self.samples < 1:
            raise ConfigError(f"[CONFIG] --samples must be >= 1, got {self.samples}")
        if self.bins < 2:
            raise ConfigError(f"[CONFIG] --bins must be >= 2, got {self.bins}")
        if not 0.0 < self.threshold < 1.0:
            raise ConfigError(
                f"[CONFIG] --threshold must lie in (0, 1), got {self.threshold}"
            )
        if not 0 <= self.seed <= MAX_SEED:
            raise ConfigError(
                f"[CONFIG] --seed must be an unsigned 32-bit integer, got {self.seed}"
            )
        if self.format not in OUTPUT_FORMATS:
            raise ConfigError(f"[CONFIG] --format must be one of {OUTPUT_FORMATS}")
        if not 1 <= self.component <= self.dim:
            raise ConfigError(
                f"[CONFIG] --component must lie in 1..{self.dim}, got {self.component}"
            )
        if self.runs < 1:
            raise ConfigError(f"[CONFIG] --runs must be >= 1, got {self.runs}")

        if self.method is MethodId.TRIG_EXACT and self.shuffle:
            raise ConfigError(
                "[CONFIG] --shuffle cannot be combined with --method trig-exact\n"
                "  → the exact inversion is not a valid input for the shuffle"
            )
        if self.method is MethodId.IID and self.shuffle:
            logger.warning("--shuffle has no effect with --method iid (already unbiased)")
        if self.command == "simplex" and self.dim != 3:
            raise ConfigError(f"[CONFIG] simplex export needs --dim 3, got {self.dim}")
        if self.command == "qstate" and self.method not in sampler.UNBIASED_METHODS:
            raise ConfigError(
                f"[CONFIG] qstate needs --method norm or trig, got {self.method}"
            )

    @property
    def output(self) -> Path:
        if self.output_path is not None:
            return self.output_path
        return Path(f"{self.command}.{self.format}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> RunConfig:
        """Build a validated config from parsed command-line arguments."""
        try:
            method = MethodId.parse(args.method)
        except ValueError as e:
            raise ConfigError(f"[CONFIG] {e}") from e

        return cls(
            command=args.command,
            method=method,
            dim=args.dim,
            samples=args.samples,
            seed=args.seed,
            bins=args.bins,
            threshold=args.threshold,
            shuffle=args.shuffle,
            output_path=args.out,
            format=args.format,
            component=args.component,
            runs=args.runs,
        )


@dataclass
class RunSummary:
    """Outcome of one run, printed as the one-line summary."""

    command: str
    seed: int
    draws: int
    output: Path
    extras: dict[str, Any] = field(default_factory=dict)

    def __str__(self) -> str:
        parts = [
            self.command,
            f"seed={self.seed}",
            f"draws={self.draws}",
            f"output={self.output}",
        ]
        parts.extend(f"{key}={value}" for key, value in self.extras.items())
        return " ".join(parts)


@dataclass
class _Tally:
    attempts: int = 0
    failures: int = 0

    @property
    def failure_rate(self) -> float:
        return self.failures / self.attempts if self.attempts else 0.0

    @property
    def all_failed(self) -> bool:
        return self.attempts > 0 and self.failures == self.attempts


def _iter_samples(
    config: RunConfig, rng: MersenneTwister, tally: _Tally
) -> Iterator[ProbabilityVector]:
    """Yield the successful draws; trig-exact domain failures are only counted."""
    for _ in range(config.samples):
        tally.attempts += 1
        try:
            yield sampler.sample(config.method, config.dim, rng, shuffled=config.shuffle)
        except sampler.TrigDomainError:
            tally.failures += 1


def _meta(config: RunConfig, rng: MersenneTwister, **extras: Any) -> dict[str, Any]:
    return {
        "command": config.command,
        "method": config.method.value,
        "dim": config.dim,
        "samples": config.samples,
        "seed": config.seed,
        "shuffle": config.shuffle,
        "draws": rng.draw_count,
        **extras,
    }


def _failure_extras(config: RunConfig, tally: _Tally) -> dict[str, Any]:
    if config.method is not MethodId.TRIG_EXACT:
        return {}
    logger.info(
        f"trig-exact: {tally.failures}/{tally.attempts} attempts left arcsin's domain"
    )
    return {"failures": tally.failures, "failure_rate": round(tally.failure_rate, 6)}


def _run_generate(config: RunConfig, rng: MersenneTwister) -> dict[str, Any]:
    tally = _Tally()
    vectors = [p.components for p in _iter_samples(config, rng, tally)]
    extras = _failure_extras(config, tally)
    frame = report_writer.vectors_frame(vectors, config.dim)
    report_writer.write_frame(frame, config.output, config.format, _meta(config, rng, **extras))
    return extras


def _run_means(config: RunConfig, rng: MersenneTwister) -> dict[str, Any]:
    tally = _Tally()
    means = stats.component_means(_iter_samples(config, rng, tally), config.dim)
    extras = _failure_extras(config, tally)
    if tally.all_failed:
        logger.warning("Every attempt failed; writing an empty means table")
        frame = report_writer.means_frame(())
    else:
        frame = report_writer.means_frame(means.means)
    report_writer.write_frame(frame, config.output, config.format, _meta(config, rng, **extras))
    return extras


def _run_hist(config: RunConfig, rng: MersenneTwister) -> dict[str, Any]:
    tally = _Tally()
    hist = stats.component_histogram(
        _iter_samples(config, rng, tally), config.component, config.bins
    )
    extras = {"component": config.component, **_failure_extras(config, tally)}
    frame = report_writer.histogram_frame(hist)
    report_writer.write_frame(frame, config.output, config.format, _meta(config, rng, **extras))
    return extras


def _run_tail(config: RunConfig, rng: MersenneTwister) -> dict[str, Any]:
    tally = _Tally()
    fraction: float | None = None
    try:
        fraction = stats.max_component_tail(
            _iter_samples(config, rng, tally), config.threshold
        )
    except stats.EmptyInputError:
        if not tally.all_failed:
            raise
        logger.warning("Every attempt failed; writing an empty tail table")

    extras: dict[str, Any] = {} if fraction is None else {"fraction": fraction}
    extras.update(_failure_extras(config, tally))
    frame = report_writer.tail_frame(
        config.method, config.dim, tally.attempts - tally.failures, config.threshold, fraction
    )
    report_writer.write_frame(frame, config.output, config.format, _meta(config, rng, **extras))
    return extras


def _run_compare(config: RunConfig, rng: MersenneTwister) -> dict[str, Any]:
    histograms = {}
    for method in (MethodId.NORMALIZATION, MethodId.TRIG):
        samples = (
            sampler.sample_unbiased(method, config.dim, rng) for _ in range(config.samples)
        )
        histograms[method] = stats.component_histogram(samples, 1, config.bins)

    tv = stats.total_variation(histograms[MethodId.NORMALIZATION], histograms[MethodId.TRIG])
    logger.info(f"norm vs trig first-component TV distance (d={config.dim}): {tv:.6f}")
    extras = {"total_variation": tv}
    frame = report_writer.comparison_frame(
        histograms[MethodId.NORMALIZATION], histograms[MethodId.TRIG]
    )
    report_writer.write_frame(frame, config.output, config.format, _meta(config, rng, **extras))
    return extras


def _run_simplex(config: RunConfig, rng: MersenneTwister) -> dict[str, Any]:
    tally = _Tally()
    points = stats.export_simplex_points(_iter_samples(config, rng, tally))
    extras = _failure_extras(config, tally)
    frame = report_writer.points_frame(points)
    report_writer.write_frame(frame, config.output, config.format, _meta(config, rng, **extras))
    return extras


def _run_bench(config: RunConfig, rng: MersenneTwister) -> dict[str, Any]:
    dims = bench.dimension_grid(config.dim)
    records = bench.sweep(
        (MethodId.NORMALIZATION, MethodId.TRIG), dims, config.samples, rng, runs=config.runs
    )
    extras: dict[str, Any] = {}
    if len(dims) >= 2:
        for method in (MethodId.NORMALIZATION, MethodId.TRIG):
            slope = bench.loglog_slope([r for r in records if r.method is method])
            extras[f"{method.value}_slope"] = round(slope, 3)
    frame = report_writer.bench_frame(records)
    report_writer.write_frame(frame, config.output, config.format, _meta(config, rng, **extras))
    return extras


def _run_qstate(config: RunConfig, rng: MersenneTwister) -> dict[str, Any]:
    states = [
        quantum.random_pure_state(config.dim, config.method, rng)
        for _ in range(config.samples)
    ]
    if config.format == "json":
        report_writer.write_json(
            report_writer.states_payload(states, _meta(config, rng)), config.output
        )
    else:
        report_writer.write_csv(report_writer.states_frame(states), config.output)
    return {}


_PIPELINES = {
    "generate": _run_generate,
    "means": _run_means,
    "hist": _run_hist,
    "tail": _run_tail,
    "compare": _run_compare,
    "simplex": _run_simplex,
    "bench": _run_bench,
    "qstate": _run_qstate,
}


def run(config: RunConfig) -> RunSummary:
    """Execute the pipeline selected by *config* and write its output file.

    Raises:
        ProbVecError: For sampling, statistics or output errors.
    """
    logger.info(
        f"Running {config.command}: method={config.method} d={config.dim} "
        f"samples={config.samples} seed={config.seed}"
    )
    rng = seed_rng(config.seed)
    extras = _PIPELINES[config.command](config, rng)
    return RunSummary(
        command=config.command,
        seed=config.seed,
        draws=rng.draw_count,
        output=config.output,
        extras=extras,
    )


def configure_logging(
    level: str = "INFO", json_logs: bool = False, log_file: Path | None = None
) -> None:
    """Install stderr (and optional file) handlers on the root logger."""
    stream_handler = logging.StreamHandler()
    if json_logs:
        stream_handler.setFormatter(jsonlogger.JsonFormatter(LOG_FORMAT))
    else:
        stream_handler.setFormatter(logging.Formatter(LOG_FORMAT))

    handlers: list[logging.Handler] = [stream_handler]
    if log_file is not None:
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handlers.append(file_handler)

    logging.basicConfig(level=level.upper(), handlers=handlers, force=True)


def parse_arguments(argv: Sequence[str] | None = None) -> argparse.Namespace:
    """Parse command-line arguments.

    Returns:
        Parsed arguments namespace.
    """
    parser = argparse.ArgumentParser(
        prog="probvec",
        description="Generate and validate pseudo-random probability vectors",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Ten shuffled normalization-method vectors in d=4
  probvec generate --method norm --dim 4 --samples 10 --shuffle

  # Biased component means for d=5 (0.5, 0.25, 0.125, 0.0625, 0.0625)
  probvec means --method norm --dim 5 --samples 1000000 --seed 1

  # Total variation between norm and trig first-component marginals
  probvec compare --dim 8 --samples 1000000 --bins 64

  # Per-vector timings for d = 2, 4, ..., 1024
  probvec bench --dim 1024 --samples 100 --out bench.csv
        """,
    )

    parser.add_argument("command", choices=COMMANDS, help="Pipeline to run")
    parser.add_argument(
        "--method",
        default=MethodId.NORMALIZATION.value,
        choices=[m.value for m in MethodId],
        help="Generation method (default: norm)",
    )
    parser.add_argument(
        "--dim", type=int, default=DEFAULT_DIM, help=f"Dimension d (default: {DEFAULT_DIM})"
    )
    parser.add_argument(
        "--samples",
        type=int,
        default=DEFAULT_SAMPLES,
        help=f"Number of vectors, or initial reps for bench (default: {DEFAULT_SAMPLES})",
    )
    parser.add_argument(
        "--seed", type=int, default=DEFAULT_SEED, help=f"MT19937 seed (default: {DEFAULT_SEED})"
    )
    parser.add_argument(
        "--bins", type=int, default=DEFAULT_BINS, help=f"Histogram bins (default: {DEFAULT_BINS})"
    )
    parser.add_argument(
        "--threshold",
        type=float,
        default=DEFAULT_THRESHOLD,
        help=f"Max-component threshold for tail (default: {DEFAULT_THRESHOLD})",
    )
    parser.add_argument(
        "--shuffle", action="store_true", help="Shuffle components to remove positional bias"
    )
    parser.add_argument("--out", type=Path, default=None, help="Output file path")
    parser.add_argument(
        "--format",
        choices=OUTPUT_FORMATS,
        default=DEFAULT_FORMAT,
        help=f"Output format (default: {DEFAULT_FORMAT})",
    )
    parser.add_argument(
        "--component", type=int, default=1, help="Component binned by hist (default: 1)"
    )
    parser.add_argument(
        "--runs",
        type=int,
        default=BENCH_RUNS,
        help=f"Timing runs per point, median reported (default: {BENCH_RUNS})",
    )
    parser.add_argument(
        "--log-level",
        default="INFO",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level (default: INFO)",
    )
    parser.add_argument("--log-json", action="store_true", help="Emit logs as JSON lines")
    parser.add_argument("--log-file", type=Path, default=None, help="Also log to this file")

    return parser.parse_args(argv)


def main(argv: Sequence[str] | None = None) -> int:
    """Main entry point for the probvec command line."""
    args = parse_arguments(argv)
    configure_logging(args.log_level, args.log_json, args.log_file)

    try:
        config = RunConfig.from_args(args)
        summary = run(config)
    except ProbVecError as e:
        logger.error(f"{args.command} failed: {e}")
        return 1
    except OSError as e:
        logger.error(f"{args.command} failed with an I/O error: {e}")
        return 1

    print(summary)
    return 0


if __name__ == "__main__":
    sys.exit(main())
