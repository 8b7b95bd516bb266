"""
CSV and JSON emission for probvec results, and the matching readers.

Every command's result is first shaped into a pandas DataFrame with the
column layout documented for that output, then written either as CSV
(header row, '.' decimals, 17 significant digits, '\\n' line endings) or as
a JSON object carrying the run metadata next to the columns. The readers
parse both forms back, exactly.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Sequence
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from probvec.config import CSV_FLOAT_FORMAT
from probvec.models import BenchRecord, MethodId, ProbVecError, PureState
from probvec.stats import Histogram

logger = logging.getLogger(__name__)

VECTOR_PREFIX = "p"
MEANS_COLUMNS = ["component", "mean"]
HISTOGRAM_COLUMNS = ["bin_low", "bin_high", "count", "density"]
TAIL_COLUMNS = ["method", "dim", "samples", "threshold", "fraction"]
COMPARE_COLUMNS = ["bin_low", "bin_high", "norm_count", "trig_count"]
POINT_COLUMNS = ["x", "y"]
STATE_COLUMNS = ["state", "j", "re", "im"]
BENCH_COLUMNS = ["method", "dim", "reps", "total_seconds", "per_vector_seconds"]


class ReportError(ProbVecError):
    """Raised when a result file cannot be written or parsed."""

    pass


# ── Frames ────────────────────────────────────────────────────────────────────


def vectors_frame(vectors: Sequence[Sequence[float]], dim: int) -> pd.DataFrame:
    """Shape raw vectors into one row per vector.

    Args:
        vectors: Component tuples, each of length *dim*.
        dim: Dimension d; names the columns p1..pd.

    Returns:
        DataFrame with columns p1..pd (no rows when *vectors* is empty).
    """
    columns = [f"{VECTOR_PREFIX}{j}" for j in range(1, dim + 1)]
    return pd.DataFrame([list(v) for v in vectors], columns=columns, dtype=np.float64)


def means_frame(means: Sequence[float]) -> pd.DataFrame:
    """One row per component: ``component,mean`` with 1-based component index.

    Args:
        means: The component means <p_1>..<p_d>; may be empty when no vector
            was produced.

    Returns:
        DataFrame with columns MEANS_COLUMNS.
    """
    return pd.DataFrame(
        {
            "component": np.arange(1, len(means) + 1, dtype=np.int64),
            "mean": np.asarray(means, dtype=np.float64),
        }
    )


def histogram_frame(hist: Histogram) -> pd.DataFrame:
    edges = hist.edges
    density = hist.density if hist.total > 0 else np.zeros(hist.bins)
    return pd.DataFrame(
        {
            "bin_low": edges[:-1],
            "bin_high": edges[1:],
            "count": hist.counts,
            "density": density,
        }
    )


def tail_frame(
    method: MethodId, dim: int, samples: int, threshold: float, fraction: float | None
) -> pd.DataFrame:
    """Single-row tail summary.

    Args:
        method: Generation method of the samples.
        dim: Dimension d.
        samples: Vectors the fraction was measured over.
        threshold: Threshold the largest component was compared against.
        fraction: Measured fraction, or None when no vector was produced.

    Returns:
        DataFrame with columns TAIL_COLUMNS; it has no rows if *fraction* is None.
    """
    if fraction is None:
        return pd.DataFrame(columns=TAIL_COLUMNS)
    return pd.DataFrame(
        [[method.value, dim, samples, threshold, fraction]], columns=TAIL_COLUMNS
    )


def comparison_frame(norm_hist: Histogram, trig_hist: Histogram) -> pd.DataFrame:
    """Side-by-side counts of the norm and trig first-component histograms.

    Raises:
        ReportError: If the two histograms use different binnings.
    """
    if norm_hist.bins != trig_hist.bins:
        raise ReportError(f"Cannot tabulate {norm_hist.bins} bins next to {trig_hist.bins}")
    edges = norm_hist.edges
    return pd.DataFrame(
        {
            "bin_low": edges[:-1],
            "bin_high": edges[1:],
            "norm_count": norm_hist.counts,
            "trig_count": trig_hist.counts,
        }
    )


def points_frame(points: Sequence[tuple[float, float]]) -> pd.DataFrame:
    return pd.DataFrame([list(pt) for pt in points], columns=POINT_COLUMNS, dtype=np.float64)


def states_frame(states: Sequence[PureState]) -> pd.DataFrame:
    """Long-format amplitudes, one row per (state, j).

    The leading 1-based ``state`` column lets many states share one file.

    Args:
        states: Pure states, written in order.

    Returns:
        DataFrame with columns ``state, j, re, im``.
    """
    rows = [
        [s, j, c.real, c.imag]
        for s, psi in enumerate(states, start=1)
        for j, c in enumerate(psi.amplitudes, start=1)
    ]
    frame = pd.DataFrame(rows, columns=STATE_COLUMNS)
    return frame.astype({"state": np.int64, "j": np.int64, "re": np.float64, "im": np.float64})


def bench_frame(records: Sequence[BenchRecord]) -> pd.DataFrame:
    rows = [
        [r.method.value, r.dim, r.reps, r.total_seconds, r.per_vector_seconds]
        for r in records
    ]
    return pd.DataFrame(rows, columns=BENCH_COLUMNS)


# ── Writers ───────────────────────────────────────────────────────────────────


def _json_default(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def write_csv(frame: pd.DataFrame, path: str | Path) -> Path:
    """Write *frame* as ASCII CSV with a header row.

    Raises:
        ReportError: If the file cannot be written.
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(
            path,
            index=False,
            float_format=CSV_FLOAT_FORMAT,
            lineterminator="\n",
            encoding="ascii",
        )
    except OSError as e:
        raise ReportError(f"Cannot write {path}: {e}") from e
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def write_json(payload: dict[str, Any], path: str | Path) -> Path:
    """Write *payload* as an indented JSON object.

    Raises:
        ReportError: If the file cannot be written.
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="ascii", newline="\n") as f:
            json.dump(payload, f, indent=4, default=_json_default)
            f.write("\n")
    except OSError as e:
        raise ReportError(f"Cannot write {path}: {e}") from e
    logger.info(f"Wrote JSON summary to {path}")
    return path


def frame_payload(frame: pd.DataFrame, meta: dict[str, Any]) -> dict[str, Any]:
    """Run metadata plus the frame's columns as lists."""
    return {**meta, "columns": list(frame.columns), "data": frame.to_dict(orient="list")}


def states_payload(states: Sequence[PureState], meta: dict[str, Any]) -> dict[str, Any]:
    """Run metadata plus each state's amplitudes as [re, im] pairs."""
    return {
        **meta,
        "states": [[[c.real, c.imag] for c in psi.amplitudes] for psi in states],
    }


def write_frame(
    frame: pd.DataFrame, path: str | Path, fmt: str, meta: dict[str, Any]
) -> Path:
    """Write *frame* in the requested output format.

    Args:
        frame: Result table.
        path: Destination file.
        fmt: ``csv`` for the bare table, ``json`` for *meta* plus the columns.
        meta: Run metadata; only the JSON form carries it.

    Returns:
        The path written.

    Raises:
        ReportError: For an unknown format or a failed write.
    """
    if fmt == "csv":
        return write_csv(frame, path)
    if fmt == "json":
        return write_json(frame_payload(frame, meta), path)
    raise ReportError(f"Unknown output format '{fmt}'")


# ── Readers ───────────────────────────────────────────────────────────────────


def _infer_format(path: Path, fmt: str | None) -> str:
    if fmt is not None:
        return fmt
    return "json" if path.suffix.lower() == ".json" else "csv"


def read_json(path: str | Path) -> dict[str, Any]:
    path = Path(path)
    try:
        with open(path, encoding="ascii") as f:
            payload = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ReportError(f"Cannot read {path}: {e}") from e
    if not isinstance(payload, dict):
        raise ReportError(f"{path}: expected a JSON object")
    return payload


def read_frame(path: str | Path, fmt: str | None = None) -> pd.DataFrame:
    """Read a CSV file or the columns of a JSON result back into a DataFrame.

    Raises:
        ReportError: If the file is missing or malformed.
    """
    path = Path(path)
    if _infer_format(path, fmt) == "json":
        payload = read_json(path)
        try:
            return pd.DataFrame(payload["data"], columns=payload["columns"])
        except (KeyError, ValueError) as e:
            raise ReportError(f"{path}: missing or malformed columns: {e}") from e

    try:
        return pd.read_csv(path, float_precision="round_trip", encoding="ascii")
    except (OSError, ValueError) as e:
        raise ReportError(f"Cannot read {path}: {e}") from e


def _require_columns(frame: pd.DataFrame, columns: Sequence[str], path: Path) -> None:
    missing = [c for c in columns if c not in frame.columns]
    if missing:
        raise ReportError(f"{path}: missing columns {missing}")


def read_vectors(path: str | Path, fmt: str | None = None) -> list[tuple[float, ...]]:
    """Read a ``generate`` result back into component tuples.

    Args:
        path: CSV or JSON file written by ``generate``.
        fmt: ``csv`` or ``json``; inferred from the suffix when None.

    Returns:
        One tuple per stored vector, in file order.

    Raises:
        ReportError: If the file is unreadable or has non-vector columns.
    """
    frame = read_frame(path, fmt)
    if frame.columns.empty or not all(str(c).startswith(VECTOR_PREFIX) for c in frame.columns):
        raise ReportError(f"{path}: not a vectors file")
    return [tuple(float(v) for v in row) for row in frame.itertuples(index=False)]


def read_means(path: str | Path, fmt: str | None = None) -> tuple[float, ...]:
    """Read component means ordered by component index.

    Returns:
        The means <p_1>..<p_d>; empty when every attempt of the run failed.

    Raises:
        ReportError: If the file is unreadable or lacks MEANS_COLUMNS.
    """
    frame = read_frame(path, fmt)
    _require_columns(frame, MEANS_COLUMNS, Path(path))
    return tuple(float(m) for m in frame.sort_values("component")["mean"])


def read_histogram(path: str | Path, fmt: str | None = None) -> Histogram:
    """Rebuild a Histogram from the ``count`` column of a ``hist`` result.

    Raises:
        ReportError: If the file is unreadable or lacks HISTOGRAM_COLUMNS.
    """
    frame = read_frame(path, fmt)
    _require_columns(frame, HISTOGRAM_COLUMNS, Path(path))
    return Histogram(frame["count"].to_numpy(dtype=np.int64))


def read_comparison(path: str | Path, fmt: str | None = None) -> tuple[Histogram, Histogram]:
    """Rebuild the (norm, trig) histograms of a ``compare`` result.

    Raises:
        ReportError: If the file is unreadable or lacks COMPARE_COLUMNS.
    """
    frame = read_frame(path, fmt)
    _require_columns(frame, COMPARE_COLUMNS, Path(path))
    return (
        Histogram(frame["norm_count"].to_numpy(dtype=np.int64)),
        Histogram(frame["trig_count"].to_numpy(dtype=np.int64)),
    )


def read_tail(path: str | Path, fmt: str | None = None) -> float:
    """Read the measured fraction of a ``tail`` result.

    Raises:
        ReportError: If the file is unreadable, lacks TAIL_COLUMNS, or holds
            no row because the run produced no vector.
    """
    frame = read_frame(path, fmt)
    _require_columns(frame, TAIL_COLUMNS, Path(path))
    if frame.empty:
        raise ReportError(f"{path}: tail table has no measurement")
    return float(frame["fraction"].iloc[0])


def read_points(path: str | Path, fmt: str | None = None) -> list[tuple[float, float]]:
    frame = read_frame(path, fmt)
    _require_columns(frame, POINT_COLUMNS, Path(path))
    return [(float(x), float(y)) for x, y in zip(frame["x"], frame["y"])]


def read_states(path: str | Path, fmt: str | None = None) -> list[PureState]:
    """Read pure states from either the long CSV layout or the JSON pairs.

    Args:
        path: File written by ``qstate``.
        fmt: ``csv`` or ``json``; inferred from the suffix when None.

    Returns:
        States in file order; CSV rows are grouped by ``state`` and sorted by ``j``.

    Raises:
        ReportError: If the file is unreadable or malformed.
    """
    path = Path(path)
    if _infer_format(path, fmt) == "json":
        payload = read_json(path)
        try:
            return [
                PureState(tuple(complex(re, im) for re, im in amps))
                for amps in payload["states"]
            ]
        except (KeyError, TypeError, ValueError) as e:
            raise ReportError(f"{path}: malformed states: {e}") from e

    frame = read_frame(path, "csv")
    _require_columns(frame, STATE_COLUMNS, path)
    states: list[PureState] = []
    for _, group in frame.sort_values(["state", "j"]).groupby("state", sort=True):
        states.append(
            PureState(tuple(complex(re, im) for re, im in zip(group["re"], group["im"])))
        )
    return states


def read_bench(path: str | Path, fmt: str | None = None) -> list[BenchRecord]:
    """Read timing records; ``per_vector_seconds`` is recomputed, not parsed.

    Raises:
        ReportError: If the file is unreadable or lacks BENCH_COLUMNS.
        ValueError: If a row names an unknown method.
    """
    frame = read_frame(path, fmt)
    _require_columns(frame, BENCH_COLUMNS, Path(path))
    return [
        BenchRecord(
            method=MethodId.parse(str(row.method)),
            dim=int(row.dim),
            reps=int(row.reps),
            total_seconds=float(row.total_seconds),
        )
        for row in frame.itertuples(index=False)
    ]
