"""
Statistical checks on generated probability vectors.

Running component means, fixed-bin marginal histograms, total variation
distance between histograms, the large-component tail fraction that exposes
the iid method's support deficiency, and ternary coordinates for d = 3
scatter plots.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np

from probvec.config import MEANS_TOLERANCE
from probvec.models import ProbabilityVector, ProbVecError

logger = logging.getLogger(__name__)

_SQRT3_OVER_2 = math.sqrt(3.0) / 2.0


class StatsError(ProbVecError):
    """Base exception for statistics errors."""

    pass


class DimensionMismatchError(StatsError):
    """Raised when vectors of different dimensions are combined."""

    pass


class ValueOutOfRangeError(StatsError):
    """Raised when a value to be binned lies outside [0, 1]."""

    pass


class BinMismatchError(StatsError):
    """Raised when histograms with different binnings are compared."""

    pass


class EmptyHistogramError(StatsError):
    """Raised when a histogram without observations is normalized."""

    pass


class EmptyInputError(StatsError):
    """Raised when a statistic is requested over no samples."""

    pass


@dataclass
class ComponentMeans:
    """Running per-component mean <p_j> over many vectors.

    Attributes:
        dim: Dimension d of the accumulated vectors.
        sums: Running sum of each component.
        count: Number of vectors accumulated.
    """

    dim: int
    sums: list[float] = field(default_factory=list)
    count: int = 0

    def __post_init__(self) -> None:
        if self.dim < 2:
            raise DimensionMismatchError(f"dim must be >= 2, got {self.dim}")
        if not self.sums:
            self.sums = [0.0] * self.dim
        elif len(self.sums) != self.dim:
            raise DimensionMismatchError(
                f"{len(self.sums)} sums given for dim={self.dim}"
            )

    def accumulate(self, p: ProbabilityVector) -> ComponentMeans:
        if p.dim != self.dim:
            raise DimensionMismatchError(
                f"Cannot accumulate a {p.dim}-vector into {self.dim}-component means"
            )
        sums = self.sums
        for j, pj in enumerate(p.components):
            sums[j] += pj
        self.count += 1
        return self

    def merge(self, other: ComponentMeans) -> ComponentMeans:
        """Combine two independent accumulations into a new instance."""
        if other.dim != self.dim:
            raise DimensionMismatchError(
                f"Cannot merge {other.dim}-component means into {self.dim}"
            )
        return ComponentMeans(
            dim=self.dim,
            sums=[a + b for a, b in zip(self.sums, other.sums)],
            count=self.count + other.count,
        )

    @property
    def means(self) -> tuple[float, ...]:
        if self.count == 0:
            raise EmptyInputError("No vectors accumulated yet")
        means = tuple(s / self.count for s in self.sums)
        total = math.fsum(means)
        if abs(total - 1.0) > MEANS_TOLERANCE:
            logger.warning(f"Component means sum to {total!r}, expected 1")
        return means


def accumulate(means: ComponentMeans, p: ProbabilityVector) -> ComponentMeans:
    """Add *p* to the running sums (sums_j += p_j, count += 1)."""
    return means.accumulate(p)


def component_means(samples: Iterable[ProbabilityVector], dim: int) -> ComponentMeans:
    """Stream *samples* into a fresh accumulator.

    Args:
        samples: Vectors of dimension *dim*; consumed once.
        dim: Dimension d.

    Returns:
        The accumulator; its ``count`` is 0 when *samples* was empty.

    Raises:
        DimensionMismatchError: If a sample is not *dim*-dimensional.
    """
    means = ComponentMeans(dim=dim)
    for p in samples:
        means.accumulate(p)
    return means


@dataclass
class Histogram:
    """Equal-width histogram over [0, 1].

    Attributes:
        counts: Observations per bin; bin b covers [b/B, (b+1)/B).
    """

    counts: np.ndarray

    def __post_init__(self) -> None:
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.counts.ndim != 1 or self.counts.size < 2:
            raise BinMismatchError("A histogram needs a 1-D array of at least 2 bins")
        if (self.counts < 0).any():
            raise StatsError("Histogram counts must be non-negative")

    @property
    def bins(self) -> int:
        return int(self.counts.size)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def width(self) -> float:
        return 1.0 / self.bins

    @property
    def edges(self) -> np.ndarray:
        return np.arange(self.bins + 1, dtype=np.float64) / self.bins

    @property
    def frequencies(self) -> np.ndarray:
        """Counts normalized to sum to one."""
        if self.total == 0:
            raise EmptyHistogramError("Histogram has no observations")
        return self.counts / self.total

    @property
    def density(self) -> np.ndarray:
        """Empirical probability density (integrates to one over [0, 1])."""
        return self.frequencies / self.width

    def merge(self, other: Histogram) -> Histogram:
        if other.bins != self.bins:
            raise BinMismatchError(f"Cannot merge {other.bins} bins into {self.bins}")
        return Histogram(self.counts + other.counts)


def histogram(values: Iterable[float] | np.ndarray, bins: int) -> Histogram:
    """Bin *values* into B equal bins; v lands in floor(v * B), with v = 1 in the last bin.

    Args:
        values: Observations in [0, 1].
        bins: Number of bins B, at least 2.

    Returns:
        Histogram whose counts sum to the number of values.

    Raises:
        BinMismatchError: If bins < 2.
        ValueOutOfRangeError: If any value lies outside [0, 1] or is NaN.
    """
    if bins < 2:
        raise BinMismatchError(f"bins must be >= 2, got {bins}")

    if not isinstance(values, np.ndarray):
        values = list(values)
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        return Histogram(np.zeros(bins, dtype=np.int64))

    bad = (arr < 0.0) | (arr > 1.0) | np.isnan(arr)
    if bad.any():
        raise ValueOutOfRangeError(
            f"{int(bad.sum())} value(s) outside [0, 1], first: {arr[bad][0]!r}"
        )

    index = np.minimum((arr * bins).astype(np.int64), bins - 1)
    return Histogram(np.bincount(index, minlength=bins))


def component_histogram(
    samples: Iterable[ProbabilityVector], component: int, bins: int
) -> Histogram:
    """Histogram of the 1-based *component* across *samples*.

    Args:
        samples: Vectors to read; consumed once.
        component: Component index j, 1-based.
        bins: Number of bins.

    Returns:
        Histogram of p_j over all samples.

    Raises:
        DimensionMismatchError: If j < 1 or j exceeds a sample's dimension.
    """
    if component < 1:
        raise DimensionMismatchError(f"component must be >= 1, got {component}")
    try:
        values = np.fromiter(
            (p.components[component - 1] for p in samples), dtype=np.float64
        )
    except IndexError as e:
        raise DimensionMismatchError(
            f"component {component} exceeds the sample dimension"
        ) from e
    return histogram(values, bins)


def total_variation(h1: Histogram, h2: Histogram) -> float:
    """Half the L1 distance between the normalized histograms, in [0, 1].

    Raises:
        BinMismatchError: If the binnings differ.
        EmptyHistogramError: If either histogram has no observations.
    """
    if h1.bins != h2.bins:
        raise BinMismatchError(f"Cannot compare {h1.bins} bins with {h2.bins}")
    return float(0.5 * np.abs(h1.frequencies - h2.frequencies).sum())


def chi_square_uniformity(hist: Histogram) -> float:
    """Pearson chi-square statistic of *hist* against equal bin probabilities.

    Returns:
        sum_b (n_b - N/B)^2 / (N/B), with B - 1 degrees of freedom.

    Raises:
        EmptyHistogramError: If *hist* has no observations.
    """
    if hist.total == 0:
        raise EmptyHistogramError("Histogram has no observations")
    expected = hist.total / hist.bins
    return float(((hist.counts - expected) ** 2).sum() / expected)


def max_component_tail(samples: Iterable[ProbabilityVector], threshold: float) -> float:
    """Fraction of *samples* whose largest component exceeds *threshold*.

    Args:
        samples: Vectors sharing one dimension; consumed once.
        threshold: Strict lower bound on max_j p_j, in (0, 1).

    Returns:
        The fraction in [0, 1].

    Raises:
        ValueOutOfRangeError: If *threshold* is outside (0, 1).
        EmptyInputError: If *samples* is empty.
        DimensionMismatchError: If the samples do not share one dimension.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueOutOfRangeError(f"threshold must lie in (0, 1), got {threshold}")

    dim: int | None = None
    total = 0
    hits = 0
    for p in samples:
        if dim is None:
            dim = p.dim
        elif p.dim != dim:
            raise DimensionMismatchError(f"Mixed dimensions {dim} and {p.dim}")
        total += 1
        if max(p.components) > threshold:
            hits += 1

    if total == 0:
        raise EmptyInputError("max_component_tail needs at least one sample")
    return hits / total


def export_simplex_points(
    samples: Iterable[ProbabilityVector],
) -> list[tuple[float, float]]:
    """Map 3-component vectors to ternary-plot coordinates.

    (p1, p2, p3) -> (p2 + p3 / 2, sqrt(3)/2 * p3): corner (1,0,0) sits at the
    origin, (0,1,0) at (1, 0) and (0,0,1) at the apex.

    Returns:
        One (x, y) point per sample, in order.

    Raises:
        DimensionMismatchError: If a sample is not 3-dimensional.
    """
    points: list[tuple[float, float]] = []
    for p in samples:
        if p.dim != 3:
            raise DimensionMismatchError(f"Simplex export needs dim=3, got {p.dim}")
        _, p2, p3 = p.components
        points.append((p2 + p3 / 2.0, _SQRT3_OVER_2 * p3))
    return points
