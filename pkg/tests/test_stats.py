"""Tests for component means, histograms and the tail/simplex statistics."""

from __future__ import annotations

import math

import numpy as np
import pytest

from probvec.models import MethodId, ProbabilityVector
from probvec.rngcore import MersenneTwister
from probvec.sampler import sample_normalization_biased, sample_unbiased
from probvec.stats import (
    BinMismatchError,
    ComponentMeans,
    DimensionMismatchError,
    EmptyHistogramError,
    EmptyInputError,
    Histogram,
    ValueOutOfRangeError,
    accumulate,
    chi_square_uniformity,
    component_histogram,
    component_means,
    export_simplex_points,
    histogram,
    max_component_tail,
    total_variation,
)


def _vec(*components: float) -> ProbabilityVector:
    return ProbabilityVector(tuple(components), MethodId.IID)


@pytest.mark.unit
class TestComponentMeans:
    def test_accumulate_and_means(self):
        means = ComponentMeans(dim=2)
        accumulate(means, _vec(0.2, 0.8))
        accumulate(means, _vec(0.6, 0.4))
        assert means.count == 2
        assert means.means == pytest.approx((0.4, 0.6))

    def test_means_sum_to_one(self):
        means = component_means([_vec(0.1, 0.2, 0.7), _vec(0.3, 0.3, 0.4)], 3)
        assert math.fsum(means.means) == pytest.approx(1.0, abs=1e-9)

    def test_merge(self):
        a = component_means([_vec(0.2, 0.8)], 2)
        b = component_means([_vec(0.6, 0.4), _vec(0.4, 0.6)], 2)
        merged = a.merge(b)
        assert merged.count == 3
        assert merged.means == pytest.approx((0.4, 0.6))

    def test_empty_means_raise(self):
        with pytest.raises(EmptyInputError):
            ComponentMeans(dim=3).means

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            ComponentMeans(dim=3).accumulate(_vec(0.5, 0.5))


@pytest.mark.unit
class TestHistogram:
    def test_binning_edges(self):
        assert histogram([0.0, 0.5, 0.999], bins=2).counts.tolist() == [1, 2]

    def test_one_lands_in_last_bin(self):
        assert histogram([1.0], bins=4).counts.tolist() == [0, 0, 0, 1]

    def test_counts_sum_to_observations(self, rng):
        hist = histogram(rng.uniforms(1000), bins=17)
        assert hist.total == 1000

    def test_out_of_range(self):
        with pytest.raises(ValueOutOfRangeError):
            histogram([0.2, 1.5], bins=4)

    def test_empty_values_give_empty_histogram(self):
        hist = histogram([], bins=3)
        assert hist.total == 0
        with pytest.raises(EmptyHistogramError):
            hist.frequencies

    def test_density_integrates_to_one(self):
        hist = histogram([0.1, 0.2, 0.6, 0.9], bins=4)
        assert float((hist.density * hist.width).sum()) == pytest.approx(1.0)
        assert hist.edges.tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]

    def test_merge_requires_same_bins(self):
        merged = Histogram([1, 2]).merge(Histogram([3, 4]))
        assert merged.counts.tolist() == [4, 6]
        with pytest.raises(BinMismatchError):
            Histogram([1, 2]).merge(Histogram([1, 2, 3]))

    def test_component_histogram(self):
        samples = [_vec(0.1, 0.9), _vec(0.6, 0.4), _vec(0.7, 0.3)]
        assert component_histogram(samples, 1, 2).counts.tolist() == [1, 2]
        assert component_histogram(samples, 2, 2).counts.tolist() == [2, 1]

    def test_component_beyond_dimension(self):
        with pytest.raises(DimensionMismatchError):
            component_histogram([_vec(0.5, 0.5)], 3, 4)


@pytest.mark.unit
class TestTotalVariation:
    def test_identical_is_zero(self):
        assert total_variation(Histogram([3, 1]), Histogram([6, 2])) == 0.0

    def test_disjoint_is_one(self):
        assert total_variation(Histogram([5, 0]), Histogram([0, 5])) == 1.0

    def test_bin_mismatch(self):
        with pytest.raises(BinMismatchError):
            total_variation(Histogram([1, 1]), Histogram([1, 1, 1]))

    def test_empty_histogram(self):
        with pytest.raises(EmptyHistogramError):
            total_variation(Histogram([0, 0]), Histogram([1, 1]))

    def test_chi_square_of_flat_histogram(self):
        assert chi_square_uniformity(Histogram([10, 10, 10])) == 0.0


@pytest.mark.unit
class TestTailAndSimplex:
    def test_tail_fraction(self):
        samples = [_vec(0.9, 0.1), _vec(0.5, 0.5), _vec(0.15, 0.85), _vec(0.8, 0.2)]
        assert max_component_tail(samples, 0.8) == 0.5

    def test_tail_empty(self):
        with pytest.raises(EmptyInputError):
            max_component_tail([], 0.8)

    def test_tail_threshold_range(self):
        with pytest.raises(ValueOutOfRangeError):
            max_component_tail([_vec(0.5, 0.5)], 1.0)

    def test_simplex_corners_and_centroid(self):
        third = 1.0 / 3.0
        points = export_simplex_points(
            [_vec(1.0, 0.0, 0.0), _vec(0.0, 1.0, 0.0), _vec(0.0, 0.0, 1.0),
             _vec(third, third, 1.0 - 2 * third)]
        )
        assert points[0] == pytest.approx((0.0, 0.0))
        assert points[1] == pytest.approx((1.0, 0.0))
        assert points[2] == pytest.approx((0.5, math.sqrt(3.0) / 2.0))
        assert points[3] == pytest.approx((0.5, math.sqrt(3.0) / 6.0))

    def test_simplex_needs_three_components(self):
        with pytest.raises(DimensionMismatchError):
            export_simplex_points([_vec(0.5, 0.5)])


@pytest.mark.slow
class TestMarginals:
    N = 1_000_000

    def test_mt_uniforms_pass_chi_square(self):
        hist = histogram(np.asarray(MersenneTwister(11).uniforms(self.N)), bins=100)
        # chi-square critical value for 99 degrees of freedom at p = 1e-6
        assert chi_square_uniformity(hist) < 181.0

    def test_mt_uniforms_have_mean_one_half(self):
        mean = float(np.mean(MersenneTwister(12).uniforms(self.N)))
        assert mean == pytest.approx(0.5, abs=0.002)

    def test_biased_normalization_first_component_is_flat(self):
        rng = MersenneTwister(13)
        hist = component_histogram(
            (sample_normalization_biased(5, rng) for _ in range(self.N)), 1, 64
        )
        expected = self.N / 64
        sigma = math.sqrt(self.N * (1.0 / 64) * (1.0 - 1.0 / 64))
        assert np.all(np.abs(hist.counts - expected) <= 6.0 * sigma)

    @pytest.mark.parametrize("d", [3, 8, 16])
    def test_unbiased_methods_share_first_marginal(self, d):
        def first_component(method: MethodId, seed: int) -> Histogram:
            rng = MersenneTwister(seed)
            samples = (sample_unbiased(method, d, rng) for _ in range(self.N))
            return component_histogram(samples, 1, 64)

        norm = first_component(MethodId.NORMALIZATION, 100 + d)
        trig = first_component(MethodId.TRIG, 200 + d)
        assert total_variation(norm, trig) < 0.01
