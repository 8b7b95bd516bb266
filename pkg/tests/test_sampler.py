"""Tests for the probability vector generators and the shuffle."""

from __future__ import annotations

import math
from collections import Counter
from itertools import permutations

import numpy as np
import pytest

from probvec.models import (
    InvalidPermutationError,
    MethodId,
    Permutation,
    ProbabilityVector,
    SimplexViolationError,
)
from probvec.rngcore import MersenneTwister
from probvec.sampler import (
    DegenerateSumError,
    SamplerError,
    TrigDomainError,
    UnsupportedMethodError,
    apply_permutation,
    random_permutation,
    sample,
    sample_iid,
    sample_normalization_biased,
    sample_trig_biased,
    sample_trig_exact,
    sample_unbiased,
    shuffle,
    trig_exact_failure_rate,
)
from probvec.stats import component_means, histogram, max_component_tail, total_variation


def _assert_on_simplex(p: ProbabilityVector) -> None:
    assert all(pj >= 0.0 for pj in p.components)
    assert math.fsum(p.components) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.unit
class TestInjectedDraws:
    def test_iid_normalizes_draws(self, scripted):
        p = sample_iid(3, scripted(0.2, 0.3, 0.5))
        assert p.components == pytest.approx((0.2, 0.3, 0.5))
        assert p.method is MethodId.IID
        assert p.draws_used == 3

    def test_iid_retries_a_zero_sum(self, scripted):
        p = sample_iid(2, scripted(0.0, 0.0, 0.25, 0.75))
        assert p.components == pytest.approx((0.25, 0.75))
        assert p.draws_used == 4

    def test_iid_gives_up_after_retry_limit(self, scripted):
        with pytest.raises(DegenerateSumError):
            sample_iid(2, scripted(*[0.0] * 6), max_retries=2)

    def test_normalization_d2(self, scripted):
        p = sample_normalization_biased(2, scripted(0.3))
        assert p.components == pytest.approx((0.3, 0.7))

    def test_normalization_d3(self, scripted):
        p = sample_normalization_biased(3, scripted(0.5, 0.5))
        assert p.components == pytest.approx((0.5, 0.25, 0.25))
        assert p.draws_used == 2

    def test_trig_d2(self, scripted):
        p = sample_trig_biased(2, scripted(0.3))
        assert p.components == pytest.approx((0.3, 0.7))

    def test_trig_d3(self, scripted):
        p = sample_trig_biased(3, scripted(0.5, 0.5))
        assert p.components == pytest.approx((0.25, 0.25, 0.5))

    @pytest.mark.parametrize("d", [2, 3, 4, 7, 16, 50])
    def test_trig_matches_closed_form(self, rng, scripted, d):
        for _ in range(200):
            t = rng.uniforms(d - 1)
            p = sample_trig_biased(d, scripted(*t))
            padded = [0.0, *t]  # t_0 = 0, so p_1 is the bare product
            for j in range(1, d + 1):
                expected = (1.0 - padded[j - 1]) * math.prod(t[j - 1 :])
                assert abs(p.components[j - 1] - expected) <= 1e-14

    def test_trig_exact_d2(self, scripted):
        p = sample_trig_exact(2, scripted(0.25))
        assert p.components == pytest.approx((0.75, 0.25))

    def test_trig_exact_d3_success(self, scripted):
        # t_2 = 0.2 is drawn first, then t_1 = 0.3; sum <= 1
        p = sample_trig_exact(3, scripted(0.2, 0.3))
        assert p.components == pytest.approx((0.5, 0.3, 0.2))

    def test_trig_exact_reports_failing_index(self, scripted):
        with pytest.raises(TrigDomainError) as excinfo:
            sample_trig_exact(3, scripted(0.9, 0.5))
        assert excinfo.value.index == 1
        assert excinfo.value.argument == pytest.approx(5.0)
        assert excinfo.value.draws_used == 2

    def test_fisher_yates_d2_swaps_on_zero(self, scripted):
        assert random_permutation(2, scripted(0.0)).mapping == (2, 1)

    def test_fisher_yates_d3_identity(self, scripted):
        assert random_permutation(3, scripted(0.99, 0.99)).mapping == (1, 2, 3)

    def test_apply_permutation(self):
        p = ProbabilityVector((0.5, 0.3, 0.2), MethodId.NORMALIZATION)
        q = apply_permutation(p, Permutation((3, 1, 2)))
        assert q.components == (0.2, 0.5, 0.3)
        assert q.shuffled

    def test_unbiased_consumes_biased_then_permutation_draws(self, scripted):
        source = scripted(0.5, 0.5, 0.0, 0.0)
        q = sample_unbiased(MethodId.NORMALIZATION, 3, source)
        # i=3, j=1 swaps p1 and p3; i=2, j=1 swaps positions 1 and 2
        assert q.components == pytest.approx((0.25, 0.25, 0.5))
        assert source.draw_count == 4
        assert q.draws_used == 4


@pytest.mark.unit
class TestDrawBudgets:
    @pytest.mark.parametrize("d", [2, 3, 5, 17, 256])
    def test_counts(self, d):
        rng = MersenneTwister(1)
        sample_iid(d, rng)
        assert rng.draw_count == d

        before = rng.draw_count
        sample_normalization_biased(d, rng)
        assert rng.draw_count - before == d - 1

        before = rng.draw_count
        sample_trig_biased(d, rng)
        assert rng.draw_count - before == d - 1

        for method in (MethodId.NORMALIZATION, MethodId.TRIG):
            before = rng.draw_count
            q = sample_unbiased(method, d, rng)
            assert rng.draw_count - before == 2 * (d - 1)
            assert q.draws_used == 2 * (d - 1)

    def test_trig_exact_consumes_draws_even_on_failure(self, rng):
        for _ in range(50):
            before = rng.draw_count
            try:
                sample_trig_exact(6, rng)
            except TrigDomainError:
                pass
            assert rng.draw_count - before == 5


@pytest.mark.unit
class TestInvariants:
    @pytest.mark.parametrize(
        "method", [MethodId.IID, MethodId.NORMALIZATION, MethodId.TRIG]
    )
    @pytest.mark.parametrize("d", [2, 3, 10, 64])
    def test_outputs_lie_on_simplex(self, rng, method, d):
        for shuffled in (False, True):
            for _ in range(200):
                _assert_on_simplex(sample(method, d, rng, shuffled=shuffled))

    def test_shuffle_preserves_multiset(self, rng):
        p = sample_normalization_biased(8, rng)
        q = shuffle(p, rng)
        assert sorted(q.components) == sorted(p.components)

    def test_every_permutation_reachable(self, rng):
        seen = {random_permutation(3, rng).mapping for _ in range(600)}
        assert seen == set(permutations((1, 2, 3)))

    def test_same_seed_same_vectors(self):
        a = [sample(MethodId.TRIG, 5, MersenneTwister(3), shuffled=True) for _ in range(3)]
        b = [sample(MethodId.TRIG, 5, MersenneTwister(3), shuffled=True) for _ in range(3)]
        assert a == b


@pytest.mark.unit
class TestErrors:
    def test_dimension_below_two(self, rng):
        with pytest.raises(SamplerError):
            sample_normalization_biased(1, rng)

    @pytest.mark.parametrize("method", [MethodId.IID, MethodId.TRIG_EXACT])
    def test_sample_unbiased_rejects_method(self, rng, method):
        with pytest.raises(UnsupportedMethodError):
            sample_unbiased(method, 4, rng)

    def test_trig_exact_cannot_be_shuffled(self, rng):
        with pytest.raises(UnsupportedMethodError):
            sample(MethodId.TRIG_EXACT, 4, rng, shuffled=True)

    def test_iid_shuffle_is_ignored(self, scripted):
        p = sample(MethodId.IID, 2, scripted(0.25, 0.75), shuffled=True)
        assert p.components == pytest.approx((0.25, 0.75))
        assert not p.shuffled

    def test_permutation_dimension_mismatch(self):
        p = ProbabilityVector((0.5, 0.5), MethodId.IID)
        with pytest.raises(SamplerError):
            apply_permutation(p, Permutation.identity(3))

    def test_invalid_permutation(self):
        with pytest.raises(InvalidPermutationError):
            Permutation((1, 1, 3))

    def test_vector_must_sum_to_one(self):
        with pytest.raises(SimplexViolationError):
            ProbabilityVector((0.5, 0.6), MethodId.IID)

    def test_method_parse(self):
        assert MethodId.parse("trig-exact") is MethodId.TRIG_EXACT
        with pytest.raises(ValueError):
            MethodId.parse("dirichlet")


def _stick_breaking_means(d: int) -> tuple[float, ...]:
    return tuple(2.0**-j for j in range(1, d)) + (2.0 ** -(d - 1),)


@pytest.mark.slow
class TestDistributions:
    N = 1_000_000

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_normalization_biased_means(self, d):
        rng = MersenneTwister(1)
        means = component_means(
            (sample_normalization_biased(d, rng) for _ in range(self.N)), d
        ).means
        assert means == pytest.approx(_stick_breaking_means(d), abs=0.003)

    def test_trig_biased_means_mirror_normalization(self):
        rng = MersenneTwister(2)
        means = component_means(
            (sample_trig_biased(5, rng) for _ in range(self.N)), 5
        ).means
        assert means == pytest.approx((0.0625, 0.0625, 0.125, 0.25, 0.5), abs=0.003)

    @pytest.mark.parametrize("method", [MethodId.NORMALIZATION, MethodId.TRIG])
    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_unbiased_means_are_flat(self, method, d):
        rng = MersenneTwister(3)
        means = component_means(
            (sample_unbiased(method, d, rng) for _ in range(self.N)), d
        ).means
        assert means == pytest.approx((1.0 / d,) * d, abs=0.003)

    def test_iid_means_are_flat(self):
        rng = MersenneTwister(8)
        means = component_means((sample_iid(4, rng) for _ in range(self.N)), 4).means
        assert means == pytest.approx((0.25,) * 4, abs=0.003)

    def test_all_permutations_equally_likely(self):
        rng = MersenneTwister(9)
        counts = Counter(random_permutation(4, rng).mapping for _ in range(self.N))
        assert set(counts) == set(permutations((1, 2, 3, 4)))
        for count in counts.values():
            assert count / self.N == pytest.approx(1.0 / 24.0, abs=0.002)

    @pytest.mark.parametrize("method", [MethodId.NORMALIZATION, MethodId.TRIG])
    def test_shuffled_first_and_last_components_share_a_law(self, method):
        d = 5
        rng = MersenneTwister(10)
        first = np.empty(self.N)
        last = np.empty(self.N)
        for i in range(self.N):
            q = sample_unbiased(method, d, rng).components
            first[i] = q[0]
            last[i] = q[-1]
        assert total_variation(histogram(first, 64), histogram(last, 64)) < 0.01

    def test_iid_misses_large_components(self):
        rng = MersenneTwister(4)
        iid = max_component_tail((sample_iid(4, rng) for _ in range(self.N)), 0.8)
        norm = max_component_tail(
            (sample_unbiased(MethodId.NORMALIZATION, 4, rng) for _ in range(self.N)),
            0.8,
        )
        assert iid < 0.01
        assert norm > 0.15

    def test_trig_exact_failure_rate_d5(self):
        # success iff t_1 + ... + t_4 <= 1, probability 1/4!
        rate = trig_exact_failure_rate(5, 100_000, MersenneTwister(5))
        assert rate == pytest.approx(1.0 - 1.0 / 24.0, abs=0.05)

    def test_trig_exact_failure_rate_d2_is_zero(self, rng):
        assert trig_exact_failure_rate(2, 1000, rng) == 0.0


@pytest.mark.slow
def test_simplex_property_suite():
    picker = MersenneTwister(6)
    rng = MersenneTwister(7)
    methods = list(MethodId)
    for case in range(10_000):
        d = 2 + int(picker.next_uniform() * 1023)
        method = methods[case % len(methods)]
        shuffled = method in (MethodId.NORMALIZATION, MethodId.TRIG) and case % 2 == 0
        try:
            p = sample(method, d, rng, shuffled=shuffled)
        except TrigDomainError:
            continue
        assert p.dim == d
        assert min(p.components) >= 0.0
        assert abs(math.fsum(p.components) - 1.0) <= 1e-12
