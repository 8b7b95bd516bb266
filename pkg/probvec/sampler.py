"""
Pseudo-random probability vector generators.

Implements the iid, normalization and trigonometric procedures for drawing
points on the probability simplex, the exact trigonometric inversion (kept to
demonstrate its instability), Fisher-Yates permutations, and the shuffle that
removes the positional bias of the sequential methods.

Every function draws its uniforms from a ``UniformSource`` so that exact
draws can be injected and draw budgets counted.
"""

from __future__ import annotations

import logging
import math

from probvec.config import IID_MAX_RETRIES
from probvec.models import MethodId, Permutation, ProbabilityVector, ProbVecError
from probvec.rngcore import UniformSource

logger = logging.getLogger(__name__)


class SamplerError(ProbVecError):
    """Base exception for sampler errors."""

    pass


class DegenerateSumError(SamplerError):
    """Raised when iid draws keep summing to zero past the retry limit."""

    pass


class UnsupportedMethodError(SamplerError):
    """Raised when a method cannot be used for the requested operation."""

    pass


class TrigDomainError(SamplerError):
    """Raised when the exact trigonometric inversion leaves arcsin's domain.

    Attributes:
        index: The angle index j whose argument a_j exceeded 1.
        argument: The offending value a_j.
        draws_used: Uniforms consumed by the failed attempt.
    """

    def __init__(self, index: int, argument: float, draws_used: int = 0) -> None:
        self.index = index
        self.argument = argument
        self.draws_used = draws_used
        super().__init__(f"arcsin argument a_{index} = {argument!r} > 1")


UNBIASED_METHODS = frozenset({MethodId.NORMALIZATION, MethodId.TRIG})


def _check_dim(d: int) -> None:
    if d < 2:
        raise SamplerError(f"Dimension must be >= 2, got {d}")


def sample_iid(
    d: int, rng: UniformSource, max_retries: int = IID_MAX_RETRIES
) -> ProbabilityVector:
    """Normalize d independent uniforms: p_j = x_j / sum_k x_k.

    The components are exchangeable by construction, so no shuffle is needed,
    but large components are practically unreachable as d grows.

    Args:
        d: Dimension, at least 2.
        rng: Source of the uniforms; d are consumed per attempt.
        max_retries: Extra attempts allowed after an all-zero draw.

    Returns:
        The normalized vector, tagged ``MethodId.IID``.

    Raises:
        SamplerError: If d < 2.
        DegenerateSumError: If all draws are zero on every attempt.
    """
    _check_dim(d)
    draws_used = 0

    for attempt in range(max_retries + 1):
        x = rng.uniforms(d)
        draws_used += d
        total = math.fsum(x)
        if total > 0.0:
            return ProbabilityVector(
                components=tuple(xj / total for xj in x),
                method=MethodId.IID,
                shuffled=False,
                draws_used=draws_used,
            )
        logger.warning(f"iid draws summed to zero (attempt {attempt + 1}), resampling")

    raise DegenerateSumError(
        f"iid draws summed to zero {max_retries + 1} times in a row (d={d})"
    )


def sample_normalization_biased(d: int, rng: UniformSource) -> ProbabilityVector:
    """Stick-breaking: each component takes a uniform share of the remaining mass.

    p_1 = u_1, p_j = u_j * (1 - sum_{k<j} p_k) for j < d, and p_d closes the sum.
    Component means fall off as 1/2, 1/4, ..., so the result is biased.

    Args:
        d: Dimension, at least 2.
        rng: Source of the d - 1 uniforms u_1..u_{d-1}, consumed in order.

    Returns:
        The unshuffled vector, tagged ``MethodId.NORMALIZATION``.

    Raises:
        SamplerError: If d < 2.
    """
    _check_dim(d)
    draws = rng.uniforms(d - 1)

    components: list[float] = []
    partial = 0.0
    for u in draws:
        pj = u * (1.0 - partial)
        components.append(pj)
        partial += pj
    # rounding can leave a residue of about -1 ulp
    components.append(max(1.0 - partial, 0.0))

    return ProbabilityVector(
        components=tuple(components),
        method=MethodId.NORMALIZATION,
        shuffled=False,
        draws_used=d - 1,
    )


def _trig_components(cos_sq: list[float], sin_sq: list[float]) -> tuple[float, ...]:
    """Evaluate p_j = sin^2(theta_{j-1}) * prod_{k=j}^{d-1} cos^2(theta_k), theta_0 = pi/2.

    Index 0 of both lists is theta_1.
    """
    d = len(cos_sq) + 1
    components = [0.0] * d
    tail = 1.0
    for j in range(d, 1, -1):
        components[j - 1] = sin_sq[j - 2] * tail
        tail *= cos_sq[j - 2]
    components[0] = tail
    return tuple(components)


def sample_trig_biased(d: int, rng: UniformSource) -> ProbabilityVector:
    """Trigonometric parametrization with theta_j = arccos(sqrt(t_j)).

    cos^2 and sin^2 of each angle are uniform, which pushes components with
    many cosine factors towards zero: <p_d> = 1/2, <p_{d-1}> = 1/4, ...
    In closed form p_j = (1 - t_{j-1}) * prod_{k>=j} t_k with t_0 = 0.

    Args:
        d: Dimension, at least 2.
        rng: Source of t_1..t_{d-1}, consumed in that order.

    Returns:
        The unshuffled vector, tagged ``MethodId.TRIG``.

    Raises:
        SamplerError: If d < 2.
    """
    _check_dim(d)
    t = rng.uniforms(d - 1)

    cos_sq: list[float] = []
    sin_sq: list[float] = []
    for tj in t:
        theta = math.acos(math.sqrt(tj))
        cos_sq.append(math.cos(theta) ** 2)
        sin_sq.append(math.sin(theta) ** 2)

    return ProbabilityVector(
        components=_trig_components(cos_sq, sin_sq),
        method=MethodId.TRIG,
        shuffled=False,
        draws_used=d - 1,
    )


def sample_trig_exact(d: int, rng: UniformSource) -> ProbabilityVector:
    """Invert the trigonometric parametrization so each p_j would be uniform.

    Draws t_{d-1}, ..., t_1 (in that order), sets theta_{d-1} = arcsin(sqrt(t_{d-1}))
    and theta_j = arcsin(sqrt(a_j)) with a_j = t_j / prod_{k>j} cos^2(theta_k).
    The attempt succeeds only when every a_j <= 1, i.e. when t_1 + ... + t_{d-1} <= 1.

    Args:
        d: Dimension, at least 2.
        rng: Source of the d - 1 uniforms; all are consumed even on failure.

    Returns:
        The vector, tagged ``MethodId.TRIG_EXACT``.

    Raises:
        SamplerError: If d < 2.
        TrigDomainError: On the first a_j > 1; the value is never clamped.
    """
    _check_dim(d)
    draws = rng.uniforms(d - 1)
    # draws[0] is t_{d-1}, draws[-1] is t_1
    t = list(reversed(draws))

    cos_sq = [0.0] * (d - 1)
    sin_sq = [0.0] * (d - 1)
    cos_product = 1.0
    for j in range(d - 1, 0, -1):
        tj = t[j - 1]
        if j == d - 1:
            a = tj
        elif cos_product > 0.0:
            a = tj / cos_product
        else:
            a = math.inf
        if a > 1.0 or math.isnan(a):
            logger.debug(f"trig-exact failed at j={j}: a_j={a!r}")
            raise TrigDomainError(j, a, draws_used=d - 1)

        theta = math.asin(math.sqrt(a))
        cos_sq[j - 1] = math.cos(theta) ** 2
        sin_sq[j - 1] = math.sin(theta) ** 2
        cos_product *= cos_sq[j - 1]

    return ProbabilityVector(
        components=_trig_components(cos_sq, sin_sq),
        method=MethodId.TRIG_EXACT,
        shuffled=False,
        draws_used=d - 1,
    )


def trig_exact_failure_rate(d: int, attempts: int, rng: UniformSource) -> float:
    """Fraction of exact trigonometric attempts that leave arcsin's domain.

    Analytically 1 - 1/(d-1)!, since an attempt succeeds iff sum_j t_j <= 1.

    Args:
        d: Dimension, at least 2.
        attempts: Independent attempts to run.
        rng: Source of the uniforms; (d - 1) * attempts are consumed.

    Returns:
        failures / attempts, in [0, 1].

    Raises:
        SamplerError: If attempts < 1 or d < 2.
    """
    if attempts < 1:
        raise SamplerError(f"attempts must be >= 1, got {attempts}")

    failures = 0
    for _ in range(attempts):
        try:
            sample_trig_exact(d, rng)
        except TrigDomainError:
            failures += 1

    rate = failures / attempts
    logger.info(f"trig-exact d={d}: {failures}/{attempts} attempts failed ({rate:.4f})")
    return rate


def random_permutation(d: int, rng: UniformSource) -> Permutation:
    """Fisher-Yates: for i = d..2 swap positions i and j = 1 + floor(u * i).

    Consumes exactly d - 1 uniforms; all d! orderings are equally likely.

    Args:
        d: Number of indices, at least 2.
        rng: Source of the uniforms, one per swap from i = d down to 2.

    Returns:
        The permutation (k_1, ..., k_d) of 1..d.

    Raises:
        SamplerError: If d < 2.
    """
    _check_dim(d)
    draws = rng.uniforms(d - 1)

    mapping = list(range(1, d + 1))
    for i, u in zip(range(d, 1, -1), draws):
        j = 1 + int(u * i)
        mapping[i - 1], mapping[j - 1] = mapping[j - 1], mapping[i - 1]

    return Permutation(tuple(mapping))


def apply_permutation(
    p: ProbabilityVector, permutation: Permutation, extra_draws: int = 0
) -> ProbabilityVector:
    """Return q with q_i = p_{k_i}; the multiset of components is unchanged.

    Args:
        p: Vector to reorder.
        permutation: 1-based mapping (k_1, ..., k_d).
        extra_draws: Uniforms spent on *permutation*, added to ``draws_used``.

    Returns:
        The reordered vector, marked ``shuffled``.

    Raises:
        SamplerError: If the permutation and the vector differ in dimension.
    """
    if permutation.dim != p.dim:
        raise SamplerError(
            f"Permutation of {permutation.dim} indices applied to a {p.dim}-vector"
        )
    return ProbabilityVector(
        components=tuple(p.components[k - 1] for k in permutation.mapping),
        method=p.method,
        shuffled=True,
        draws_used=p.draws_used + extra_draws,
    )


def shuffle(p: ProbabilityVector, rng: UniformSource) -> ProbabilityVector:
    """Apply a fresh uniformly random permutation to the components of *p*."""
    permutation = random_permutation(p.dim, rng)
    return apply_permutation(p, permutation, extra_draws=p.dim - 1)


_BIASED_SAMPLERS = {
    MethodId.NORMALIZATION: sample_normalization_biased,
    MethodId.TRIG: sample_trig_biased,
    MethodId.TRIG_EXACT: sample_trig_exact,
}


def sample_unbiased(method: MethodId, d: int, rng: UniformSource) -> ProbabilityVector:
    """Biased sample followed by a shuffle; consumes exactly 2(d - 1) uniforms.

    Args:
        method: ``NORMALIZATION`` or ``TRIG``.
        d: Dimension, at least 2.
        rng: Source of the d - 1 biased-sample draws, then the d - 1
            permutation draws.

    Returns:
        An exchangeable vector q.

    Raises:
        UnsupportedMethodError: For IID (needs no shuffle) and TRIG_EXACT.
    """
    if method not in UNBIASED_METHODS:
        raise UnsupportedMethodError(
            f"sample_unbiased supports norm and trig, not {method}"
        )
    return shuffle(_BIASED_SAMPLERS[method](d, rng), rng)


def sample(
    method: MethodId, d: int, rng: UniformSource, shuffled: bool = False
) -> ProbabilityVector:
    """Dispatch to the generator for *method*, optionally shuffling the result.

    Shuffling an iid vector is skipped (it is already unbiased), and the exact
    trigonometric method cannot be shuffled.

    Args:
        method: Generation method.
        d: Dimension, at least 2.
        rng: Source of the uniforms.
        shuffled: Whether to pass the biased sample through ``shuffle``.

    Returns:
        One probability vector.

    Raises:
        UnsupportedMethodError: If TRIG_EXACT is combined with a shuffle.
        TrigDomainError: From the exact trigonometric method.
    """
    if method is MethodId.IID:
        return sample_iid(d, rng)
    if shuffled:
        if method is MethodId.TRIG_EXACT:
            raise UnsupportedMethodError("trig-exact vectors cannot be shuffled")
        return sample_unbiased(method, d, rng)
    return _BIASED_SAMPLERS[method](d, rng)
