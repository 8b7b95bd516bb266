"""
Random pure quantum states built from unbiased probability vectors.

A state |psi> = sum_j sqrt(q_j) exp(i phi_j) |j> takes its moduli from a
shuffled probability vector and its phases uniformly from [0, 2*pi).
"""

from __future__ import annotations

import cmath
import logging
import math
from collections.abc import Sequence

from probvec.models import MethodId, ProbabilityVector, PureState
from probvec.rngcore import UniformSource
from probvec.sampler import SamplerError, sample_unbiased

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


def pure_state_from(q: ProbabilityVector, phases: Sequence[float]) -> PureState:
    """Combine moduli sqrt(q_j) with explicit phases phi_j."""
    if len(phases) != q.dim:
        raise SamplerError(f"{len(phases)} phases given for a {q.dim}-vector")
    return PureState(
        amplitudes=tuple(
            math.sqrt(qj) * cmath.exp(1j * phi) for qj, phi in zip(q.components, phases)
        )
    )


def random_pure_state(d: int, method: MethodId, rng: UniformSource) -> PureState:
    """Draw an unbiased vector q, then d phases phi_j = 2*pi*u_j.

    Consumes 2(d - 1) + d uniforms. The global phase is left random.
    """
    q = sample_unbiased(method, d, rng)
    phases = [TWO_PI * u for u in rng.uniforms(d)]
    return pure_state_from(q, phases)


def state_norm(psi: PureState) -> float:
    """Euclidean norm sqrt(sum_j |c_j|^2)."""
    return math.sqrt(math.fsum(abs(c) ** 2 for c in psi.amplitudes))


def phase_of(c: complex) -> float:
    """Argument of *c* mapped to [0, 2*pi)."""
    phi = cmath.phase(c)
    if phi < 0.0:
        phi += TWO_PI
    # -tiny + 2*pi rounds to 2*pi
    return 0.0 if phi >= TWO_PI else phi
