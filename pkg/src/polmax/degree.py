"""Hilbert-Schmidt degree of polarization and its closed forms.

For a two-mode state of purity P and total-photon distribution p_N the
degree is  P - sum_N p_N^2/(N+1):  the squared Hilbert-Schmidt distance to
the closest unpolarized state, which is diagonal and uniform inside each
photon-number manifold.  This module evaluates the degree generically from
a distribution and through the closed forms available for the catalog
states, including the maximally polarized parabolic distribution and its
degree.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .distributions import PhotonDistribution

__all__ = [
    "DegreeMethod",
    "DegreeResult",
    "hs_degree",
    "degree_pure_n_photon",
    "degree_coherent_closed_form",
    "scaled_bessel_i1",
    "optimal_distribution",
    "degree_optimal_closed_form",
    "beta22_density",
    "degree_thermal_series",
    "degree_twin_beam_exact",
    "bures_degree_twin_reference",
    "degree_from_solution",
]

#: Crossover between the power series and the asymptotic expansion of
#: exp(-x) I_1(x); both branches agree to ~1e-15 relative error here.
BESSEL_CROSSOVER = 20.0

# Closed forms saturate here: degrees live in [0, 1) but round to 1.0 in
# double precision once 1 - value drops below half an ulp.
_ONE_INSIDE = math.nextafter(1.0, 0.0)


class DegreeMethod(enum.Enum):
    """How a degree value was obtained."""

    SERIES = "series"
    CLOSED_FORM = "closed_form"
    FROM_QP = "from_qp"


@dataclass(frozen=True)
class DegreeResult:
    """A degree of polarization together with its provenance.

    ``tail_bound`` bounds the truncation error of ``value`` (zero for exact
    closed forms); ``truncation_dim`` is None when no truncation was
    involved.
    """

    value: float
    method: DegreeMethod
    purity: float = 1.0
    truncation_dim: Optional[int] = None
    tail_bound: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.purity <= 1.0:
            raise ValueError("purity must lie in (0, 1]")
        if not 0.0 <= self.value < self.purity:
            raise ValueError(
                f"degree {self.value!r} outside [0, purity={self.purity!r}); "
                "the purity is below the unpolarized overlap of the state"
            )
        if self.tail_bound < 0:
            raise ValueError("tail_bound must be non-negative")


def hs_degree(dist: PhotonDistribution, purity: float = 1.0) -> DegreeResult:
    """Degree of polarization from a number distribution and a purity.

    Evaluates purity - sum_N p_N^2/(N+1) over the stored truncation.  The
    discarded part of the sum is bounded by tail_bound^2, which is reported
    as the tail bound of the result.  ``purity`` must be at least the
    unpolarized overlap sum, as it is for any physical state.
    """
    if not 0.0 < purity <= 1.0:
        raise ValueError("purity must lie in (0, 1]")
    n = np.arange(dist.probs.size, dtype=float)
    overlap = float((dist.probs**2 / (n + 1.0)).sum())
    return DegreeResult(
        value=purity - overlap,
        method=DegreeMethod.SERIES,
        purity=purity,
        truncation_dim=dist.truncation_dim,
        tail_bound=dist.tail_bound**2,
    )


def degree_pure_n_photon(n: int) -> DegreeResult:
    """Degree of any pure state with exactly ``n`` photons: n/(n+1)."""
    if n < 0 or n != int(n):
        raise ValueError("photon number must be a non-negative integer")
    return _closed(n / (n + 1.0), truncation_dim=int(n))


def scaled_bessel_i1(x: float) -> float:
    """Exponentially scaled modified Bessel function, exp(-x) I_1(x).

    Power series with the exponential factor folded into the terms for
    x <= 20, asymptotic expansion (2 pi x)^(-1/2) (1 - 3/(8x) - ...) above;
    relative error is below 1e-12 everywhere, and the result stays finite
    for x up to ~1e6 and beyond.
    """
    if x < 0:
        raise ValueError("argument must be non-negative")
    if x == 0.0:
        return 0.0
    if x <= BESSEL_CROSSOVER:
        return _i1e_series(x)
    return _i1e_asymptotic(x)


def _i1e_series(x: float) -> float:
    """Power series of exp(-x) I_1(x) with the scaling applied term by term."""
    quarter_sq = 0.25 * x * x
    term = 0.5 * x * math.exp(-x)
    total = term
    for k in range(1, 500):
        term *= quarter_sq / (k * (k + 1.0))
        total += term
        if term <= total * 1e-17:
            break
    return total


def _i1e_asymptotic(x: float) -> float:
    """Large-argument expansion (2 pi x)^(-1/2) (1 - 3/(8x) - 15/(128x^2) - ...),
    truncated at the smallest term."""
    total = 1.0
    term = 1.0
    for k in range(60):
        nxt = term * ((2 * k + 1.0) ** 2 - 4.0) / (8.0 * (k + 1.0) * x)
        if abs(nxt) >= abs(term):  # series started diverging
            break
        term = nxt
        total += term
        if abs(term) <= 1e-17:
            break
    return total / math.sqrt(2.0 * math.pi * x)


def degree_coherent_closed_form(nbar: float) -> DegreeResult:
    """Degree of a quadrature coherent state: 1 - exp(-2 nbar) I_1(2 nbar)/nbar.

    Approaches 1 - 1/(2 sqrt(pi) nbar^(3/2)) for large nbar and vanishes at
    nbar = 0, where I_1(2 nbar)/nbar -> 1.
    """
    if nbar < 0:
        raise ValueError("nbar must be non-negative")
    if nbar == 0.0:
        return _closed(0.0)
    return _closed(1.0 - scaled_bessel_i1(2.0 * nbar) / nbar)


def optimal_distribution(nbar: float) -> PhotonDistribution:
    """Maximally polarized number distribution for mean ``nbar``.

    The parabola p_N = 3 ((nbar+1)^2 - (N-nbar)^2) / ((2 nbar+1)(nbar+1)
    (2 nbar+3)) on N = 0..ceil(2 nbar), clipped at zero.  It is exact
    (normalized, with mean nbar) whenever 2*nbar is an integer; otherwise
    the clipped parabola is renormalized, its true mean is recorded as
    ``declared_mean``, and callers needing the exact optimum should solve
    the quadratic program instead.
    """
    if nbar < 0:
        raise ValueError("nbar must be non-negative")
    if nbar == 0.0:
        return PhotonDistribution(np.ones(1), 0.0, 0.0)
    dim = int(math.ceil(2.0 * nbar))
    n = np.arange(dim + 1, dtype=float)
    parabola = np.clip((nbar + 1.0) ** 2 - (n - nbar) ** 2, 0.0, None)
    probs = 3.0 * parabola / ((2.0 * nbar + 1.0) * (nbar + 1.0) * (2.0 * nbar + 3.0))
    if (2.0 * nbar).is_integer():
        return PhotonDistribution(probs, nbar, 0.0)
    probs = probs / probs.sum()
    mean = float(n @ probs)
    return PhotonDistribution(probs, mean, 0.0)


def degree_optimal_closed_form(nbar: float) -> DegreeResult:
    """Largest degree attainable at fixed mean: 1 - 3/((2 nbar+1)(2 nbar+3)).

    Evaluated as 4 nbar (nbar+2) / ((2 nbar+1)(2 nbar+3)), the same quantity
    without the final cancellation (it gives exactly 0.8 at nbar = 1).
    """
    if nbar < 0:
        raise ValueError("nbar must be non-negative")
    value = 4.0 * nbar * (nbar + 2.0) / ((2.0 * nbar + 1.0) * (2.0 * nbar + 3.0))
    return _closed(value)


def beta22_density(x: float, nbar: float) -> float:
    """Continuum limit of the optimal distribution, p(x) = (3/nbar) x (1-x).

    ``x = N/(2 nbar)`` is the quasicontinuous photon-number fraction; the
    shape is the Beta(2, 2) density up to the 1/(2 nbar) change of scale.
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if nbar <= 0:
        raise ValueError("nbar must be positive")
    return 3.0 / nbar * x * (1.0 - x)


def degree_thermal_series(nbar: float) -> DegreeResult:
    """Degree of a thermal total-photon distribution, summed in closed form.

    With mu = nbar/(nbar+1) the geometric sum of the unpolarized overlap
    gives 1 + ((1-mu)/mu)^2 log(1-mu^2); for nbar >> 1 this approaches the
    asymptote 1 - log(nbar/2)/nbar^2.
    """
    if nbar < 0:
        raise ValueError("nbar must be non-negative")
    if nbar == 0.0:
        return _closed(0.0)
    if nbar < 1e-3:
        # series of the closed form, avoiding the log cancellation
        value = nbar * (2.0 + nbar * (-3.5 + nbar * (6.0 - nbar * 31.0 / 3.0)))
        return _closed(value)
    # log(1 - mu^2) = log(2 nbar + 1) - 2 log(nbar + 1), all cancellation-free
    value = 1.0 + (math.log1p(2.0 * nbar) - 2.0 * math.log1p(nbar)) / nbar**2
    return _closed(value)


def degree_twin_beam_exact(xi: float) -> DegreeResult:
    """Degree of a twin beam from its exact even-N distribution.

    With lam = tanh(xi)^2 the pairwise sum gives
    1 - ((1-lam)^2/lam) artanh(lam), equal to
    1 - 2 log(nbar+1)/(nbar (nbar+2)) at mean nbar = 2 sinh(xi)^2.
    """
    if xi < 0:
        raise ValueError("xi must be non-negative")
    lam = math.tanh(xi) ** 2
    if lam == 0.0:
        return _closed(0.0)
    if lam < 1e-3:
        value = lam * (2.0 + lam * (-4.0 / 3.0 + lam * (2.0 / 3.0 - lam * 8.0 / 15.0)))
        return _closed(value)
    if xi > 18.0:
        # tanh saturates to 1 in double precision; switch to the identical
        # mean-photon form 1 - 2 log(nbar+1)/(nbar (nbar+2)).
        if xi > 350.0:
            return _closed(1.0)  # saturates to the representable maximum
        nbar = 2.0 * math.sinh(xi) ** 2
        return _closed(1.0 - 2.0 * math.log1p(nbar) / (nbar * (nbar + 2.0)))
    one_minus_lam = 1.0 / math.cosh(xi) ** 2
    value = 1.0 - one_minus_lam**2 / lam * math.atanh(lam)
    return _closed(value)


def bures_degree_twin_reference(nbar: float) -> float:
    """Twin-beam degree under the Bures metric, quoted as 1 - 1/nbar^2.

    Reference value only: the underlying minimization is not reproduced
    here, so this number is not verified by any series in this package.
    """
    if nbar <= 0:
        raise ValueError("nbar must be positive")
    return 1.0 - 1.0 / nbar**2


def degree_from_solution(solution) -> DegreeResult:
    """Degree carried by a solver solution (purity-1 optimum).

    Accepts any object with ``objective`` (half the quadratic form, equal to
    the unpolarized overlap sum) and ``dist`` attributes.
    """
    dist = solution.dist
    return DegreeResult(
        value=1.0 - solution.objective,
        method=DegreeMethod.FROM_QP,
        purity=1.0,
        truncation_dim=dist.truncation_dim,
        tail_bound=dist.tail_bound,
    )


def _closed(value: float, truncation_dim: Optional[int] = None) -> DegreeResult:
    return DegreeResult(
        min(value, _ONE_INSIDE), DegreeMethod.CLOSED_FORM, 1.0, truncation_dim, 0.0
    )
