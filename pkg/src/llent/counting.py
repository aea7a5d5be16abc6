"""Free-fermion counting statistics on the ring and their asymptotics.

The impenetrable-boson (free-fermion) probability distribution of particle
number in an arc is encoded by the characteristic function
f(alpha) = det(1 - (1 - e^(i alpha)) Gamma), a Toeplitz determinant over
the plane-wave overlap matrix Gamma.  This module builds Gamma, inverts
f(alpha) into p(k) by discrete Fourier sampling at the N+1 roots of unity
(exact, because the determinant is a degree-N polynomial in e^(i alpha)),
and provides the large-N Fisher-Hartwig/Barnes-G asymptotics, the cumulant
expansion, the Gaussian approximation, and the balanced-probability
asymptote.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import zeta

from .bethe import InvalidInputError

EULER_GAMMA = float(np.euler_gamma)
ZETA3 = 1.2020569031595942854

#: ln G(1+z) Taylor coefficients are zeta values; the series is used for
#: |z| <= 0.5 and the functional equation G(1+z) = Gamma(z) G(z) reduces
#: larger arguments into the window.
_BARNES_SERIES_WINDOW = 0.5


@dataclass(frozen=True)
class CountingModel:
    """Exact counting statistics of N free fermions in an arc of size ell."""

    n: int
    ell: float
    gamma_matrix: np.ndarray
    alpha_grid: np.ndarray
    f_samples: np.ndarray
    pk: np.ndarray
    cumulants: tuple
    sigma2: float


def overlap_matrix(n: int, ell: float) -> np.ndarray:
    """Gamma_ij = delta_ij ell + (1 - delta_ij) sin(pi (i-j) ell) / (pi (i-j))."""
    if n < 1:
        raise InvalidInputError(f"n must be >= 1, got {n}")
    if not 0.0 < ell <= 1.0:
        raise InvalidInputError(f"ell must lie in (0, 1], got {ell}")
    idx = np.arange(n)
    diff = idx[:, None] - idx[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        gamma = np.sin(np.pi * diff * ell) / (np.pi * diff)
    gamma[idx, idx] = ell
    return gamma


def characteristic_function(gamma: np.ndarray, alpha: float) -> complex:
    """det(1 - (1 - e^(i alpha)) Gamma)."""
    n = gamma.shape[0]
    mat = np.eye(n, dtype=complex) - (1.0 - np.exp(1j * alpha)) * gamma
    return complex(np.linalg.det(mat))


def counting_distribution(gamma: np.ndarray) -> np.ndarray:
    """Invert f(alpha) into p(k) by sampling the N+1 roots of unity.

    Exact because det(1 - (1 - z) Gamma) is a degree-N polynomial in
    z = e^(i alpha).
    """
    n = gamma.shape[0]
    alphas = 2.0 * np.pi * np.arange(n + 1) / (n + 1)
    f = np.array([characteristic_function(gamma, a) for a in alphas])
    k = np.arange(n + 1)
    pk = (f[None, :] * np.exp(-1j * alphas[None, :] * k[:, None])).sum(axis=1) / (n + 1)
    if np.max(np.abs(pk.imag)) > 1e-10:
        raise ArithmeticError(
            f"imaginary residue {np.max(np.abs(pk.imag)):.3e} in inverted p(k)")
    return pk.real


def _numerical_cumulants(pk: np.ndarray) -> tuple:
    k = np.arange(len(pk))
    m1 = float((pk * k).sum())
    d = k - m1
    m2 = float((pk * d ** 2).sum())
    m3 = float((pk * d ** 3).sum())
    m4 = float((pk * d ** 4).sum())
    return m1, m2, m3, m4 - 3.0 * m2 ** 2


def counting_model(n: int, ell: float) -> CountingModel:
    """Assemble the exact model for N fermions in an arc of fraction ell."""
    gamma = overlap_matrix(n, ell)
    alphas = 2.0 * np.pi * np.arange(n + 1) / (n + 1)
    f = np.array([characteristic_function(gamma, a) for a in alphas])
    pk = counting_distribution(gamma)
    total = pk.sum()
    if abs(total - 1.0) > 1e-10:
        raise ArithmeticError(f"inverted p(k) sums to {total!r}")
    if pk.min() < -1e-10:
        raise ArithmeticError(f"inverted p(k) has negative entry {pk.min():.3e}")
    return CountingModel(n=n, ell=ell, gamma_matrix=gamma, alpha_grid=alphas,
                         f_samples=f, pk=pk,
                         cumulants=_numerical_cumulants(pk),
                         sigma2=variance_asymptotic(n, ell))


def asymptotic_cumulants(n: int, ell: float) -> tuple:
    """Large-N targets: (N ell, ln[2N e^(g+1) sin(pi ell)]/pi^2, 0, -3 zeta(3)/(2 pi^4))."""
    kappa2 = math.log(2.0 * n * math.exp(EULER_GAMMA + 1.0) * math.sin(math.pi * ell)) / math.pi ** 2
    return (n * ell, kappa2, 0.0, -3.0 * ZETA3 / (2.0 * math.pi ** 4))


def variance_asymptotic(n: int, ell: float = 0.5) -> float:
    """Particle-number variance in the arc, pi^-2 ln[2N e^(gamma+1) sin(pi ell)]."""
    return math.log(2.0 * n * math.exp(EULER_GAMMA + 1.0) * math.sin(math.pi * ell)) / math.pi ** 2


def barnes_log_g(z: float) -> float:
    """ln G(1 + z) for z in (0, 2], with G the Barnes function, to ~1e-12.

    Uses the Taylor series of ln G(1+z) inside |z| <= 1/2 and the
    functional equation G(1+z) = Gamma(z) G(z) to walk larger arguments
    down into the series window.
    """
    if not 0.0 <= z <= 2.0:
        raise InvalidInputError(f"barnes_log_g supports (0, 2], got {z}")
    return _barnes_log_g_rec(z)


def _barnes_log_g_rec(z: float) -> float:
    if z > _BARNES_SERIES_WINDOW:
        return math.lgamma(z) + _barnes_log_g_rec(z - 1.0)
    return _barnes_log_g_series(z)


def _barnes_log_g_series(z: float) -> float:
    # ln G(1+z) = (ln(2 pi) - 1) z/2 - (1 + gamma) z^2/2
    #             + sum_{n>=2} (-1)^(n-1) zeta(n) z^(n+1) / (n+1)
    total = (math.log(2.0 * math.pi) - 1.0) * z / 2.0 \
        - (1.0 + EULER_GAMMA) * z * z / 2.0
    zp = z * z * z
    sign = 1.0
    for n in range(2, 200):
        term = sign * float(zeta(n)) * zp / (n + 1)
        total += term
        if abs(term) < 1e-18:
            break
        zp *= z
        sign = -sign
    return total


def fisher_hartwig_f(n: int, ell: float, alpha: float) -> complex:
    """Large-N Fisher-Hartwig asymptote of the characteristic function.

    e^(i alpha N ell) [G(1 + a/2pi) G(1 - a/2pi)]^2 / [2N sin(pi ell)]^(a^2/2pi^2);
    both Barnes G factors enter squared.  Valid for |alpha| < pi.
    """
    if not abs(alpha) < math.pi:
        raise InvalidInputError(f"fisher_hartwig_f requires |alpha| < pi, got {alpha}")
    z = alpha / (2.0 * math.pi)
    log_g = _barnes_log_g_rec(z) + _barnes_log_g_rec(-z)
    modulus = math.exp(2.0 * log_g
                       - (alpha ** 2 / (2.0 * math.pi ** 2))
                       * math.log(2.0 * n * math.sin(math.pi * ell)))
    return modulus * complex(math.cos(alpha * n * ell), math.sin(alpha * n * ell))


def cumulants(model: CountingModel) -> tuple:
    """Numerical cumulants (k1..k4) of the exact inverted distribution."""
    return model.cumulants


def gaussian_pk(n: int, k: int) -> float:
    """Gaussian approximation to p(k) at ell = 1/2, variance pi^-2 ln(2N e^(g+1))."""
    sigma2 = variance_asymptotic(n, 0.5)
    return math.exp(-(k - n / 2.0) ** 2 / (2.0 * sigma2)) / math.sqrt(2.0 * math.pi * sigma2)


def balanced_probability_asymptotic(n: int) -> float:
    """Large-N asymptote sqrt(pi / (2 ln(2N e^(gamma+1)))) of p(N/2) at ell = 1/2."""
    return math.sqrt(math.pi / (2.0 * math.log(2.0 * n * math.exp(EULER_GAMMA + 1.0))))
