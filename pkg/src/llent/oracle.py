"""Independent brute-force validators for the exact engine.

Monte-Carlo estimates of projection probabilities and the wavefunction
norm, direct grid discretization of the reduced density matrix for small
particle numbers, and nested Gauss-Legendre quadrature for the ordered-
simplex primitive.  Everything here deliberately avoids the split-basis
machinery of :mod:`llent.projection`.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import simplex
from .bethe import (
    BetheRoots,
    InvalidInputError,
    gaudin_data,
    pair_phase_matrix,
    wavefunction_value,
)
from .projection import EntanglementSpectrum, entropy_upper_bound

#: Monte-Carlo samples are drawn in fixed-size substreams seeded as
#: (seed, substream index) through numpy's Philox-backed default
#: generator; partial sums are combined in substream order, so estimates
#: are bit-reproducible for a given (seed, samples).
MC_SUBSTREAM = 1 << 16

MAX_GRID_PARTICLES = 3
MAX_GRID_TOTAL_POINTS = 4096


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int


def _sorted_sector_amplitudes(roots: BetheRoots):
    """Permutation amplitudes of the wavefunction on the ordered sector.

    Returns (matrix of permuted rapidity vectors, amplitude weights) such
    that chi(sorted x) = weights . exp(i lam_perms . x) / sqrt(N! |N|^2).
    """
    n = roots.n
    u = pair_phase_matrix(roots)
    lam = roots.rapidities
    perms = list(itertools.permutations(range(n)))
    lam_perms = np.array([lam[list(p)] for p in perms])
    weights = np.empty(len(perms), dtype=complex)
    for idx, p in enumerate(perms):
        amp = 1.0 + 0.0j
        inv = 0
        for a in range(n):
            for b in range(a + 1, n):
                amp *= u[p[a], p[b]]
                if p[a] > p[b]:
                    inv += 1
        weights[idx] = amp * (-1.0 if inv % 2 else 1.0)
    return lam_perms, weights


def mc_weights_by_count(roots: BetheRoots, ell: float, samples: int, seed: int):
    """Streamed |chi|^2 sums and square sums, binned by particles in A."""
    n = roots.n
    if roots.params.is_free:
        lam_perms, weights, norm = None, None, 1.0
    else:
        lam_perms, weights = _sorted_sector_amplitudes(roots)
        norm_sq = 1.0 if roots.params.is_tg else gaudin_data(roots).norm_squared
        norm = math.factorial(n) * norm_sq
    sums = np.zeros(n + 1)
    sq_sums = np.zeros(n + 1)
    done = 0
    stream = 0
    while done < samples:
        take = min(MC_SUBSTREAM, samples - done)
        rng = np.random.default_rng([seed, stream])
        x = rng.random((MC_SUBSTREAM, n))[:take]
        counts = (x <= ell).sum(axis=1)
        if roots.params.is_free:
            w = np.ones(take)
        else:
            xs = np.sort(x, axis=1)
            psi = np.exp(1j * xs @ lam_perms.T) @ weights
            w = (psi.real ** 2 + psi.imag ** 2) / norm
        sums += np.bincount(counts, weights=w, minlength=n + 1)
        sq_sums += np.bincount(counts, weights=w * w, minlength=n + 1)
        done += take
        stream += 1
    return sums, sq_sums


def mc_projection_probability(roots: BetheRoots, k: int, ell: float | None = None,
                              samples: int = 1_000_000, seed: int = 0) -> McEstimate:
    """Monte-Carlo estimate of p(k) by uniform sampling of [0, 1]^N."""
    if samples < 1000:
        raise InvalidInputError(f"need >= 1000 samples, got {samples}")
    ell = roots.params.ell if ell is None else ell
    if not 0 <= k <= roots.n:
        raise InvalidInputError(f"need 0 <= k <= N, got k={k}")
    sums, sq_sums = mc_weights_by_count(roots, ell, samples, seed)
    mean = sums[k] / samples
    var = max(sq_sums[k] / samples - mean ** 2, 0.0)
    return McEstimate(mean=float(mean),
                      std_error=float(math.sqrt(var / samples)),
                      samples=samples, seed=seed)


def mc_norm(roots: BetheRoots, samples: int = 1_000_000, seed: int = 0) -> McEstimate:
    """Monte-Carlo estimate of the squared wavefunction norm (should be 1)."""
    sums, sq_sums = mc_weights_by_count(roots, roots.params.ell, samples, seed)
    mean = sums.sum() / samples
    var = max(sq_sums.sum() / samples - mean ** 2, 0.0)
    return McEstimate(mean=float(mean),
                      std_error=float(math.sqrt(var / samples)),
                      samples=samples, seed=seed)


def grid_reduced_density(roots: BetheRoots, k: int, ell: float | None = None,
                         points_per_dim: int = 100) -> EntanglementSpectrum:
    """Reduced-density spectrum by midpoint discretization on [0, ell]^k.

    The B-region trace is computed by midpoint quadrature with the shared
    (coupled) B coordinates; the kernel is evaluated pointwise through
    :func:`llent.bethe.wavefunction_value` and the resulting spectrum is
    normalized by its own quadrature trace.  The raw trace estimates p(k)
    and is exposed through :func:`grid_trace`.
    """
    spectrum, _ = _grid_spectrum(roots, k, ell, points_per_dim)
    return spectrum

def grid_trace(roots: BetheRoots, k: int, ell: float | None = None,
               points_per_dim: int = 100) -> float:
    """Quadrature estimate of p(k) from the discretized kernel trace."""
    _, trace = _grid_spectrum(roots, k, ell, points_per_dim)
    return trace


def _grid_spectrum(roots: BetheRoots, k: int, ell: float | None, g: int):
    ell = roots.params.ell if ell is None else ell
    n = roots.n
    if n > MAX_GRID_PARTICLES:
        raise InvalidInputError(f"grid oracle supports N <= {MAX_GRID_PARTICLES}")
    if not 0 < k <= n:
        raise InvalidInputError("grid oracle needs 1 <= k <= N")
    if g > 200:
        raise InvalidInputError("points_per_dim capped at 200")
    if g ** k > MAX_GRID_TOTAL_POINTS:
        raise InvalidInputError(
            f"{g}^{k} grid points exceed the cap {MAX_GRID_TOTAL_POINTS}")
    nb = n - k
    ha = ell / g
    hb = (1.0 - ell) / g if nb else 1.0
    axis_a = (np.arange(g) + 0.5) * ha
    grid_a = np.array(list(itertools.product(axis_a, repeat=k)))
    if nb:
        axis_b = ell + (np.arange(g) + 0.5) * hb
        grid_b = np.array(list(itertools.product(axis_b, repeat=nb)))
    else:
        grid_b = np.zeros((1, 0))

    psi = np.empty((len(grid_a), len(grid_b)), dtype=complex)
    for i, xa in enumerate(grid_a):
        for j, xb in enumerate(grid_b):
            psi[i, j] = wavefunction_value(roots, np.concatenate([xa, xb]))
    kernel = math.comb(n, k) * (psi @ psi.conj().T) * hb ** nb

    trace = float(np.trace(kernel).real) * ha ** k
    eigs = np.linalg.eigvalsh((kernel + kernel.conj().T) / 2.0)[::-1] * ha ** k
    eigs = np.clip(eigs, 0.0, None)
    spectrum = eigs / eigs.sum()
    pos = spectrum[spectrum > 1e-15]
    entropy = float(-(pos * np.log2(pos)).sum()) + 0.0
    return (EntanglementSpectrum(
        eigenvalues=spectrum, entropy_bits=entropy,
        rank=int((spectrum > 1e-10).sum()),
        upper_bound_bits=entropy_upper_bound(n, k)), trace)


def quad_ordered_exp_integral(key: simplex.OrderedExpIntegralKey,
                              degree: int = 128) -> complex:
    """Spectral-quadrature evaluation of the ordered-simplex integral.

    Builds the nested antiderivatives F_j(t) = int_a^t e^(i mu_j u)
    F_(j-1)(u) du as Chebyshev series on [a, b] (the integrand is entire,
    so the series converge geometrically).  The degree is doubled once and
    the two evaluations must agree to 1e-11.
    """
    if len(key.mu) > 4:
        raise InvalidInputError("quadrature oracle supports m <= 4")
    coarse = _cheb_nested(key.mu, key.a, key.b, degree)
    fine = _cheb_nested(key.mu, key.a, key.b, 2 * degree)
    if abs(fine - coarse) > 1e-11 * max(1.0, abs(fine)):
        raise ArithmeticError(
            f"quadrature did not converge: |delta| = {abs(fine - coarse):.3e}")
    return fine


def _cheb_nested(mu: tuple, a: float, b: float, degree: int) -> complex:
    cheb = np.polynomial.chebyshev
    # Chebyshev points of the first kind mapped onto [a, b]
    s = np.cos(np.pi * (2.0 * np.arange(degree + 1) + 1.0) / (2.0 * (degree + 1)))
    t = 0.5 * (b - a) * s + 0.5 * (b + a)
    f = np.ones_like(t, dtype=complex)
    for mu_j in mu:
        coef = cheb.chebfit(s, np.exp(1j * mu_j * t) * f, degree)
        anti = cheb.chebint(coef) * 0.5 * (b - a)
        f = cheb.chebval(s, anti) - cheb.chebval(-1.0, anti)
    return complex(cheb.chebval(1.0, cheb.chebfit(s, f, degree)))
