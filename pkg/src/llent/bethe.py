"""Ground state of N delta-interacting bosons on a unit ring.

Solves the Bethe equations in logarithmic form for the ground-state
rapidities, evaluates the Gaudin norm determinant, and evaluates the
normalized many-body wavefunction at arbitrary coordinates.  Lengths are
measured in units of the ring circumference, so all coordinates live in
[0, 1].
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

#: Sentinel coupling for the impenetrable-boson (Tonks-Girardeau) limit.
TG = math.inf

#: Permutation sums scale as (N!)^2, keep N small by default.
DEFAULT_MAX_PARTICLES = 8

DEFAULT_TOL = 1e-12
MAX_NEWTON_STEPS = 200


class SolverError(RuntimeError):
    """Newton iteration failed to reach the requested residual."""

    def __init__(self, message, last_iterate=None, residual=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual = residual


class InvalidInputError(ValueError):
    """Input outside the supported domain."""


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters: particle number, coupling, partition size.

    ``c = math.inf`` selects the exact Tonks-Girardeau mode; ``c = 0`` the
    free-boson mode.  ``ell`` is the arc fraction of partition A.
    """

    n: int
    c: float
    ell: float = 0.5

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise InvalidInputError(f"n must be a positive integer, got {self.n!r}")
        if math.isnan(self.c) or self.c < 0:
            raise InvalidInputError(f"c must be >= 0 or inf, got {self.c!r}")
        if not 0.0 < self.ell < 1.0:
            raise InvalidInputError(f"ell must lie strictly inside (0, 1), got {self.ell!r}")

    @property
    def is_tg(self) -> bool:
        return math.isinf(self.c)

    @property
    def is_free(self) -> bool:
        return self.c == 0.0


@dataclass(frozen=True)
class BetheRoots:
    """Solved ground-state rapidities together with the solver residual."""

    params: ModelParams
    quantum_numbers: np.ndarray
    rapidities: np.ndarray
    residual: float

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def c(self) -> float:
        return self.params.c


@dataclass(frozen=True)
class GaudinData:
    """Hessian of the Yang action and the squared wavefunction norm."""

    matrix: np.ndarray
    norm_squared: float


def ground_state_quantum_numbers(n: int) -> np.ndarray:
    """Symmetric ground-state labels I_j = j - (N+1)/2, j = 1..N."""
    if n < 1:
        raise InvalidInputError(f"n must be >= 1, got {n}")
    return np.arange(1, n + 1) - (n + 1) / 2.0


def _log_form_defect(lam: np.ndarray, quantum_numbers: np.ndarray, c: float) -> np.ndarray:
    diff = lam[:, None] - lam[None, :]
    return lam - 2.0 * np.pi * quantum_numbers + 2.0 * np.arctan2(diff, c).sum(axis=1)


def gaudin_matrix(lam: np.ndarray, c: float) -> np.ndarray:
    """Second derivatives of the Yang action at rapidities ``lam``."""
    diff = lam[:, None] - lam[None, :]
    kern = 2.0 * c / (diff * diff + c * c)
    if not np.all(np.isfinite(kern)):
        raise InvalidInputError("non-finite Gaudin kernel (coincident roots with c = 0?)")
    mat = np.diag(1.0 + kern.sum(axis=1)) - kern
    return mat


def solve_bethe_roots(params: ModelParams, tol: float = DEFAULT_TOL) -> BetheRoots:
    """Solve the logarithmic Bethe equations by damped Newton continuation.

    Starts from the large-coupling roots 2*pi*I_j and steps the coupling
    down geometrically to the target; the Gaudin matrix doubles as the
    Jacobian at every step.
    """
    if params.is_tg or params.is_free:
        raise InvalidInputError("solver requires 0 < c < inf; use bethe_roots() for the limits")
    qn = ground_state_quantum_numbers(params.n)
    c_target = params.c
    c_start = max(1000.0, 10.0 * c_target)
    stages = [c_start]
    while stages[-1] > c_target * 1.5:
        stages.append(stages[-1] / 2.0)
    stages.append(c_target)

    lam = 2.0 * np.pi * qn
    for c_stage in stages:
        lam = _newton_stage(lam, qn, c_stage, tol)
    lam = lam - lam.mean()  # zero-sum to round-off
    residual = float(np.max(np.abs(_log_form_defect(lam, qn, c_target))))
    if residual >= tol:
        raise SolverError(
            f"residual {residual:.3e} above tolerance {tol:.3e} after continuation",
            last_iterate=lam, residual=residual,
        )
    return BetheRoots(params=params, quantum_numbers=qn, rapidities=lam, residual=residual)


def _newton_stage(lam: np.ndarray, qn: np.ndarray, c: float, tol: float) -> np.ndarray:
    defect = _log_form_defect(lam, qn, c)
    norm = np.max(np.abs(defect))
    for _ in range(MAX_NEWTON_STEPS):
        if norm < 0.1 * tol:
            return lam
        step = np.linalg.solve(gaudin_matrix(lam, c), defect)
        alpha = 1.0
        while alpha > 1e-8:
            trial = lam - alpha * step
            trial_defect = _log_form_defect(trial, qn, c)
            trial_norm = np.max(np.abs(trial_defect))
            if trial_norm < (1.0 - 0.5 * alpha) * norm or trial_norm < 0.1 * tol:
                lam, defect, norm = trial, trial_defect, trial_norm
                break
            alpha *= 0.5
        else:
            break
    if norm < tol:
        return lam
    raise SolverError(
        f"Newton stage at c = {c:g} stalled with residual {norm:.3e}",
        last_iterate=lam, residual=float(norm),
    )


def bethe_roots(params: ModelParams, tol: float = DEFAULT_TOL) -> BetheRoots:
    """Ground-state rapidities for any coupling, including the c = 0 and TG modes."""
    qn = ground_state_quantum_numbers(params.n)
    if params.is_free:
        return BetheRoots(params=params, quantum_numbers=qn,
                          rapidities=np.zeros(params.n), residual=0.0)
    if params.is_tg:
        return BetheRoots(params=params, quantum_numbers=qn,
                          rapidities=2.0 * np.pi * qn, residual=0.0)
    return solve_bethe_roots(params, tol=tol)


def bethe_equation_residual(roots: BetheRoots) -> float:
    """Defect of the original (product-form) Bethe equations at the roots."""
    lam, c = roots.rapidities, roots.c
    n = roots.n
    worst = 0.0
    for j in range(n):
        prod = 1.0 + 0.0j
        for k in range(n):
            if k != j:
                prod *= (lam[j] - lam[k] + 1j * c) / (lam[j] - lam[k] - 1j * c)
        worst = max(worst, abs(np.exp(1j * lam[j]) - prod))
    return worst


def gaudin_data(roots: BetheRoots) -> GaudinData:
    """Gaudin matrix and squared norm |N|^2 at solved roots.

    In the TG mode the matrix is exactly the identity; the free-boson mode
    is rejected because the kernel diverges at coincident roots.
    """
    if roots.params.is_tg:
        eye = np.eye(roots.n)
        return GaudinData(matrix=eye, norm_squared=1.0)
    if roots.params.is_free:
        raise InvalidInputError("Gaudin matrix undefined at c = 0 (coincident roots)")
    mat = gaudin_matrix(roots.rapidities, roots.c)
    det = float(np.linalg.det(mat))
    if det <= 0:
        raise InvalidInputError(f"Gaudin determinant not positive ({det:g}); roots unreliable")
    return GaudinData(matrix=mat, norm_squared=det)


def pair_phase_matrix(roots: BetheRoots) -> np.ndarray:
    """Unit-modulus amplitude factors u[i, j] = (l_j - l_i - ic)/sqrt((l_j - l_i)^2 + c^2).

    In the TG limit every factor degenerates to -i.  These are the
    per-pair building blocks of the Bethe amplitudes once the common
    normalization {N! prod[(l_j - l_k)^2 + c^2]}^(1/2) has been absorbed.
    """
    n = roots.n
    if roots.params.is_tg:
        return np.full((n, n), -1j)
    lam, c = roots.rapidities, roots.c
    diff = lam[None, :] - lam[:, None]
    return (diff - 1j * c) / np.sqrt(diff * diff + c * c)


def wavefunction_value(roots: BetheRoots, x, max_particles: int = DEFAULT_MAX_PARTICLES) -> complex:
    """Value of the normalized ground-state wavefunction at coordinates ``x``.

    Evaluates the full N!-term permutation sum.  For c = 0 the constant 1
    is returned; in the TG mode the limiting amplitudes (-i sgn) are used,
    which fixes the global phase so that the value on the fully ordered
    sector x_1 < ... < x_N equals (-i)^(N(N-1)/2) times the Slater
    determinant of e^(i l_j x_k) / sqrt(N!).
    """
    x = np.asarray(x, dtype=float)
    n = roots.n
    if x.shape != (n,):
        raise InvalidInputError(f"expected {n} coordinates, got shape {x.shape}")
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise InvalidInputError("coordinates must lie in [0, 1]")
    if n > max_particles:
        raise InvalidInputError(f"n = {n} exceeds the permutation-sum cap {max_particles}")
    if roots.params.is_free:
        return 1.0 + 0.0j

    lam = roots.rapidities
    if roots.params.is_tg:
        norm_sq = 1.0
        u = np.full((n, n), -1j)
    else:
        norm_sq = gaudin_data(roots).norm_squared
        u = pair_phase_matrix(roots)

    sgn = np.sign(x[None, :] - x[:, None])  # sgn[k, j] = sgn(x_j - x_k)
    total = 0.0 + 0.0j
    for perm in itertools.permutations(range(n)):
        amp = _perm_signature(perm) + 0.0j
        for k in range(n):
            for j in range(k + 1, n):
                s = sgn[k, j]
                if s > 0:
                    amp *= u[perm[k], perm[j]]
                elif s < 0:
                    amp *= np.conj(u[perm[k], perm[j]])
                else:
                    # coincident coordinates: sgn = 0, only the real part
                    # (l_Pj - l_Pk)/sqrt(...) of the factor survives
                    amp *= u[perm[k], perm[j]].real
        total += amp * np.exp(1j * np.dot(lam[list(perm)], x))
    return total / math.sqrt(math.factorial(n) * norm_sq)


def _perm_signature(perm) -> int:
    inversions = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                inversions += 1
    return -1 if inversions % 2 else 1
