"""Projection probabilities and entanglement of fixed-number projections.

Given solved ground-state rapidities, computes the probability p(k) of
finding exactly k of the N bosons in the arc A = [0, ell], the reduced
density matrix of the projected pure state in its rank-C(N, k) degenerate
kernel representation, the entanglement spectrum and von Neumann entropy
(in bits), and the extractable entanglement max_k p(k) S_A(k).

All coordinate integrals are reduced to ordered sectors, on which every
sign factor of the Bethe amplitudes is frozen, and then to exponential-
polynomial primitives from :mod:`llent.simplex`.  The (N!)^2 permutation-
pair sums are never enumerated directly: amplitudes factor over which
subset of rapidities sits in A, and the ordered-sector overlaps obey the
recursion obtained by peeling off the rightmost coordinate, which turns
the whole computation into a dynamic program over pairs of rapidity
subsets.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import simplex
from .bethe import (
    BetheRoots,
    GaudinData,
    InvalidInputError,
    gaudin_data,
    pair_phase_matrix,
)

#: Absolute imaginary residue allowed on quantities that must be real.
IMAG_RESIDUE_TOL = 1e-10

#: Eigenvalues of the reduced density matrix in [-CLIP_WINDOW, 0) are
#: clipped to zero; anything below NEGATIVE_EIGENVALUE_TOL is an error.
CLIP_WINDOW = 1e-12
NEGATIVE_EIGENVALUE_TOL = -1e-10

TRACE_TOL = 1e-8
RANK_EIGENVALUE_CUTOFF = 1e-10


class ProjectionError(RuntimeError):
    """Internal consistency failure in the projection engine."""


@dataclass(frozen=True)
class ProjectionOutcome:
    """Degenerate-kernel data of one projection outcome.

    ``coeff`` holds the B-trace coefficients between momentum splits,
    normalized so that trace(coeff . gram-overlaps) = 1; ``gram`` holds
    the A-side overlaps <phi_S, phi_S'> of the split basis functions.
    """

    k: int
    probability: float
    coeff: np.ndarray
    gram: np.ndarray


@dataclass(frozen=True)
class EntanglementSpectrum:
    """Spectrum of the reduced density matrix and derived entropies."""

    eigenvalues: np.ndarray
    entropy_bits: float
    rank: int
    upper_bound_bits: float


@dataclass(frozen=True)
class OutcomeSummary:
    k: int
    probability: float
    spectrum: EntanglementSpectrum
    weighted_bits: float


@dataclass(frozen=True)
class EntanglementReport:
    """All projection outcomes with the extractable entanglement."""

    params: object
    outcomes: tuple
    epp_bits: float
    argmax_k: int

    def probabilities(self) -> np.ndarray:
        return np.array([o.probability for o in self.outcomes])

    def entropies_bits(self) -> np.ndarray:
        return np.array([o.spectrum.entropy_bits for o in self.outcomes])


def entropy_upper_bound(n: int, k: int) -> float:
    """log2 C(n, k): flat-spectrum bound on the projected-state entropy."""
    if not 0 <= k <= n:
        raise InvalidInputError(f"need 0 <= k <= n, got k={k}, n={n}")
    return math.log2(math.comb(n, k))


# ---------------------------------------------------------------------------
# ordered-sector overlap tables
# ---------------------------------------------------------------------------

def _bits(mask: int) -> list:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _overlap_table(lam: np.ndarray, u: np.ndarray, lo: float, hi: float,
                   max_size: int) -> dict:
    """Ordered-sector pair overlaps H[R, R'] for all subset pairs.

    H[R, R'] = sum over permutations s of R and s' of R' of
    sgn(s) sgn(s') f(s) conj(f(s')) I(lam_s - lam_s'; lo, hi), where
    f is the product of unit-modulus pair factors ``u`` along the ordered
    sector and I is the ordered-simplex exponential integral.  Built by
    peeling the rightmost coordinate, which removes one element from each
    subset per level.  Only pairs with R <= R' (as bitmasks) are stored;
    the transpose follows from Hermiticity.
    """
    n = len(lam)
    scale = max(abs(lo), abs(hi))
    masks_by_size = [[] for _ in range(max_size + 1)]
    for mask in range(1 << n):
        sz = mask.bit_count()
        if sz <= max_size:
            masks_by_size[sz].append(mask)

    # removal constants: sign (-1)^(m - rank(a)) and product of pair
    # factors prod_{t in R \ a} u[t, a]
    rem_const = {}
    for size in range(1, max_size + 1):
        for mask in masks_by_size[size]:
            members = _bits(mask)
            for rank, a in enumerate(members, start=1):
                rest = [t for t in members if t != a]
                const = (-1.0) ** (size - rank) * np.prod(u[rest, a]) if rest \
                    else (-1.0) ** (size - rank)
                rem_const[(mask, a)] = complex(const)

    # term lists per (R, R') pair, previous level only
    prev = {(0, 0): (np.zeros(1), np.zeros(1, dtype=np.int64),
                     np.ones(1, dtype=complex))}
    values = {(0, 0): 1.0 + 0.0j}

    def fetch(r, q):
        if r <= q:
            return prev[(r, q)], False
        return prev[(q, r)], True

    for size in range(1, max_size + 1):
        cur = {}
        for ri, r_mask in enumerate(masks_by_size[size]):
            for q_mask in masks_by_size[size][ri:]:
                nu_parts, pw_parts, cf_parts = [], [], []
                for a in _bits(r_mask):
                    ca = rem_const[(r_mask, a)]
                    for ap in _bits(q_mask):
                        (nu, pw, cf), conj = fetch(r_mask ^ (1 << a),
                                                   q_mask ^ (1 << ap))
                        const = ca * np.conj(rem_const[(q_mask, ap)])
                        delta = lam[a] - lam[ap]
                        if conj:
                            nu_parts.append(-nu + delta)
                            cf_parts.append(np.conj(cf) * const)
                        else:
                            nu_parts.append(nu + delta)
                            cf_parts.append(cf * const)
                        pw_parts.append(pw)
                nu, pw, cf = simplex.integrate_terms(
                    np.concatenate(nu_parts), np.concatenate(pw_parts),
                    np.concatenate(cf_parts), lo, scale)
                nu, pw, cf = simplex.consolidate_terms(nu, pw, cf, scale)
                cur[(r_mask, q_mask)] = (nu, pw, cf)
                values[(r_mask, q_mask)] = simplex.evaluate_terms(nu, pw, cf, hi)
        prev = cur
    return values


def _table_value(values: dict, r_mask: int, q_mask: int) -> complex:
    if r_mask <= q_mask:
        return values[(r_mask, q_mask)]
    return np.conj(values[(q_mask, r_mask)])


def _merge_sign(subset: tuple, complement: tuple) -> float:
    """Signature of the permutation (sorted subset, sorted complement)."""
    inversions = sum(1 for a in subset for b in complement if a > b)
    return -1.0 if inversions % 2 else 1.0


class _Engine:
    """Shared state for all outcomes of one (roots, ell) pair."""

    def __init__(self, roots: BetheRoots, ell: float, ks):
        if not 0.0 < ell < 1.0:
            raise InvalidInputError(f"ell must lie in (0, 1), got {ell}")
        self.roots = roots
        self.ell = ell
        n = roots.n
        self.n = n
        lam = roots.rapidities
        u = pair_phase_matrix(roots)
        if roots.params.is_tg:
            self.norm_sq = 1.0
        else:
            self.norm_sq = gaudin_data(roots).norm_squared
        max_a = max(ks)
        max_b = max(n - k for k in ks)
        self.table_a = _overlap_table(lam, u, 0.0, ell, max_a)
        self.table_b = _overlap_table(lam, u, ell, 1.0, max_b)
        self.u = u

    def raw_matrices(self, k: int):
        """Unnormalized coefficient matrix, Gram matrix, and p(k)."""
        n = self.n
        subsets = list(itertools.combinations(range(n), k))
        dim = len(subsets)
        masks = [sum(1 << i for i in s) for s in subsets]
        full = (1 << n) - 1
        comp_masks = [full ^ m for m in masks]

        eps = np.array([_merge_sign(s, tuple(i for i in range(n) if i not in s))
                        for s in subsets])
        cross = np.array([
            complex(np.prod(self.u[np.ix_(list(s), [i for i in range(n)
                                                    if i not in s])]))
            if 0 < k < n else 1.0 + 0.0j
            for s in subsets])

        gram = np.empty((dim, dim), dtype=complex)
        braw = np.empty((dim, dim), dtype=complex)
        for i in range(dim):
            for j in range(dim):
                gram[i, j] = math.factorial(k) * np.conj(
                    _table_value(self.table_a, masks[i], masks[j]))
                braw[i, j] = math.factorial(n - k) * _table_value(
                    self.table_b, comp_masks[i], comp_masks[j])
        phase = eps * cross
        c_raw = phase[:, None] * np.conj(phase)[None, :] * braw

        pref = math.comb(n, k) / (math.factorial(n) * self.norm_sq)
        total = pref * complex(np.sum(c_raw * np.conj(gram)))
        if abs(total.imag) > IMAG_RESIDUE_TOL:
            raise ProjectionError(
                f"p({k}) imaginary residue {total.imag:.3e} exceeds tolerance")
        return c_raw, gram, pref, total.real

    def outcome(self, k: int) -> ProjectionOutcome:
        c_raw, gram, pref, prob = self.raw_matrices(k)
        if prob <= 0:
            raise ProjectionError(f"p({k}) = {prob:g} not positive")
        coeff = (pref / prob) * c_raw
        return ProjectionOutcome(k=k, probability=prob, coeff=coeff, gram=gram)

    def probability(self, k: int) -> float:
        return self.raw_matrices(k)[3]


def _free_boson_outcome(n: int, k: int, ell: float) -> ProjectionOutcome:
    # condensate: every split function is the same constant, the kernel is
    # flat; represent it on the C(n, k) split basis with rank one
    dim = math.comb(n, k)
    prob = math.comb(n, k) * ell ** k * (1.0 - ell) ** (n - k)
    gram = np.full((dim, dim), ell ** k, dtype=complex)
    coeff = np.full((dim, dim), 1.0 / (dim * dim * ell ** k), dtype=complex)
    return ProjectionOutcome(k=k, probability=prob, coeff=coeff, gram=gram)


def _check_k(n: int, k: int):
    if not 0 <= k <= n:
        raise InvalidInputError(f"need 0 <= k <= n, got k={k}, n={n}")


def projection_probability(roots: BetheRoots, k: int, ell: float | None = None) -> float:
    """Probability of finding exactly k particles in the arc [0, ell]."""
    ell = roots.params.ell if ell is None else ell
    _check_k(roots.n, k)
    if roots.params.is_free:
        return math.comb(roots.n, k) * ell ** k * (1.0 - ell) ** (roots.n - k)
    return _Engine(roots, ell, ks=[k]).probability(k)


def probability_distribution(roots: BetheRoots, ell: float | None = None) -> np.ndarray:
    """Vector of p(k) for k = 0..N."""
    ell = roots.params.ell if ell is None else ell
    n = roots.n
    if roots.params.is_free:
        return np.array([math.comb(n, k) * ell ** k * (1.0 - ell) ** (n - k)
                         for k in range(n + 1)])
    engine = _Engine(roots, ell, ks=range(n + 1))
    return np.array([engine.probability(k) for k in range(n + 1)])


def build_reduced_density(roots: BetheRoots, k: int, ell: float | None = None) -> ProjectionOutcome:
    """Reduced density matrix of the k-particle projection, as (coeff, gram)."""
    ell = roots.params.ell if ell is None else ell
    _check_k(roots.n, k)
    if roots.params.is_free:
        return _free_boson_outcome(roots.n, k, ell)
    return _Engine(roots, ell, ks=[k]).outcome(k)


def entanglement_spectrum(outcome: ProjectionOutcome, n: int | None = None) -> EntanglementSpectrum:
    """Eigenvalues and entropy of the degenerate-kernel operator.

    The non-Hermitian product coeff . gram is reduced to Hermitian form by
    factoring the Gram matrix G = L L-dagger through its eigendecomposition
    and diagonalizing L-dagger . coeff . L.
    """
    gram = outcome.gram
    dim = gram.shape[0]
    gvals, gvecs = np.linalg.eigh(gram)
    gvals = np.clip(gvals, 0.0, None)
    factor = gvecs * np.sqrt(gvals)[None, :]
    core = factor.conj().T @ outcome.coeff @ factor
    eigenvalues = np.linalg.eigvalsh((core + core.conj().T) / 2.0)[::-1].copy()

    if eigenvalues.min(initial=0.0) < NEGATIVE_EIGENVALUE_TOL:
        raise ProjectionError(
            f"reduced density eigenvalue {eigenvalues.min():.3e} below "
            f"{NEGATIVE_EIGENVALUE_TOL:g}: inconsistent coeff/gram assembly")
    eigenvalues[eigenvalues < 0.0] = 0.0
    trace = eigenvalues.sum()
    if abs(trace - 1.0) > TRACE_TOL:
        raise ProjectionError(f"spectrum trace {trace!r} deviates from 1")

    pos = eigenvalues[eigenvalues > 0.0]
    # round-off in -sum(a log a) can leave a tiny negative residue when a
    # single eigenvalue carries (almost) all the weight
    entropy = float(-(pos * np.log2(pos)).sum())
    if entropy <= 0.0:
        entropy = 0.0
    rank = int((eigenvalues > RANK_EIGENVALUE_CUTOFF).sum())
    if n is None:
        # dim = C(n, k) with k known: recover the bound from the matrix size
        bound = math.log2(dim)
    else:
        bound = entropy_upper_bound(n, outcome.k)
    return EntanglementSpectrum(eigenvalues=eigenvalues, entropy_bits=entropy,
                                rank=rank, upper_bound_bits=bound)


def entanglement_report(roots: BetheRoots, ell: float | None = None) -> EntanglementReport:
    """p(k), S_A(k), and weighted entanglements for every outcome k.

    The extractable entanglement is the maximum weighted entanglement;
    among outcomes tied to within round-off the one closest to the
    balanced split (then the smaller k) is reported.
    """
    ell = roots.params.ell if ell is None else ell
    n = roots.n
    if roots.params.is_free:
        engine = None
    else:
        engine = _Engine(roots, ell, ks=range(n + 1))
    summaries = []
    for k in range(n + 1):
        if engine is None:
            out = _free_boson_outcome(n, k, ell)
        else:
            out = engine.outcome(k)
        spec = entanglement_spectrum(out, n=n)
        summaries.append(OutcomeSummary(
            k=k, probability=out.probability, spectrum=spec,
            weighted_bits=out.probability * spec.entropy_bits))

    weighted = np.array([s.weighted_bits for s in summaries])
    best = weighted.max()
    tied = [s.k for s in summaries
            if s.weighted_bits >= best - 1e-9 * max(best, 1e-30) - 1e-300]
    argmax = min(tied, key=lambda k: (abs(k - n / 2.0), k))
    return EntanglementReport(params=roots.params, outcomes=tuple(summaries),
                              epp_bits=float(best), argmax_k=int(argmax))
