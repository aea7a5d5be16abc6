"""Exact entanglement of fixed-number projections of the Lieb-Liniger ground state.

The package computes, without uncontrolled approximation, the probability
p(k) of finding k of N delta-interacting bosons in an arc of the unit
ring, the spectrum and von Neumann entropy of the reduced density matrix
conditioned on that outcome, and the projectively extractable entanglement
E_PP = max_k p(k) S_A(k).  The impenetrable-boson limit is handled exactly
through free-fermion counting statistics, together with its large-N
Fisher-Hartwig asymptotics.
"""
from .bethe import (
    TG,
    BetheRoots,
    GaudinData,
    InvalidInputError,
    ModelParams,
    SolverError,
    bethe_equation_residual,
    bethe_roots,
    gaudin_data,
    gaudin_matrix,
    ground_state_quantum_numbers,
    pair_phase_matrix,
    solve_bethe_roots,
    wavefunction_value,
)
from .counting import (
    CountingModel,
    asymptotic_cumulants,
    balanced_probability_asymptotic,
    barnes_log_g,
    characteristic_function,
    counting_distribution,
    counting_model,
    cumulants,
    fisher_hartwig_f,
    gaussian_pk,
    overlap_matrix,
    variance_asymptotic,
)
from .oracle import (
    McEstimate,
    grid_reduced_density,
    grid_trace,
    mc_norm,
    mc_projection_probability,
    quad_ordered_exp_integral,
)
from .projection import (
    EntanglementReport,
    EntanglementSpectrum,
    OutcomeSummary,
    ProjectionError,
    ProjectionOutcome,
    build_reduced_density,
    entanglement_report,
    entanglement_spectrum,
    entropy_upper_bound,
    probability_distribution,
    projection_probability,
)
from .simplex import (
    OrderedExpIntegralKey,
    batch_integrals,
    cache_stats,
    configure_cache,
    make_key,
    ordered_exp_integral,
    ordered_exp_integrals_fast,
)

__version__ = "0.1.0"

__all__ = [
    "TG",
    "BetheRoots",
    "GaudinData",
    "InvalidInputError",
    "ModelParams",
    "SolverError",
    "bethe_equation_residual",
    "bethe_roots",
    "gaudin_data",
    "gaudin_matrix",
    "ground_state_quantum_numbers",
    "pair_phase_matrix",
    "solve_bethe_roots",
    "wavefunction_value",
    "CountingModel",
    "asymptotic_cumulants",
    "balanced_probability_asymptotic",
    "barnes_log_g",
    "characteristic_function",
    "counting_distribution",
    "counting_model",
    "cumulants",
    "fisher_hartwig_f",
    "gaussian_pk",
    "overlap_matrix",
    "variance_asymptotic",
    "McEstimate",
    "grid_reduced_density",
    "grid_trace",
    "mc_norm",
    "mc_projection_probability",
    "quad_ordered_exp_integral",
    "EntanglementReport",
    "EntanglementSpectrum",
    "OutcomeSummary",
    "ProjectionError",
    "ProjectionOutcome",
    "build_reduced_density",
    "entanglement_report",
    "entanglement_spectrum",
    "entropy_upper_bound",
    "probability_distribution",
    "projection_probability",
    "OrderedExpIntegralKey",
    "batch_integrals",
    "cache_stats",
    "configure_cache",
    "make_key",
    "ordered_exp_integral",
    "ordered_exp_integrals_fast",
    "__version__",
]
