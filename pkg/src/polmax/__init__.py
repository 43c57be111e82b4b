"""Degree of polarization of two-mode quantum light and its maximizers.

The package computes the Hilbert-Schmidt degree of polarization from
photon-number statistics, evaluates the closed forms available for the
usual catalog of states, and finds the maximally polarized number
distribution at fixed mean photon number by solving a small convex
quadratic program with an active-set method.
"""

from .degree import (
    DegreeMethod,
    DegreeResult,
    beta22_density,
    bures_degree_twin_reference,
    degree_coherent_closed_form,
    degree_from_solution,
    degree_optimal_closed_form,
    degree_pure_n_photon,
    degree_thermal_series,
    degree_twin_beam_exact,
    hs_degree,
    optimal_distribution,
    scaled_bessel_i1,
)
from .distributions import (
    Custom,
    NPhotonPure,
    PhotonDistribution,
    QuadratureCoherent,
    StateSpec,
    Su2Coherent,
    ThermalTotal,
    TwinBeam,
    custom_distribution,
    distribution_moments,
    mandel_q,
    n_photon_distribution,
    poisson_dim_for_tail,
    poisson_distribution,
    state_distribution,
    su2_coherent_coefficients,
    thermal_dim_for_tail,
    thermal_distribution,
    twin_beam_dim_for_tail,
    twin_beam_distribution,
    twin_beam_xi_for_mean,
)
from .qpsolve import (
    ConvergenceError,
    DegenerateFreeSetError,
    InfeasibleProblemError,
    KktReport,
    KktResiduals,
    QpProblem,
    QpSolution,
    build_problem,
    kkt_equality_solve,
    solve,
    support_size,
    verify_kkt,
)

__version__ = "0.1.0"

__all__ = [
    "DegreeMethod",
    "DegreeResult",
    "PhotonDistribution",
    "StateSpec",
    "NPhotonPure",
    "Su2Coherent",
    "QuadratureCoherent",
    "TwinBeam",
    "ThermalTotal",
    "Custom",
    "QpProblem",
    "QpSolution",
    "KktResiduals",
    "KktReport",
    "InfeasibleProblemError",
    "DegenerateFreeSetError",
    "ConvergenceError",
    "hs_degree",
    "degree_pure_n_photon",
    "degree_coherent_closed_form",
    "degree_optimal_closed_form",
    "degree_thermal_series",
    "degree_twin_beam_exact",
    "bures_degree_twin_reference",
    "degree_from_solution",
    "scaled_bessel_i1",
    "beta22_density",
    "optimal_distribution",
    "poisson_distribution",
    "thermal_distribution",
    "twin_beam_distribution",
    "n_photon_distribution",
    "custom_distribution",
    "su2_coherent_coefficients",
    "distribution_moments",
    "mandel_q",
    "state_distribution",
    "poisson_dim_for_tail",
    "thermal_dim_for_tail",
    "twin_beam_dim_for_tail",
    "twin_beam_xi_for_mean",
    "build_problem",
    "kkt_equality_solve",
    "solve",
    "verify_kkt",
    "support_size",
]
