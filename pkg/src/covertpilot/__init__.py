"""Pilot/data resource allocation for covert wireless links.

Computes, optimizes, and Monte-Carlo-verifies how a transmitter should
split a finite slot between channel-estimation pilots and data so that
the receiver's effective SINR is maximized while a warden's best
detector stays close to blind guessing.
"""

from .detection import (
    DetectionReport,
    covertness_lower_bound,
    detection_report,
    kl_divergence,
    kl_divergence_deta,
    min_detection_error,
    optimal_threshold,
)
from .link_model import (
    EstimationStats,
    PowerAllocation,
    SystemConfig,
    effective_sinr,
    effective_sinr_equal_power,
    estimation_stats,
    sinr,
    sinr_eta,
)
from .monte_carlo import (
    BobEstimationDiagnostics,
    LikelihoodRatioTest,
    McConfig,
    McEstimate,
    Radiometer,
    TrialBudgetError,
    WillieErrorRates,
    WillieObservation,
    bob_estimation_diagnostics,
    count_detector_disagreements,
    draw_willie_observation,
    segment_energies,
    simulate_bob_sinr,
    simulate_willie,
)
from .optimizer import (
    DesignResult,
    SolverError,
    design,
    np_continuous,
    np_sensitivity,
    np_star,
    solve_rho_star,
)
from .specfun import (
    ConvergenceError,
    RegGammaResult,
    chi_square_cdf,
    ln_gamma,
    reg_gamma,
    reg_lower_gamma,
)

__version__ = "0.1.0"

__all__ = [
    "BobEstimationDiagnostics",
    "ConvergenceError",
    "DesignResult",
    "DetectionReport",
    "EstimationStats",
    "LikelihoodRatioTest",
    "McConfig",
    "McEstimate",
    "PowerAllocation",
    "Radiometer",
    "RegGammaResult",
    "SolverError",
    "SystemConfig",
    "TrialBudgetError",
    "WillieErrorRates",
    "WillieObservation",
    "bob_estimation_diagnostics",
    "chi_square_cdf",
    "count_detector_disagreements",
    "covertness_lower_bound",
    "design",
    "detection_report",
    "draw_willie_observation",
    "effective_sinr",
    "effective_sinr_equal_power",
    "estimation_stats",
    "kl_divergence",
    "kl_divergence_deta",
    "ln_gamma",
    "min_detection_error",
    "np_continuous",
    "np_sensitivity",
    "np_star",
    "optimal_threshold",
    "reg_gamma",
    "reg_lower_gamma",
    "segment_energies",
    "simulate_bob_sinr",
    "simulate_willie",
    "sinr",
    "sinr_eta",
    "solve_rho_star",
]
