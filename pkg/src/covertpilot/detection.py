"""Warden-side detection analytics.

The warden observes n complex samples and must decide whether a slot
carried a transmission.  This module provides the KL divergence between
the no-transmission and transmission observation distributions, its
derivative in the data power fraction, the resulting lower bound on the
warden's minimum detection error probability, and, for the equal-power
regime, the optimal radiometer threshold and the closed-form minimum
detection error probability itself.
"""

import math
from dataclasses import dataclass
from typing import Optional

from .link_model import PowerAllocation, SystemConfig
from .specfun import reg_lower_gamma

# relative power mismatch below which an allocation counts as equal-power
EQUAL_POWER_REL_TOL = 1e-9


@dataclass(frozen=True)
class DetectionReport:
    """Warden detection metrics for one allocation.

    tau_star, xi_star, alpha and beta have closed forms only in the
    equal-power regime and are None otherwise.
    """

    d01: float
    xi_lower_bound: float
    tau_star: Optional[float] = None
    xi_star: Optional[float] = None
    alpha: Optional[float] = None
    beta: Optional[float] = None


def _per_sample_divergence(snr: float) -> float:
    """KL divergence of CN(0, v) from CN(0, v (1 + snr)) per sample."""
    return math.log1p(snr) - snr / (1.0 + snr)


def kl_divergence(cfg: SystemConfig, alloc: PowerAllocation) -> float:
    """KL divergence of the warden's H0 observation law from its H1 law.

    Sums the per-sample divergence over the pilot and data segments:

        n_p [ln(1 + rho_p/sigma_w2) - (rho_p/sigma_w2)/(1 + rho_p/sigma_w2)]
      + n_d [ln(1 + rho_d/sigma_w2) - (rho_d/sigma_w2)/(1 + rho_d/sigma_w2)]
    """
    if alloc.n != cfg.n:
        raise ValueError(
            f"allocation is for n={alloc.n} but the system config has n={cfg.n}"
        )
    sw2 = cfg.sigma_w2
    return alloc.n_p * _per_sample_divergence(alloc.rho_p / sw2) + alloc.n_d * (
        _per_sample_divergence(alloc.rho_d / sw2)
    )


def kl_divergence_deta(cfg: SystemConfig, rho: float, eta: float, n_p: int) -> float:
    """Derivative of the KL divergence with respect to the data power fraction.

        n^2 rho^2 (n eta - n_d) (n^2 rho^2 eta^2 - n^2 rho^2 eta + n_d n_p sigma_w^4)
        / [(n eta rho + n_d sigma_w2)^2 ((1 - eta) n rho + n_p sigma_w2)^2]

    Vanishes at eta = n_d / n, the equal-power point.  Matches the central
    finite difference of kl_divergence over eta.
    """
    if not 1 <= n_p <= cfg.n - 1:
        raise ValueError(f"n_p must lie in [1, n-1], got {n_p!r}")
    if not (rho > 0):
        raise ValueError(f"kl_divergence_deta requires rho > 0, got {rho!r}")
    if not (0.0 < eta < 1.0):
        raise ValueError(f"eta must lie in (0, 1), got {eta!r}")
    n = cfg.n
    n_d = n - n_p
    sw2 = cfg.sigma_w2
    nrho = n * rho
    num = (
        n * n
        * rho * rho
        * (n * eta - n_d)
        * (nrho * nrho * eta * eta - nrho * nrho * eta + n_d * n_p * sw2 * sw2)
    )
    den = (nrho * eta + n_d * sw2) ** 2 * ((1.0 - eta) * nrho + n_p * sw2) ** 2
    return num / den


def covertness_lower_bound(d01: float) -> float:
    """Lower bound on the warden's minimum detection error: max(0, 1 - sqrt(d01/2))."""
    if not (d01 >= 0):
        raise ValueError(f"d01 must be nonnegative, got {d01!r}")
    return max(0.0, 1.0 - math.sqrt(d01 / 2.0))


def optimal_threshold(rho: float, sigma_w2: float) -> float:
    """Radiometer threshold minimizing alpha + beta in the equal-power regime.

    tau = (sigma_w2 / rho) (sigma_w2 + rho) ln(1 + rho / sigma_w2)

    Always lies strictly between the mean per-sample powers under the two
    hypotheses, sigma_w2 and sigma_w2 + rho.
    """
    if not (rho > 0):
        raise ValueError(f"optimal_threshold requires rho > 0, got {rho!r}")
    if not (sigma_w2 > 0):
        raise ValueError(f"sigma_w2 must be positive, got {sigma_w2!r}")
    return (sigma_w2 / rho) * (sigma_w2 + rho) * math.log1p(rho / sigma_w2)


def min_detection_error(cfg: SystemConfig, rho: float) -> DetectionReport:
    """Closed-form minimum detection error probability, equal-power regime.

    With rho_p = rho_d = rho the optimal detector reduces to the
    radiometer at the optimal threshold, and with P the regularized lower
    incomplete gamma function:

        alpha = 1 - P(n, n tau / sigma_w2)
        beta  =     P(n, n tau / (rho + sigma_w2))
        xi    = alpha + beta

    The result depends on n only, not on the pilot/data split.
    """
    if not (rho > 0):
        raise ValueError(f"min_detection_error requires rho > 0, got {rho!r}")
    sw2 = cfg.sigma_w2
    n = cfg.n
    tau = optimal_threshold(rho, sw2)
    alpha = 1.0 - reg_lower_gamma(n, n * tau / sw2)
    beta = reg_lower_gamma(n, n * tau / (rho + sw2))
    d01 = n * _per_sample_divergence(rho / sw2)
    return DetectionReport(
        d01=d01,
        xi_lower_bound=covertness_lower_bound(d01),
        tau_star=tau,
        xi_star=alpha + beta,
        alpha=alpha,
        beta=beta,
    )


def detection_report(cfg: SystemConfig, alloc: PowerAllocation) -> DetectionReport:
    """Full detection report for an allocation.

    The KL divergence and the covertness lower bound are always
    available; the closed-form threshold and error probabilities exist
    only when the pilot and data powers match.
    """
    d01 = kl_divergence(cfg, alloc)
    if alloc.rho > 0 and alloc.is_equal_power(EQUAL_POWER_REL_TOL):
        report = min_detection_error(cfg, alloc.rho)
        return DetectionReport(
            d01=d01,
            xi_lower_bound=covertness_lower_bound(d01),
            tau_star=report.tau_star,
            xi_star=report.xi_star,
            alpha=report.alpha,
            beta=report.beta,
        )
    return DetectionReport(d01=d01, xi_lower_bound=covertness_lower_bound(d01))
