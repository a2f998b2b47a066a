"""Covert design optimizer.

Solves the two-stage allocation problem for the equal-power regime:
first find the largest average power whose closed-form minimum detection
error probability still meets the covertness target (a scalar root of a
monotone function, solved by bracketed bisection), then pick the integer
pilot count maximizing the effective SINR at that power.  The power
solve comes first because the warden's error probability depends on the
slot length only, never on the pilot/data split.
"""

import math
from dataclasses import dataclass
from typing import Callable, Tuple

from .detection import min_detection_error
from .link_model import PowerAllocation, SystemConfig, effective_sinr

# bisection stops when the detection-error residual or the bracket width
# falls below these
XI_TOL = 1e-10
RHO_TOL = 1e-13
_BRACKET_CAP_FACTOR = 1e3
_MAX_BISECTIONS = 300


class SolverError(RuntimeError):
    """No root bracket found; the configuration is pathological."""


@dataclass(frozen=True)
class DesignResult:
    """Output of the full design optimization."""

    rho_star: float
    np_continuous: float
    np_star: int
    gamma_eff_star: float
    xi_star_achieved: float
    np_ceil: int
    np_floor: int


def _bisect_decreasing(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    hi_cap: float,
    f_tol: float = XI_TOL,
    x_tol: float = RHO_TOL,
) -> float:
    """Root of a continuous decreasing fn, expanding hi until fn(hi) < 0."""
    if fn(lo) < 0.0:
        raise SolverError(f"no sign change: fn({lo}) is already negative")
    while fn(hi) > 0.0:
        hi *= 2.0
        if hi > hi_cap:
            raise SolverError(
                f"no sign change found while expanding the bracket up to {hi_cap}"
            )
    for _ in range(_MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        value = fn(mid)
        if abs(value) < f_tol or (hi - lo) < x_tol:
            return mid
        if value > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def solve_rho_star(cfg: SystemConfig) -> float:
    """Largest average power meeting the covertness target.

    Solves xi_star(rho) = 1 - epsilon by bisection; xi_star is continuous
    and strictly decreasing in rho, so the root is unique.
    """
    target = 1.0 - cfg.epsilon

    def gap(rho: float) -> float:
        return min_detection_error(cfg, rho).xi_star - target

    sw2 = cfg.sigma_w2
    return _bisect_decreasing(
        gap, lo=1e-12 * sw2, hi=sw2, hi_cap=_BRACKET_CAP_FACTOR * sw2
    )


def np_continuous(cfg: SystemConfig, rho_star: float) -> float:
    """Real-valued pilot count maximizing the effective SINR at equal power.

    The positive root of lambda rho x^2 + 2 kappa x - n kappa = 0 with
    kappa = lambda rho + sigma_b2:

        x = (-kappa + sqrt(kappa (kappa + n lambda rho))) / (lambda rho)

    Always lies in (0, n).
    """
    if not (rho_star > 0):
        raise ValueError(f"np_continuous requires rho_star > 0, got {rho_star!r}")
    lam = cfg.lambda_ab
    kappa = lam * rho_star + cfg.sigma_b2
    return (-kappa + math.sqrt(kappa * (kappa + cfg.n * lam * rho_star))) / (
        lam * rho_star
    )


def np_star(cfg: SystemConfig, rho_star: float) -> Tuple[int, int, int]:
    """Integer pilot count maximizing the effective SINR at equal power.

    Evaluates the effective SINR at the ceiling and floor of the
    continuous optimum (clamped into [1, n-1]) and keeps the larger, the
    ceiling on ties.  Returns (np_star, np_ceil, np_floor).
    """
    x = np_continuous(cfg, rho_star)
    lo_limit, hi_limit = 1, cfg.n - 1
    np_floor = min(max(math.floor(x), lo_limit), hi_limit)
    np_ceil = min(max(math.ceil(x), lo_limit), hi_limit)

    def gamma_eff(k: int) -> float:
        return effective_sinr(cfg, PowerAllocation.equal_power(cfg.n, rho_star, k))

    best = np_ceil if gamma_eff(np_ceil) >= gamma_eff(np_floor) else np_floor
    return best, np_ceil, np_floor


def np_sensitivity(cfg: SystemConfig, rho: float) -> float:
    """Derivative of the continuous pilot count with respect to the power.

        - sigma_b2 [2 kappa + n rho lambda - 2 sqrt(kappa (kappa + n rho lambda))]
          / (2 lambda rho^2 sqrt(kappa (kappa + n rho lambda)))

    Strictly negative: raising the power always lowers the pilot optimum.
    """
    if not (rho > 0):
        raise ValueError(f"np_sensitivity requires rho > 0, got {rho!r}")
    lam = cfg.lambda_ab
    kappa = lam * rho + cfg.sigma_b2
    root = math.sqrt(kappa * (kappa + cfg.n * lam * rho))
    return -cfg.sigma_b2 * (2.0 * kappa + cfg.n * rho * lam - 2.0 * root) / (
        2.0 * lam * rho * rho * root
    )


def design(cfg: SystemConfig) -> DesignResult:
    """Full covert design: solve the power, then the pilot count."""
    rho_star = solve_rho_star(cfg)
    best, np_ceil, np_floor = np_star(cfg, rho_star)
    alloc = PowerAllocation.equal_power(cfg.n, rho_star, best)
    return DesignResult(
        rho_star=rho_star,
        np_continuous=np_continuous(cfg, rho_star),
        np_star=best,
        gamma_eff_star=effective_sinr(cfg, alloc),
        xi_star_achieved=min_detection_error(cfg, rho_star).xi_star,
        np_ceil=np_ceil,
        np_floor=np_floor,
    )
