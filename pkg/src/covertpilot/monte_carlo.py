"""Monte Carlo verification of the detection and estimation analytics.

The warden's detectors (energy detector and likelihood ratio test) are
functions of the received energy in the pilot and data segments, and the
sum of k iid squared magnitudes of CN(0, v) samples is Gamma(k, v), so
the hot path draws segment energies directly.  Bob's MMSE estimate
depends on the pilot observations only through their average, whose
noise term is CN(0, sigma_b2 / n_p), so that average is drawn directly
as well.  Sample-level observation vectors remain available through
draw_willie_observation for model-level checks.

Determinism: trials are processed in fixed-size chunks and every chunk
draws from its own Philox substream keyed by (seed, domain, chunk
index).  Counts are reduced as exact integers, so estimates are
bit-identical for a given (seed, config) regardless of how chunks are
scheduled.
"""

import math
import numbers
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Tuple, Union

import numpy as np

from .link_model import PowerAllocation, SystemConfig

CHUNK_TRIALS = 1 << 14
MIN_TRIALS = 1_000

_DOMAIN_WILLIE = 1
_DOMAIN_BOB = 2


class TrialBudgetError(Exception):
    """Trial budget below the minimum for a reportable estimate."""


@dataclass(frozen=True)
class McConfig:
    """Monte Carlo settings; the seed fully determines every stream."""

    trials: int
    seed: int
    prior_h1: float = 0.5

    def __post_init__(self):
        if not isinstance(self.trials, numbers.Integral) or self.trials < MIN_TRIALS:
            raise TrialBudgetError(
                f"at least {MIN_TRIALS} trials are required for a reported "
                f"estimate, got {self.trials!r}"
            )
        if not isinstance(self.seed, numbers.Integral) or not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if not (0.0 < self.prior_h1 < 1.0):
            raise ValueError(f"prior_h1 must lie in (0, 1), got {self.prior_h1!r}")


@dataclass(frozen=True)
class McEstimate:
    """Point estimate with its standard error and trial count."""

    value: float
    std_err: float
    trials: int


@dataclass(frozen=True)
class LikelihoodRatioTest:
    """Log-likelihood-ratio detector; threshold 0 minimizes alpha + beta."""

    log_threshold: float = 0.0


@dataclass(frozen=True)
class Radiometer:
    """Energy detector on the average received power per channel use."""

    threshold: float


Detector = Union[LikelihoodRatioTest, Radiometer]


class WillieErrorRates(NamedTuple):
    alpha: McEstimate
    beta: McEstimate
    xi: McEstimate


@dataclass(frozen=True)
class WillieObservation:
    """One slot of warden samples under a stated hypothesis."""

    samples: np.ndarray
    hypothesis: str  # "H0" or "H1"

    def __post_init__(self):
        if self.hypothesis not in ("H0", "H1"):
            raise ValueError(f"hypothesis must be 'H0' or 'H1', got {self.hypothesis!r}")


@dataclass(frozen=True)
class BobEstimationDiagnostics:
    """Empirical MMSE statistics from the Bob-side simulation."""

    var_h_hat: McEstimate
    var_h_tilde: McEstimate
    orth_corr_re: McEstimate
    orth_corr_im: McEstimate


def _stream(seed: int, domain: int, chunk: int) -> np.random.Generator:
    key = np.array([seed, (domain << 48) | chunk], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _chunks(trials: int) -> Iterator[Tuple[int, int]]:
    full, rest = divmod(trials, CHUNK_TRIALS)
    for chunk in range(full):
        yield chunk, CHUNK_TRIALS
    if rest:
        yield full, rest


def _prob_estimate(count: int, trials: int) -> McEstimate:
    p = count / trials
    return McEstimate(
        value=p, std_err=math.sqrt(p * (1.0 - p) / trials), trials=trials
    )


def _complex_normal(rng: np.random.Generator, var: float, size: int) -> np.ndarray:
    # circularly symmetric: two real Gaussians of variance var/2 per component
    scale = math.sqrt(var / 2.0)
    return scale * rng.standard_normal(size) + 1j * scale * rng.standard_normal(size)


def draw_willie_observation(
    cfg: SystemConfig,
    alloc: PowerAllocation,
    hypothesis: str,
    rng: np.random.Generator,
) -> WillieObservation:
    """Sample-level warden observation for one slot.

    Under H0 all n samples are CN(0, sigma_w2).  Under H1 the pilot and
    data symbols are Gaussian from the warden's point of view (it knows
    their statistics, not their values), so the first n_p samples are
    CN(0, rho_p + sigma_w2) and the rest CN(0, rho_d + sigma_w2).
    """
    sw2 = cfg.sigma_w2
    if hypothesis == "H0":
        samples = _complex_normal(rng, sw2, cfg.n)
    else:
        pilot = _complex_normal(rng, alloc.rho_p + sw2, alloc.n_p)
        data = _complex_normal(rng, alloc.rho_d + sw2, alloc.n_d)
        samples = np.concatenate([pilot, data])
    return WillieObservation(samples=samples, hypothesis=hypothesis)


def segment_energies(obs: WillieObservation, n_p: int) -> Tuple[float, float]:
    """Total |y|^2 in the pilot and data segments of an observation."""
    energy = np.abs(obs.samples) ** 2
    return float(np.sum(energy[:n_p])), float(np.sum(energy[n_p:]))


def _decides_h1(
    detector: Detector,
    cfg: SystemConfig,
    alloc: PowerAllocation,
    pilot_energy: np.ndarray,
    data_energy: np.ndarray,
) -> np.ndarray:
    sw2 = cfg.sigma_w2
    if isinstance(detector, Radiometer):
        return (pilot_energy + data_energy) / cfg.n > detector.threshold
    if isinstance(detector, LikelihoodRatioTest):
        w_p = 1.0 / sw2 - 1.0 / (alloc.rho_p + sw2)
        w_d = 1.0 / sw2 - 1.0 / (alloc.rho_d + sw2)
        threshold = (
            alloc.n_p * math.log1p(alloc.rho_p / sw2)
            + alloc.n_d * math.log1p(alloc.rho_d / sw2)
            + detector.log_threshold
        )
        return w_p * pilot_energy + w_d * data_energy > threshold
    raise TypeError(f"unknown detector type: {detector!r}")


def _draw_segment_energies(
    rng: np.random.Generator,
    cfg: SystemConfig,
    alloc: PowerAllocation,
    size: int,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Segment energies for `size` trials under H0 and H1.

    Draw order is fixed (H0 pilot, H0 data, H1 pilot, H1 data) so that
    every consumer of a chunk stream sees identical samples.
    """
    sw2 = cfg.sigma_w2
    e_pilot_h0 = rng.gamma(alloc.n_p, sw2, size)
    e_data_h0 = rng.gamma(alloc.n_d, sw2, size)
    e_pilot_h1 = rng.gamma(alloc.n_p, alloc.rho_p + sw2, size)
    e_data_h1 = rng.gamma(alloc.n_d, alloc.rho_d + sw2, size)
    return e_pilot_h0, e_data_h0, e_pilot_h1, e_data_h1


def simulate_willie(
    cfg: SystemConfig,
    alloc: PowerAllocation,
    mc: McConfig,
    detector: Detector,
) -> WillieErrorRates:
    """Empirical false alarm, missed detection, and total error rates.

    Runs mc.trials independent slots under each hypothesis and applies
    the detector.  xi = alpha + beta; its standard error combines the two
    binomial errors in quadrature.
    """
    if alloc.n != cfg.n:
        raise ValueError(
            f"allocation is for n={alloc.n} but the system config has n={cfg.n}"
        )
    false_alarms = 0
    missed = 0
    for chunk, size in _chunks(mc.trials):
        rng = _stream(mc.seed, _DOMAIN_WILLIE, chunk)
        ep0, ed0, ep1, ed1 = _draw_segment_energies(rng, cfg, alloc, size)
        false_alarms += int(np.count_nonzero(_decides_h1(detector, cfg, alloc, ep0, ed0)))
        missed += int(np.count_nonzero(~_decides_h1(detector, cfg, alloc, ep1, ed1)))
    alpha = _prob_estimate(false_alarms, mc.trials)
    beta = _prob_estimate(missed, mc.trials)
    xi = McEstimate(
        value=alpha.value + beta.value,
        std_err=math.hypot(alpha.std_err, beta.std_err),
        trials=mc.trials,
    )
    return WillieErrorRates(alpha=alpha, beta=beta, xi=xi)


def count_detector_disagreements(
    cfg: SystemConfig,
    alloc: PowerAllocation,
    mc: McConfig,
    detector_a: Detector,
    detector_b: Detector,
) -> int:
    """Trials (over both hypotheses) where the two detectors decide differently.

    Uses the same substreams as simulate_willie, so both detectors see
    exactly the samples that produced the reported error rates.
    """
    disagreements = 0
    for chunk, size in _chunks(mc.trials):
        rng = _stream(mc.seed, _DOMAIN_WILLIE, chunk)
        ep0, ed0, ep1, ed1 = _draw_segment_energies(rng, cfg, alloc, size)
        for ep, ed in ((ep0, ed0), (ep1, ed1)):
            a = _decides_h1(detector_a, cfg, alloc, ep, ed)
            b = _decides_h1(detector_b, cfg, alloc, ep, ed)
            disagreements += int(np.count_nonzero(a != b))
    return disagreements


def _draw_bob_trial(
    rng: np.random.Generator,
    cfg: SystemConfig,
    alloc: PowerAllocation,
    size: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """(channel, MMSE estimate) pairs for `size` trials.

    The known unit-power pilot sequence makes the pilot average the
    sufficient statistic: z = sqrt(rho_p) h + w with w ~ CN(0, sigma_b2/n_p),
    and the MMSE estimate is a fixed scalar multiple of z.
    """
    lam = cfg.lambda_ab
    h = _complex_normal(rng, lam, size)
    w = _complex_normal(rng, cfg.sigma_b2 / alloc.n_p, size)
    z = math.sqrt(alloc.rho_p) * h + w
    gain = math.sqrt(alloc.rho_p) * lam * alloc.n_p / (
        lam * alloc.n_p * alloc.rho_p + cfg.sigma_b2
    )
    return h, gain * z


def simulate_bob_sinr(
    cfg: SystemConfig, alloc: PowerAllocation, mc: McConfig
) -> McEstimate:
    """Empirical post-estimation SINR at Bob.

    Per trial, draws the fading coefficient, forms the MMSE estimate from
    the pilot phase, and accumulates the data-phase signal power
    rho_d |h_hat|^2 against the interference-plus-noise power
    rho_d |h - h_hat|^2 + sigma_b2.  Returns the ratio of means with a
    delta-method standard error.
    """
    if alloc.n != cfg.n:
        raise ValueError(
            f"allocation is for n={alloc.n} but the system config has n={cfg.n}"
        )
    sum_s = sum_i = sum_ss = sum_ii = sum_si = 0.0
    for chunk, size in _chunks(mc.trials):
        rng = _stream(mc.seed, _DOMAIN_BOB, chunk)
        h, h_hat = _draw_bob_trial(rng, cfg, alloc, size)
        signal = alloc.rho_d * np.abs(h_hat) ** 2
        interference = alloc.rho_d * np.abs(h - h_hat) ** 2 + cfg.sigma_b2
        sum_s += float(np.sum(signal))
        sum_i += float(np.sum(interference))
        sum_ss += float(np.sum(signal * signal))
        sum_ii += float(np.sum(interference * interference))
        sum_si += float(np.sum(signal * interference))
    trials = mc.trials
    mean_s = sum_s / trials
    mean_i = sum_i / trials
    ratio = mean_s / mean_i
    # delta method: var(ratio) ~ var(s - ratio * i) / (trials * mean_i^2)
    var_resid = (sum_ss - 2.0 * ratio * sum_si + ratio * ratio * sum_ii) / trials
    std_err = math.sqrt(max(var_resid, 0.0) / trials) / mean_i
    return McEstimate(value=ratio, std_err=std_err, trials=trials)


def bob_estimation_diagnostics(
    cfg: SystemConfig, alloc: PowerAllocation, mc: McConfig
) -> BobEstimationDiagnostics:
    """Empirical estimate/error variances and their normalized correlation.

    Uses the same substreams as simulate_bob_sinr.  The correlation of
    h_hat with h - h_hat is zero for an MMSE split; both its components
    are reported with standard errors for that check.
    """
    sum_hh = sum_hh2 = 0.0
    sum_ee = sum_ee2 = 0.0
    sum_cre = sum_cre2 = 0.0
    sum_cim = sum_cim2 = 0.0
    for chunk, size in _chunks(mc.trials):
        rng = _stream(mc.seed, _DOMAIN_BOB, chunk)
        h, h_hat = _draw_bob_trial(rng, cfg, alloc, size)
        err = h - h_hat
        hh = np.abs(h_hat) ** 2
        ee = np.abs(err) ** 2
        cross = h_hat * np.conj(err)
        sum_hh += float(np.sum(hh))
        sum_hh2 += float(np.sum(hh * hh))
        sum_ee += float(np.sum(ee))
        sum_ee2 += float(np.sum(ee * ee))
        sum_cre += float(np.sum(cross.real))
        sum_cre2 += float(np.sum(cross.real**2))
        sum_cim += float(np.sum(cross.imag))
        sum_cim2 += float(np.sum(cross.imag**2))
    t = mc.trials

    def moment_estimate(total: float, total_sq: float) -> McEstimate:
        mean = total / t
        var = max(total_sq / t - mean * mean, 0.0)
        return McEstimate(value=mean, std_err=math.sqrt(var / t), trials=t)

    var_h_hat = moment_estimate(sum_hh, sum_hh2)
    var_h_tilde = moment_estimate(sum_ee, sum_ee2)
    norm = math.sqrt(var_h_hat.value * var_h_tilde.value)
    re = moment_estimate(sum_cre, sum_cre2)
    im = moment_estimate(sum_cim, sum_cim2)
    return BobEstimationDiagnostics(
        var_h_hat=var_h_hat,
        var_h_tilde=var_h_tilde,
        orth_corr_re=McEstimate(re.value / norm, re.std_err / norm, t),
        orth_corr_im=McEstimate(im.value / norm, im.std_err / norm, t),
    )
