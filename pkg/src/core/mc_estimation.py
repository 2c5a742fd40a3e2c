"""
Monte Carlo estimation
Mutual information and noise statistics of simulated dense coding runs,
compared against the analytic channel.

Every distribution in the protocol is exactly Gaussian, so mutual
information is estimated from variance ratios per quadrature rather than
from histograms.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np
from scipy import stats

from .capacity_analytics import h_dense
from .dense_protocol import RECEIVER_GAIN, ProtocolConfig, TrialBatch, TrialRecord, run_trials
from .errors import DegenerateEstimateError, ValidationError

logger = logging.getLogger(__name__)

MIN_MI_RECORDS = 100
BOOTSTRAP_RESAMPLES = 200
# Stream index for bootstrap draws; chunk streams use 0, 1, 2, ...
BOOTSTRAP_STREAM = 2 ** 32

Records = Union[TrialBatch, Iterable[TrialRecord]]


@dataclass(frozen=True)
class MiEstimate:
    """Estimated mutual information in nats"""
    nats: float
    std_error: float
    trials: int
    clamped: bool = False


@dataclass(frozen=True)
class QuadraturePair:
    """One value per quadrature (re = x, im = p)"""
    re: float
    im: float


@dataclass(frozen=True)
class KsResult:
    statistic: float
    pvalue: float


@dataclass(frozen=True)
class BiasRow:
    trials: int
    estimate: float
    analytic: float
    gap: float


def _as_batch(records: Records, seed: int = 0) -> TrialBatch:
    return TrialBatch.from_records(records, seed)


def _variance_ratio_mi(beta: np.ndarray, residual: np.ndarray) -> float:
    """sum over quadratures of 0.5 ln(var(beta_d) / var(residual_d))"""
    v_tot = beta.var(axis=0, ddof=1)
    v_res = residual.var(axis=0, ddof=1)
    return float(0.5 * np.sum(np.log(v_tot / v_res)))


def _bootstrap_replicates(joined: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """
    Variance-ratio MI of BOOTSTRAP_RESAMPLES resamples of the (beta, residual) rows

    A resample is summarised by how often it draws each row, so only the
    count vector and the first two moments are formed per replicate.
    """
    n = joined.shape[0]
    centred = joined - joined.mean(axis=0)
    moments = np.hstack([centred, centred * centred])
    replicates = np.empty(BOOTSTRAP_RESAMPLES)
    for i in range(BOOTSTRAP_RESAMPLES):
        counts = np.bincount(rng.integers(0, n, size=n), minlength=n)
        sums = counts @ moments
        mean = sums[:4] / n
        var = (sums[4:] - n * mean * mean) / (n - 1)
        replicates[i] = 0.5 * np.sum(np.log(var[:2] / var[2:]))
    return replicates


def estimate_mi_gaussian(records: Records, seed: Optional[int] = None) -> MiEstimate:
    """
    Variance-ratio MI estimate with a bootstrap standard error

    Residuals are beta - alpha_in/sqrt(2). The bootstrap stream is derived
    from the run seed (TrialBatch.seed unless given).
    """
    batch = _as_batch(records)
    n = len(batch)
    if n < MIN_MI_RECORDS:
        raise ValidationError(
            f"need at least {MIN_MI_RECORDS} records to estimate mutual information (got {n})"
        )

    beta = batch.beta
    residual = beta - batch.alpha_in / RECEIVER_GAIN
    if np.any(residual.var(axis=0, ddof=1) == 0):
        raise DegenerateEstimateError("residual variance is zero; estimate undefined")

    raw = _variance_ratio_mi(beta, residual)

    seed = batch.seed if seed is None else seed
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(BOOTSTRAP_STREAM,)))
    replicates = _bootstrap_replicates(np.hstack([beta, residual]), rng)
    std_error = max(float(replicates.std(ddof=1)), np.finfo(float).eps)

    clamped = raw < 0
    if clamped:
        logger.warning("Negative MI estimate %.3g clamped to 0", raw)
    logger.info("MI estimate %.6f +/- %.6f nats from %d trials", max(raw, 0.0), std_error, n)
    return MiEstimate(nats=max(raw, 0.0), std_error=std_error, trials=n, clamped=clamped)


def estimate_residual_variance(records: Records) -> QuadraturePair:
    """Sample variance of alpha_out - alpha_in per quadrature (expect e^{-2r}/2)"""
    batch = _as_batch(records)
    if len(batch) < 2:
        raise ValidationError(f"need at least 2 records (got {len(batch)})")
    v = (batch.alpha_out - batch.alpha_in).var(axis=0, ddof=1)
    return QuadraturePair(float(v[0]), float(v[1]))


def estimate_channel_gain(records: Records) -> QuadraturePair:
    """Least-squares slope of alpha_out on alpha_in per quadrature (expect 1)"""
    batch = _as_batch(records)
    if len(batch) < 2:
        raise ValidationError(f"need at least 2 records (got {len(batch)})")
    x = batch.alpha_in - batch.alpha_in.mean(axis=0)
    y = batch.alpha_out - batch.alpha_out.mean(axis=0)
    sxx = np.sum(x * x, axis=0)
    if np.any(sxx == 0):
        raise DegenerateEstimateError("alpha_in is constant; gain undefined")
    slope = np.sum(x * y, axis=0) / sxx
    return QuadraturePair(float(slope[0]), float(slope[1]))


def ks_conformance(samples: Sequence[float], mean: float, variance: float) -> KsResult:
    """Kolmogorov-Smirnov test of samples against N(mean, variance)"""
    result = stats.kstest(np.asarray(samples, dtype=float), 'norm',
                          args=(mean, math.sqrt(variance)))
    return KsResult(float(result.statistic), float(result.pvalue))


def estimator_bias_report(r: float, sigma2: float, trial_counts: Sequence[int],
                          seed: int = 0, workers: int = 1) -> List[BiasRow]:
    """
    Estimate vs analytic MI at increasing trial counts

    Each count is an independent run from the same seed.
    """
    trial_counts = list(trial_counts)
    if not trial_counts:
        raise ValidationError("trial_counts must not be empty")
    errors = [
        f"trial_counts[{i}]: must be an integer >= {MIN_MI_RECORDS} (got {t!r})"
        for i, t in enumerate(trial_counts)
        if isinstance(t, bool) or not isinstance(t, (int, np.integer)) or t < MIN_MI_RECORDS
    ]
    if errors:
        raise ValidationError(errors)

    analytic = h_dense(sigma2, r)
    rows = []
    for trials in trial_counts:
        batch = run_trials(ProtocolConfig(r=r, sigma2=sigma2, trials=int(trials), seed=seed),
                           workers=workers)
        estimate = estimate_mi_gaussian(batch)
        rows.append(BiasRow(int(trials), estimate.nats, analytic, abs(estimate.nats - analytic)))
        logger.debug("bias row trials=%d gap=%.3g", trials, rows[-1].gap)
    return rows
