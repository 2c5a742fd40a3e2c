"""
Tests for the Monte Carlo mutual information and noise estimators

Usage:
    pytest test_mc_estimation.py
    pytest test_mc_estimation.py -m "not slow"
"""

import math

import numpy as np
import pytest

from conftest import SIGMA2_OPT_R1
from core.capacity_analytics import h_dense
from core.dense_protocol import RECEIVER_GAIN, ProtocolConfig, TrialBatch, run_trials
from core.errors import DegenerateEstimateError, ValidationError
from core.mc_estimation import (
    BOOTSTRAP_RESAMPLES,
    BOOTSTRAP_STREAM,
    estimate_channel_gain,
    estimate_mi_gaussian,
    estimate_residual_variance,
    estimator_bias_report,
    ks_conformance,
)


def simulate(r, sigma2, trials, seed):
    return run_trials(ProtocolConfig(r=r, sigma2=sigma2, trials=trials, seed=seed))


# ============================================================================
# MUTUAL INFORMATION ESTIMATE
# ============================================================================

def test_mi_unit_snr(unit_snr_batch):
    """r = 0, sigma2 = 1: MI = ln 2"""
    estimate = estimate_mi_gaussian(unit_snr_batch)
    assert estimate.nats == pytest.approx(math.log(2.0), abs=0.01)
    assert estimate.trials == len(unit_snr_batch)


def test_mi_at_optimal_split(optimal_r1_batch):
    """r = 1 with the optimal modulation reaches c_dense(e sinh 1)"""
    estimate = estimate_mi_gaussian(optimal_r1_batch)
    analytic = h_dense(SIGMA2_OPT_R1, 1.0)
    assert estimate.nats == pytest.approx(2.667196, abs=0.02)
    assert abs(estimate.nats - analytic) <= 4 * estimate.std_error
    assert not estimate.clamped


def test_mi_without_signal():
    estimate = estimate_mi_gaussian(simulate(1.0, 0.0, 5000, 3))
    assert abs(estimate.nats) < 3 * estimate.std_error
    assert estimate.std_error > 0


def test_mi_negative_estimate_is_clamped():
    """Outputs unrelated to inputs give a negative raw estimate"""
    rng = np.random.default_rng(0)
    batch = TrialBatch(rng.standard_normal((1000, 2)), rng.standard_normal((1000, 2)))
    estimate = estimate_mi_gaussian(batch)
    assert estimate.clamped
    assert estimate.nats == 0.0


def test_mi_needs_enough_records():
    with pytest.raises(ValidationError, match="at least 100"):
        estimate_mi_gaussian(simulate(1.0, 1.0, 99, 0))


def test_mi_rejects_noiseless_records():
    alpha = np.random.default_rng(1).standard_normal((200, 2))
    with pytest.raises(DegenerateEstimateError):
        estimate_mi_gaussian(TrialBatch(alpha, alpha / RECEIVER_GAIN))


def test_mi_bootstrap_is_deterministic():
    batch = simulate(0.5, 1.0, 2000, 11)
    first, second = estimate_mi_gaussian(batch), estimate_mi_gaussian(batch)
    assert first == second
    assert estimate_mi_gaussian(batch, seed=12).std_error != first.std_error
    assert estimate_mi_gaussian(batch, seed=12).nats == first.nats


def test_mi_accepts_plain_records():
    batch = simulate(0.5, 1.0, 300, 21)
    assert estimate_mi_gaussian(list(batch), seed=21) == estimate_mi_gaussian(batch)


def test_mi_invariant_under_rescaling():
    batch = simulate(0.8, 1.2, 3000, 5)
    scaled = TrialBatch(3.5 * batch.alpha_in, 3.5 * batch.beta, batch.seed)
    assert estimate_mi_gaussian(scaled).nats == pytest.approx(
        estimate_mi_gaussian(batch).nats, rel=1e-12)


@pytest.mark.slow
@pytest.mark.parametrize("sigma2,r", [(1.0, 0.0), (1.0, 1.0), (1.813430, 1.0)])
def test_mi_consistency_across_seeds(sigma2, r):
    """The analytic value lies within 4 standard errors in at least 95 of 100 runs"""
    analytic = h_dense(sigma2, r)
    hits = 0
    for seed in range(100):
        estimate = estimate_mi_gaussian(simulate(r, sigma2, 100000, seed))
        hits += abs(estimate.nats - analytic) < 4 * estimate.std_error
    assert hits >= 95


def test_bootstrap_resample_count():
    assert BOOTSTRAP_RESAMPLES == 200


def test_bootstrap_matches_direct_resampling():
    """Count-weighted replicates equal the estimate recomputed on resampled rows"""
    n = 500
    batch = simulate(0.7, 1.3, n, 17)
    joined = np.hstack([batch.beta, batch.beta - batch.alpha_in / RECEIVER_GAIN])
    rng = np.random.default_rng(np.random.SeedSequence(entropy=17, spawn_key=(BOOTSTRAP_STREAM,)))
    replicates = []
    for _ in range(BOOTSTRAP_RESAMPLES):
        v = joined[rng.integers(0, n, size=n)].var(axis=0, ddof=1)
        replicates.append(0.5 * np.sum(np.log(v[:2] / v[2:])))
    assert estimate_mi_gaussian(batch).std_error == pytest.approx(
        np.std(replicates, ddof=1), rel=1e-9)


# ============================================================================
# NOISE STATISTICS
# ============================================================================

def test_residual_variance_r1(r1_batch):
    residual = estimate_residual_variance(r1_batch)
    assert residual.re == pytest.approx(math.exp(-2.0) / 2, rel=0.02)
    assert residual.im == pytest.approx(math.exp(-2.0) / 2, rel=0.02)


def test_residual_variance_vacuum(unit_snr_batch):
    residual = estimate_residual_variance(unit_snr_batch)
    assert residual.re == pytest.approx(0.5, rel=0.02)
    assert residual.im == pytest.approx(0.5, rel=0.02)


def test_residual_variance_large_squeezing():
    residual = estimate_residual_variance(simulate(5.0, 1.0, 100000, 8))
    assert residual.re == pytest.approx(math.exp(-10.0) / 2, rel=0.05)
    assert residual.im == pytest.approx(math.exp(-10.0) / 2, rel=0.05)


def test_residual_variance_independent_of_signal():
    n = 100000
    weak = estimate_residual_variance(simulate(0.5, 0.5, n, 14))
    strong = estimate_residual_variance(simulate(0.5, 2.0, n, 15))
    expected = math.exp(-1.0) / 2
    combined = expected * math.sqrt(2.0 / (n - 1)) * math.sqrt(2.0)
    assert abs(weak.re - strong.re) < 4 * combined
    assert abs(weak.im - strong.im) < 4 * combined


def test_residual_variance_needs_two_records():
    with pytest.raises(ValidationError):
        estimate_residual_variance(simulate(1.0, 1.0, 1, 0))


def test_channel_gain_is_one(r1_batch):
    gain = estimate_channel_gain(r1_batch)
    stderr = math.sqrt(math.exp(-2.0) / 2 / (len(r1_batch) * 0.5))
    assert abs(gain.re - 1.0) < 4 * stderr
    assert abs(gain.im - 1.0) < 4 * stderr


def test_channel_gain_without_signal():
    with pytest.raises(DegenerateEstimateError):
        estimate_channel_gain(simulate(1.0, 0.0, 200, 0))


def test_ks_conformance_detects_wrong_variance():
    samples = np.random.default_rng(2).normal(0.0, 1.0, 10000)
    assert ks_conformance(samples, 0.0, 1.0).pvalue > 0.01
    assert ks_conformance(samples, 0.0, 2.0).pvalue < 1e-6


# ============================================================================
# BIAS REPORT
# ============================================================================

def test_bias_report_columns():
    rows = estimator_bias_report(1.0, 1.0, [200, 1000], seed=3)
    assert [row.trials for row in rows] == [200, 1000]
    for row in rows:
        assert row.analytic == h_dense(1.0, 1.0)
        assert row.gap == abs(row.estimate - row.analytic)


def test_bias_report_reproducible():
    assert (estimator_bias_report(0.5, 1.0, [500], seed=9)
            == estimator_bias_report(0.5, 1.0, [500], seed=9))


@pytest.mark.parametrize("counts", [[], [50], [1000, 'many'], [True], [100.5]])
def test_bias_report_rejects_counts(counts):
    with pytest.raises(ValidationError):
        estimator_bias_report(1.0, 1.0, counts)


def test_bias_report_gap_shrinks():
    """Average gap over 10 seeds decreases from 10^3 to 10^5 trials"""
    counts = [1000, 10000, 100000]
    gaps = np.array([
        [row.gap for row in estimator_bias_report(1.0, 1.0, counts, seed=seed)]
        for seed in range(10)
    ])
    mean_gap = gaps.mean(axis=0)
    assert h_dense(1.0, 1.0) == pytest.approx(2.126928, abs=1e-6)
    assert mean_gap[0] > mean_gap[1] > mean_gap[2]
