"""Monte Carlo acceptance runs against the decision-counting oracle.

Everything marked ``slow`` is skipped by default; run with ``pytest -m slow``.
"""

import math
import time

import numpy as np
import pytest

from app.evaluation import baseline_sweep, ground_truth_curve, subsample_experiment
from app.model import model_curve
from app.schemas import CiConfig, GroundTruthCurve, SyntheticScenario, TruthPoint
from app.simulation import correlation_pairs, empirical_accuracy, labeled_set
from app.stats import hotelling_moments
from app.utils import seeding

TARGETS = (60.0, 30.0, 20.0, 10.0, 5.0, 1.0)
BASELINE_S = 20.0
FS_HZ = 20.0


def _scenario(seed: int, minutes: float = 30.0) -> SyntheticScenario:
    return SyntheticScenario(rho_att=0.2, rho_unatt=0.05, fs_hz=FS_HZ, duration_s=60.0 * minutes, seed=seed)


def _oracle(n_windows: int, seed: int = 10_000) -> GroundTruthCurve:
    scn = _scenario(seed)
    points = []
    for w in TARGETS:
        acc = empirical_accuracy(scn, w, n_windows)
        points.append(
            TruthPoint(window_s=w, accuracy_pct=acc, n_decisions=n_windows, n_correct=round(acc * n_windows / 100))
        )
    return GroundTruthCurve(points=tuple(points))


def _mean_prediction(n_reps: int, ci: CiConfig) -> dict[float, float]:
    preds: dict[float, list[float]] = {w: [] for w in TARGETS}
    for rep in range(n_reps):
        data = labeled_set(_scenario(seeding.derive_seed(1, seeding.SYNTHETIC, rep)), BASELINE_S, 30.0)
        for p in model_curve(data, TARGETS, ci).points:
            preds[p.window_s].append(p.accuracy_pct)
    return {w: float(np.mean(v)) for w, v in preds.items()}


def test_curve_tracks_oracle():
    truth = _oracle(20_000)
    pred = _mean_prediction(10, CiConfig(n_boot=200, seed=3))
    for p in truth.points:
        assert pred[p.window_s] == pytest.approx(p.accuracy_pct, abs=2.5), p.window_s


def test_model_curve_runtime():
    data = labeled_set(_scenario(4, minutes=60.0), BASELINE_S, 60.0)
    assert data.m == 180
    ci = CiConfig(n_boot=1000, seed=4)
    model_curve(data, TARGETS, ci)
    start = time.perf_counter()
    model_curve(data, TARGETS, ci)
    assert time.perf_counter() - start < 2.0


@pytest.mark.slow
@pytest.mark.parametrize("rho", [0.0, 0.1, 0.3])
@pytest.mark.parametrize("n", [101, 401, 1201])
def test_hotelling_moments_match_signals(rho, n):
    scn = SyntheticScenario(rho_att=rho, rho_unatt=0.0, fs_hz=1.0, duration_s=float(n), seed=n)
    z = np.arctanh(correlation_pairs(scn, float(n), 1_000_000)[:, 0])
    expected = hotelling_moments(rho, n)
    assert z.mean() == pytest.approx(expected.mu, abs=1e-3)
    assert z.var(ddof=1) == pytest.approx(expected.sigma_sq, rel=0.05)


@pytest.mark.slow
def test_curve_tracks_oracle_full():
    truth = _oracle(100_000)
    pred = _mean_prediction(10, CiConfig(n_boot=1000, seed=3))
    for p in truth.points:
        assert pred[p.window_s] == pytest.approx(p.accuracy_pct, abs=2.5), p.window_s


@pytest.mark.slow
def test_interval_coverage():
    truth = {p.window_s: p.accuracy_pct for p in _oracle(100_000).points}
    covered = cells = 0
    for rep in range(200):
        data = labeled_set(_scenario(seeding.derive_seed(2, seeding.SYNTHETIC, rep)), BASELINE_S, 30.0)
        curve = model_curve(data, TARGETS, CiConfig(n_boot=1000, level=0.95, seed=rep))
        for p in curve.points:
            cells += 1
            covered += p.ci_low_pct <= truth[p.window_s] <= p.ci_high_pct
    assert covered / cells >= 0.90


@pytest.mark.slow
def test_error_shrinks_with_estimation_data():
    minutes_grid = (2.0, 5.0, 10.0, 30.0, 60.0)
    truth = _oracle(100_000)
    ci = CiConfig(n_boot=200, seed=6)

    mae = np.zeros(len(minutes_grid))
    n_pools = 10
    for k in range(n_pools):
        pool = labeled_set(_scenario(seeding.derive_seed(3, seeding.SYNTHETIC, k), 60.0), BASELINE_S, 60.0)
        reports = subsample_experiment(pool, minutes_grid, 10, TARGETS, ci, truth)
        mae += np.array([r.mae_pp for r in reports]) / n_pools

    assert mae[0] <= 5.0
    assert np.all(np.diff(mae) <= 0.5), mae


@pytest.mark.slow
def test_error_grows_with_extrapolation_distance():
    ci = CiConfig(n_boot=200, seed=8)
    at_baseline, farthest = [], []
    for rep in range(20):
        scn = _scenario(seeding.derive_seed(4, seeding.SYNTHETIC, rep), 60.0)
        pools = {w: labeled_set(scn, w, 60.0) for w in TARGETS}
        truth = ground_truth_curve(list(pools.values()))
        for report in baseline_sweep(pools, TARGETS, TARGETS, ci, truth):
            b = report.baseline_window_s
            err = {r.window_s: r.abs_err_pp for r in report.per_point}
            far = max(TARGETS, key=lambda w: abs(math.log(w / b)))
            at_baseline.append(err[b])
            farthest.append(err[far])
    assert np.mean(at_baseline) <= np.mean(farthest)
