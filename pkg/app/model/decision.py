from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike

from app.core.errors import OutOfDomain, TooFewSamples, ZeroVariance
from app.schemas import DecisionVariableModel, LabeledCorrelationSet
from app.stats import clamp_r, fisher, samples_in_window, std_normal_cdf


def fisher_differences(arr: np.ndarray) -> np.ndarray:
    """Per-window decision variable z_att - z_unatt for an (M, 2) correlation array."""
    if np.any(np.abs(arr) > 1.0):
        raise OutOfDomain("correlation values must lie in [-1, 1]")
    z = np.asarray(fisher(arr))
    return z[:, 0] - z[:, 1]


def spread(d: np.ndarray, axis: int = -1) -> np.ndarray:
    """Unbiased sample variance; exactly zero when all values along ``axis`` coincide."""
    var = np.var(d, axis=axis, ddof=1)
    return np.where(np.ptp(d, axis=axis) == 0.0, 0.0, var)


def estimate_model(data: LabeledCorrelationSet) -> DecisionVariableModel:
    if data.m < 2:
        raise TooFewSamples(f"need at least 2 labeled pairs, got {data.m}")
    n1 = samples_in_window(data.window_s, data.fs_hz)
    arr = data.as_array()
    d = fisher_differences(arr)
    rho_att, rho_unatt = (float(v) for v in np.asarray(clamp_r(arr.mean(axis=0))))

    return DecisionVariableModel(
        mu_diff=float(d.mean()),
        sigma_sum_sq=float(spread(d)),
        rho_att=rho_att,
        rho_unatt=rho_unatt,
        n_baseline=n1,
        m_count=data.m,
        baseline_window_s=data.window_s,
        fs_hz=data.fs_hz,
    )


def extrapolate_params(
    mu_diff: ArrayLike,
    sigma_sum_sq: ArrayLike,
    rho_gap: ArrayLike,
    n1: int,
    n2: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Window-length correction of the decision variable mean and variance.

    ``rho_gap`` is rho_att - rho_unatt at the baseline. Works elementwise so the
    bootstrap can push all resamples through at once.
    """
    increment = (n2 - n1) / (2.0 * (n2 - 1) * (n1 - 1))
    factor = (n1 - 1) / (n2 - 1)
    mu2 = np.asarray(mu_diff, dtype=float) + increment * np.asarray(rho_gap, dtype=float)
    return mu2, np.asarray(sigma_sum_sq, dtype=float) * factor


def extrapolate(model: DecisionVariableModel, target_window_s: float) -> tuple[float, float]:
    n2 = samples_in_window(target_window_s, model.fs_hz)
    if not model.sigma_sum_sq > 0.0:
        raise ZeroVariance("decision variable has zero variance at the baseline window")
    mu2, s2 = extrapolate_params(
        model.mu_diff,
        model.sigma_sum_sq,
        model.rho_att - model.rho_unatt,
        model.n_baseline,
        n2,
    )
    return float(mu2), float(s2)


def accuracy_pct(mu_diff: ArrayLike, sigma_sum_sq: ArrayLike) -> np.ndarray:
    return 100.0 * np.asarray(
        std_normal_cdf(np.asarray(mu_diff, dtype=float) / np.sqrt(sigma_sum_sq))
    )


def predict_accuracy(mu_diff: float, sigma_sum_sq: float) -> float:
    """100 * P(z_att - z_unatt > 0) under the normal decision-variable model."""
    if not sigma_sum_sq > 0.0:
        raise ZeroVariance("accuracy is undefined for a zero-variance decision variable")
    return float(accuracy_pct(mu_diff, sigma_sum_sq))
