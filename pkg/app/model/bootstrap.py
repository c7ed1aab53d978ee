from __future__ import annotations

import logging

import numpy as np
from scipy import special

from app.core.config import settings
from app.core.errors import OutOfDomain, TooFewSamples, ZeroVariance
from app.model.decision import (
    accuracy_pct,
    estimate_model,
    extrapolate,
    extrapolate_params,
    fisher_differences,
    predict_accuracy,
    spread,
)
from app.schemas import CiConfig, CiResult, LabeledCorrelationSet
from app.stats import samples_in_window, std_normal_cdf
from app.utils import seeding

log = logging.getLogger("app.model.bootstrap")

# resample index matrices are drawn in chunks of at most this many cells
_CHUNK_CELLS = 1 << 21


def normal_quantile(p: float) -> float:
    if not 0.0 < p < 1.0:
        raise OutOfDomain(f"quantile level must be in (0, 1), got {p}")
    return float(special.ndtri(p))


def _statistic(d: np.ndarray, r: np.ndarray, n1: int, n2: int) -> tuple[np.ndarray, np.ndarray]:
    """Predicted accuracy for a stack of samples shaped (..., M); also returns the variances."""
    mu = d.mean(axis=-1)
    var = spread(d)
    gap = r[..., 0].mean(axis=-1) - r[..., 1].mean(axis=-1)
    mu2, s2 = extrapolate_params(mu, var, gap, n1, n2)
    with np.errstate(divide="ignore", invalid="ignore"):
        theta = accuracy_pct(mu2, s2)
    return np.where(var > 0.0, theta, np.nan), var


def _resample(
    d: np.ndarray,
    r: np.ndarray,
    n1: int,
    n2: int,
    cfg: CiConfig,
) -> np.ndarray:
    """Bootstrap statistics over jointly resampled pairs, redrawing degenerate resamples."""
    m = d.size
    rng = seeding.stream(cfg.seed, seeding.BOOTSTRAP, n2)
    max_draws = settings.bootstrap.MAX_REDRAW_FACTOR * cfg.n_boot

    kept: list[np.ndarray] = []
    n_kept = 0
    drawn = 0
    while n_kept < cfg.n_boot:
        if drawn >= max_draws:
            raise ZeroVariance(
                f"only {n_kept} of {cfg.n_boot} resamples had non-zero variance "
                f"after {drawn} draws"
            )
        batch = min(cfg.n_boot - n_kept, max_draws - drawn, max(1, _CHUNK_CELLS // m))
        idx = rng.integers(0, m, size=(batch, m))
        theta, var = _statistic(d[idx], r[idx], n1, n2)
        ok = var > 0.0
        kept.append(theta[ok])
        n_kept += int(ok.sum())
        drawn += batch

    stats = np.concatenate(kept)
    if drawn > cfg.n_boot:
        log.debug(
            "Redrew degenerate resamples",
            extra={"event": "bootstrap_redraw", "attempts": drawn, "n_boot": cfg.n_boot},
        )
    return stats


def _acceleration(d: np.ndarray, r: np.ndarray, n1: int, n2: int) -> float | None:
    """Jackknife acceleration; None when the leave-one-out statistics carry no spread."""
    m = d.size
    if m < 3:
        return None
    vals, counts = np.unique(d, return_counts=True)
    if vals.size == 1 or (vals.size == 2 and counts.min() == 1):
        return None
    # leave-one-out moments in closed form, on centered values
    e = d - d.mean()
    mu = (e.sum() - e) / (m - 1)
    var = (np.sum(e**2) - e**2 - (m - 1) * mu**2) / (m - 2)
    gap = ((r.sum(axis=0) - r) @ np.array([1.0, -1.0])) / (m - 1)
    if np.any(var <= 0.0):
        return None
    mu2, s2 = extrapolate_params(mu + d.mean(), var, gap, n1, n2)
    theta = accuracy_pct(mu2, s2)

    dev = theta.mean() - theta
    den = float(np.sum(dev**2))
    if den == 0.0:
        return None
    return float(np.sum(dev**3) / (6.0 * den**1.5))


def _bias_correction(boot: np.ndarray, point: float) -> float:
    """z0 from the share of bootstrap statistics below the point; ties count one half."""
    b = boot.size
    below = np.count_nonzero(boot < point) + 0.5 * np.count_nonzero(boot == point)
    frac = min(max(below / b, 0.5 / b), 1.0 - 0.5 / b)
    return normal_quantile(frac)


def _bca_limits(
    boot: np.ndarray,
    point: float,
    z0: float,
    a_hat: float,
    level: float,
) -> tuple[float, float, bool]:
    """Nearest-rank BCa endpoints, widened to bracket ``point``; the flag marks widening."""
    z_alpha = normal_quantile((1.0 - level) / 2.0)
    zs = np.array([z0 + z_alpha, z0 - z_alpha])
    alphas = std_normal_cdf(z0 + zs / (1.0 - a_hat * zs))
    low, high = (float(v) for v in np.quantile(boot, alphas, method="inverted_cdf"))
    adjusted = low > point or high < point
    return min(low, point), max(high, point), adjusted


def bca_interval(data: LabeledCorrelationSet, target_window_s: float, cfg: CiConfig) -> CiResult:
    """BCa confidence interval for the predicted accuracy at ``target_window_s``."""
    if data.m < 2:
        raise TooFewSamples(f"need at least 2 labeled pairs, got {data.m}")

    model = estimate_model(data)
    point = predict_accuracy(*extrapolate(model, target_window_s))
    n1 = model.n_baseline
    n2 = samples_in_window(target_window_s, data.fs_hz)

    r = data.as_array()
    d = fisher_differences(r)

    boot = np.sort(_resample(d, r, n1, n2, cfg))
    z0 = _bias_correction(boot, point)

    a_hat = _acceleration(d, r, n1, n2)
    fallback = a_hat is None
    if fallback:
        a_hat = 0.0
        log.debug(
            "Zero jackknife spread, using percentile interval",
            extra={"event": "bca_fallback", "target_s": target_window_s, "fallback": "percentile"},
        )

    low, high, adjusted = _bca_limits(boot, point, z0, a_hat, cfg.level)

    return CiResult(
        low_pct=min(max(low, 0.0), 100.0),
        high_pct=min(max(high, 0.0), 100.0),
        point_pct=point,
        n_boot_effective=boot.size,
        percentile_fallback=fallback,
        bracket_adjusted=adjusted,
    )
