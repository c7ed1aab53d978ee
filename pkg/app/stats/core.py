from __future__ import annotations

import math

import numpy as np
from numpy.typing import ArrayLike
from scipy import special

from app.core.config import settings
from app.core.errors import DegenerateWindow, InvalidWindow, LengthMismatch, OutOfDomain
from app.schemas import HotellingMoments, WindowedSignalPair


def _scalar_or_array(out: np.ndarray, like) -> float | np.ndarray:
    if np.ndim(like) == 0:
        return float(out)
    return out


def clamp_r(r: ArrayLike, eps: float | None = None) -> float | np.ndarray:
    """Clamp correlations to [-(1-eps), 1-eps] so the Fisher transform stays finite."""
    eps = settings.stats.CLAMP_EPS if eps is None else eps
    out = np.clip(np.asarray(r, dtype=float), -(1.0 - eps), 1.0 - eps)
    return _scalar_or_array(out, r)


def _unit_scaled(v: np.ndarray, axis=None) -> np.ndarray:
    peak = np.max(np.abs(v), axis=axis, keepdims=axis is not None)
    return np.divide(v, peak, out=np.zeros_like(v), where=peak > 0)


def pearson(pair: WindowedSignalPair) -> float:
    """Pearson correlation of one window, mean-centered, with compensated sums.

    Each centered signal is divided by its peak magnitude first, so inputs of any
    finite scale neither overflow nor underflow in the sums of squares.
    """
    x, y = pair.x, pair.y
    if x.size != y.size:
        raise LengthMismatch(f"signal lengths differ: {x.size} != {y.size}")
    n = x.size
    if n < 2:
        raise DegenerateWindow(f"window needs at least 2 samples, got {n}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise DegenerateWindow("non-finite sample in window")

    xc = _unit_scaled(x - math.fsum(x) / n)
    yc = _unit_scaled(y - math.fsum(y) / n)
    sxx = math.fsum(xc * xc)
    syy = math.fsum(yc * yc)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateWindow("constant signal in window (zero energy after centering)")

    r = math.fsum(xc * yc) / (math.sqrt(sxx) * math.sqrt(syy))
    if not math.isfinite(r):
        raise DegenerateWindow(f"non-finite correlation ({r}) in window")
    return min(1.0, max(-1.0, r))


def pearson_rows(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Row-wise Pearson correlation for a block of windows shaped (windows, samples)."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.atleast_2d(np.asarray(y, dtype=float))
    if x.shape != y.shape:
        raise LengthMismatch(f"block shapes differ: {x.shape} != {y.shape}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise DegenerateWindow("non-finite sample in window block")
    xc = _unit_scaled(x - x.mean(axis=1, keepdims=True), axis=1)
    yc = _unit_scaled(y - y.mean(axis=1, keepdims=True), axis=1)
    sxx = np.einsum("ij,ij->i", xc, xc)
    syy = np.einsum("ij,ij->i", yc, yc)
    if np.any(sxx == 0.0) or np.any(syy == 0.0):
        raise DegenerateWindow("constant signal in window (zero energy after centering)")
    r = np.einsum("ij,ij->i", xc, yc) / (np.sqrt(sxx) * np.sqrt(syy))
    if not np.all(np.isfinite(r)):
        raise DegenerateWindow("non-finite correlation in window block")
    return np.clip(r, -1.0, 1.0)


def fisher(r: ArrayLike) -> float | np.ndarray:
    arr = np.asarray(r, dtype=float)
    if settings.stats.CLAMP:
        arr = np.asarray(clamp_r(arr))
    if np.any(np.abs(arr) >= 1.0) or np.any(~np.isfinite(arr)):
        raise OutOfDomain("fisher transform requires |r| < 1")
    return _scalar_or_array(np.arctanh(arr), r)


def fisher_inv(z: ArrayLike) -> float | np.ndarray:
    return _scalar_or_array(np.tanh(np.asarray(z, dtype=float)), z)


def std_normal_cdf(t: ArrayLike) -> float | np.ndarray:
    return _scalar_or_array(special.ndtr(np.asarray(t, dtype=float)), t)


def samples_in_window(window_s: float, fs_hz: float) -> int:
    """N = round(w * fs); rejects windows shorter than two samples."""
    n = int(round(window_s * fs_hz))
    if n < 2:
        raise InvalidWindow(f"window {window_s} s at {fs_hz} Hz gives N={n} < 2 samples")
    return n


def hotelling_moments(rho: float, n: int) -> HotellingMoments:
    """First-order Hotelling mean and variance of artanh of a sample correlation."""
    if not abs(rho) < 1.0:
        raise OutOfDomain(f"|rho| must be < 1, got {rho}")
    if n < 2:
        raise InvalidWindow(f"N must be >= 2, got {n}")
    mu = fisher(rho) + rho / (2.0 * (n - 1))
    return HotellingMoments(mu=mu, sigma_sq=1.0 / (n - 1))
