from __future__ import annotations

import logging
import math
from typing import Sequence

import pandas as pd
from scipy import optimize

from app.core.errors import EmptySet, OutOfDomain
from app.model.bootstrap import bca_interval
from app.model.decision import estimate_model, extrapolate, predict_accuracy
from app.schemas import (
    CiConfig,
    CurvePoint,
    DecisionVariableModel,
    LabeledCorrelationSet,
    PerformanceCurve,
)
from app.stats import clamp_r, hotelling_moments, samples_in_window

log = logging.getLogger("app.model.curve")

CURVE_COLUMNS = ("window_s", "accuracy_pct", "ci_low_pct", "ci_high_pct")


def model_curve(
    data: LabeledCorrelationSet,
    targets: Sequence[float],
    ci: CiConfig,
) -> PerformanceCurve:
    """Predicted accuracy with BCa interval at every target window, from one baseline set."""
    if not targets:
        raise EmptySet("no target window lengths given")

    model = estimate_model(data)
    points: list[CurvePoint] = []
    for target in targets:
        accuracy = predict_accuracy(*extrapolate(model, target))
        res = bca_interval(data, target, ci)
        if res.bracket_adjusted:
            log.info(
                "BCa interval widened to include the point estimate",
                extra={"event": "ci_bracket_adjusted", "target_s": target},
            )
        points.append(
            CurvePoint(
                window_s=float(target),
                accuracy_pct=accuracy,
                ci_low_pct=res.low_pct,
                ci_high_pct=res.high_pct,
            )
        )

    log.info(
        "Modeled curve for %s targets",
        len(points),
        extra={
            "event": "model_curve",
            "baseline_s": data.window_s,
            "m_count": data.m,
            "n_boot": ci.n_boot,
        },
    )
    return PerformanceCurve(
        points=tuple(points),
        baseline_window_s=data.window_s,
        fs_hz=data.fs_hz,
        bootstrap_samples=ci.n_boot,
        ci_level=ci.level,
    )


def required_rho_att(
    rho_unatt: float,
    target_accuracy_pct: float,
    window_s: float,
    fs_hz: float,
) -> float:
    """Mean attended correlation needed to reach a target accuracy at a window length.

    Uses the Hotelling moments for both speakers, so the decision variable
    variance is 2 / (N - 1).
    """
    if not 50.0 < target_accuracy_pct < 100.0:
        raise OutOfDomain(f"target accuracy must be in (50, 100), got {target_accuracy_pct}")
    n = samples_in_window(window_s, fs_hz)
    unatt = hotelling_moments(rho_unatt, n)
    sigma_sum_sq = 2.0 * unatt.sigma_sq

    def gap(rho_att: float) -> float:
        mu_diff = hotelling_moments(rho_att, n).mu - unatt.mu
        return predict_accuracy(mu_diff, sigma_sum_sq) - target_accuracy_pct

    lo, hi = rho_unatt, float(clamp_r(1.0))
    if gap(hi) < 0.0:
        raise OutOfDomain(
            f"{target_accuracy_pct}% is out of reach at {window_s} s with rho_unatt={rho_unatt}"
        )
    return float(optimize.brentq(gap, lo, hi, xtol=1e-12))


def min_window_for_accuracy(
    model: DecisionVariableModel,
    target_accuracy_pct: float,
    max_window_s: float,
) -> float | None:
    """Shortest window (whole samples) whose extrapolated accuracy reaches the target.

    Returns None when the target is not reached within ``max_window_s``. Assumes
    accuracy increases with window length, which holds for rho_att >= rho_unatt.
    """
    if not 0.0 < target_accuracy_pct < 100.0:
        raise OutOfDomain(f"target accuracy must be in (0, 100), got {target_accuracy_pct}")
    fs = model.fs_hz

    def accuracy_at(n: int) -> float:
        return predict_accuracy(*extrapolate(model, n / fs))

    lo, hi = 2, samples_in_window(max_window_s, fs)
    if accuracy_at(hi) < target_accuracy_pct:
        return None
    if accuracy_at(lo) >= target_accuracy_pct:
        return lo / fs
    # invariant: accuracy_at(lo) < target <= accuracy_at(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if accuracy_at(mid) >= target_accuracy_pct:
            hi = mid
        else:
            lo = mid
    return hi / fs


def curve_table(curve: PerformanceCurve) -> pd.DataFrame:
    return pd.DataFrame(
        [[p.window_s, p.accuracy_pct, p.ci_low_pct, p.ci_high_pct] for p in curve.points],
        columns=list(CURVE_COLUMNS),
    )


def curve_from_table(
    df: pd.DataFrame,
    *,
    baseline_window_s: float = math.nan,
    fs_hz: float = math.nan,
    bootstrap_samples: int = 0,
    ci_level: float = 0.95,
) -> PerformanceCurve:
    points = tuple(
        CurvePoint(
            window_s=float(row.window_s),
            accuracy_pct=float(row.accuracy_pct),
            ci_low_pct=float(row.ci_low_pct),
            ci_high_pct=float(row.ci_high_pct),
        )
        for row in df.itertuples(index=False)
    )
    return PerformanceCurve(
        points=points,
        baseline_window_s=baseline_window_s,
        fs_hz=fs_hz,
        bootstrap_samples=bootstrap_samples,
        ci_level=ci_level,
    )
