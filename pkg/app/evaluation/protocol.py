from __future__ import annotations

import logging
from typing import Mapping, Sequence

import numpy as np
import pandas as pd

from app.core.errors import EmptySet, GridMismatch, InsufficientPool, MissingPool, TooFewSamples
from app.model import model_curve
from app.schemas import (
    CiConfig,
    CurvePoint,
    EvaluationReport,
    GroundTruthCurve,
    LabeledCorrelationSet,
    PerformanceCurve,
    ReportRow,
    TruthPoint,
)
from app.simulation import windows_in
from app.utils import seeding

log = logging.getLogger("app.evaluation.protocol")


def ground_truth_curve(sets: Sequence[LabeledCorrelationSet]) -> GroundTruthCurve:
    """Accuracy of the max-correlation rule per window length; ties count as errors."""
    if not sets:
        raise EmptySet("no correlation sets given")
    windows = [s.window_s for s in sets]
    if len(set(windows)) != len(windows):
        raise GridMismatch(f"duplicate window lengths in ground-truth sets: {windows}")

    points = []
    for s in sets:
        if s.m == 0:
            raise EmptySet(f"empty correlation set at {s.window_s:g} s")
        arr = s.as_array()
        correct = int(np.count_nonzero(arr[:, 0] > arr[:, 1]))
        points.append(
            TruthPoint(
                window_s=s.window_s,
                accuracy_pct=100.0 * correct / s.m,
                n_decisions=s.m,
                n_correct=correct,
            )
        )
    return GroundTruthCurve(points=tuple(points))


def _check_grid(pred_windows: Sequence[float], truth_windows: Sequence[float]) -> None:
    missing = sorted(set(pred_windows) ^ set(truth_windows), reverse=True)
    if missing:
        raise GridMismatch(f"window length {missing[0]:g} s is not on both grids")


def _aggregate(
    rows: Sequence[ReportRow],
    *,
    baseline_window_s: float,
    estimation_minutes: float | None,
) -> EvaluationReport:
    errors = np.array([r.abs_err_pp for r in rows])
    covered = sum(r.covered for r in rows)
    rep_mae = pd.Series(errors).groupby([r.repetition for r in rows]).mean()
    return EvaluationReport(
        per_point=tuple(rows),
        mae_pp=float(errors.mean()),
        std_err_pp=float(errors.std(ddof=1)) if errors.size > 1 else 0.0,
        std_rep_mae_pp=float(rep_mae.std(ddof=1)) if rep_mae.size > 1 else 0.0,
        coverage_pct=100.0 * covered / len(rows),
        n_repetitions=len({r.repetition for r in rows}),
        baseline_window_s=baseline_window_s,
        estimation_minutes=estimation_minutes,
    )


def compare(
    pred: PerformanceCurve,
    truth: GroundTruthCurve,
    *,
    repetition: int = 0,
    estimation_minutes: float | None = None,
) -> EvaluationReport:
    _check_grid(pred.windows, truth.windows)
    true_at = {p.window_s: p.accuracy_pct for p in truth.points}

    rows = []
    for p in pred.points:
        true_pct = true_at[p.window_s]
        rows.append(
            ReportRow(
                window_s=p.window_s,
                true_pct=true_pct,
                pred_pct=p.accuracy_pct,
                abs_err_pp=abs(true_pct - p.accuracy_pct),
                ci_low=p.ci_low_pct,
                ci_high=p.ci_high_pct,
                covered=p.ci_low_pct <= true_pct <= p.ci_high_pct,
                repetition=repetition,
            )
        )
    return _aggregate(
        rows, baseline_window_s=pred.baseline_window_s, estimation_minutes=estimation_minutes
    )


def summarize(reports: Sequence[EvaluationReport]) -> EvaluationReport:
    """Pool several reports into one; each input report keeps its own repetition tag."""
    if not reports:
        raise EmptySet("no reports to summarize")
    rows = [
        row.model_copy(update={"repetition": i}) if len(reports) > 1 else row
        for i, rep in enumerate(reports)
        for row in rep.per_point
    ]
    first = reports[0]
    return _aggregate(
        rows,
        baseline_window_s=first.baseline_window_s,
        estimation_minutes=first.estimation_minutes,
    )


def subsample_experiment(
    pool: LabeledCorrelationSet,
    minutes_grid: Sequence[float],
    n_repetitions: int,
    targets: Sequence[float],
    cfg: CiConfig,
    truth: GroundTruthCurve,
) -> list[EvaluationReport]:
    """Model the curve from random subsets of the pool, ``n_repetitions`` per data amount."""
    if n_repetitions < 1:
        raise TooFewSamples(f"need at least one repetition, got {n_repetitions}")
    _check_grid(targets, truth.windows)

    reports = []
    for minutes in minutes_grid:
        k = windows_in(minutes, pool.window_s)
        if k > pool.m:
            raise InsufficientPool(
                f"{minutes} min needs {k} windows of {pool.window_s:g} s, pool has {pool.m}"
            )
        if k < 2:
            raise TooFewSamples(f"{minutes} min gives {k} < 2 windows of {pool.window_s:g} s")

        per_rep = []
        for rep in range(n_repetitions):
            key = (pool.n_samples, int(round(minutes * 1000)), rep)
            if k == pool.m:
                subset = pool
            else:
                rng = seeding.stream(cfg.seed, seeding.SUBSAMPLE, *key)
                subset = pool.subset(rng.choice(pool.m, size=k, replace=False))
            rep_cfg = cfg.model_copy(
                update={"seed": seeding.derive_seed(cfg.seed, seeding.BOOTSTRAP, *key)}
            )
            curve = model_curve(subset, targets, rep_cfg)
            per_rep.append(compare(curve, truth, repetition=rep, estimation_minutes=minutes))

        report = summarize(per_rep)
        log.info(
            "Subsample condition done: mae=%.3f pp coverage=%.1f%%",
            report.mae_pp,
            report.coverage_pct,
            extra={
                "event": "subsample_condition",
                "minutes": minutes,
                "baseline_s": pool.window_s,
                "repetition": n_repetitions,
            },
        )
        reports.append(report)
    return reports


def baseline_sweep(
    pools: Mapping[float, LabeledCorrelationSet],
    baselines: Sequence[float],
    targets: Sequence[float],
    cfg: CiConfig,
    truth: GroundTruthCurve,
    *,
    minutes: float | None = None,
    n_repetitions: int = 1,
) -> list[EvaluationReport]:
    """One report per baseline window; each baseline is modeled from its own pool."""
    reports = []
    for baseline in baselines:
        pool = pools.get(baseline)
        if pool is None:
            raise MissingPool(f"no correlation pool for baseline {baseline:g} s")
        amount = minutes if minutes is not None else pool.m * pool.window_s / 60.0
        reports.extend(subsample_experiment(pool, [amount], n_repetitions, targets, cfg, truth))
    return reports


def average_curves(curves: Sequence[PerformanceCurve]) -> PerformanceCurve:
    """Unweighted mean of per-set modeled curves; CI endpoints are averaged alike."""
    if not curves:
        raise EmptySet("no curves to average")
    first = curves[0]
    for c in curves[1:]:
        _check_grid(first.windows, c.windows)

    frame = pd.concat([_curve_frame(c) for c in curves]).groupby("window_s").mean()
    points = tuple(
        CurvePoint(
            window_s=float(w),
            accuracy_pct=float(row.accuracy_pct),
            ci_low_pct=float(row.ci_low_pct),
            ci_high_pct=float(row.ci_high_pct),
        )
        for w, row in frame.iterrows()
    )
    return PerformanceCurve(
        points=points,
        baseline_window_s=first.baseline_window_s,
        fs_hz=first.fs_hz,
        bootstrap_samples=first.bootstrap_samples,
        ci_level=first.ci_level,
    )


def _curve_frame(curve: PerformanceCurve) -> pd.DataFrame:
    return pd.DataFrame([p.model_dump() for p in curve.points])


def average_truth(truths: Sequence[GroundTruthCurve]) -> GroundTruthCurve:
    """Unweighted mean accuracy across sets; decision counts are summed."""
    if not truths:
        raise EmptySet("no ground-truth curves to average")
    for t in truths[1:]:
        _check_grid(truths[0].windows, t.windows)

    frame = pd.DataFrame([p.model_dump() for t in truths for p in t.points])
    grouped = frame.groupby("window_s").agg(
        accuracy_pct=("accuracy_pct", "mean"),
        n_decisions=("n_decisions", "sum"),
        n_correct=("n_correct", "sum"),
    )
    return GroundTruthCurve(
        points=tuple(
            TruthPoint(
                window_s=float(w),
                accuracy_pct=float(row.accuracy_pct),
                n_decisions=int(row.n_decisions),
                n_correct=int(row.n_correct),
            )
            for w, row in grouped.iterrows()
        )
    )


def constancy_check(sets: Sequence[LabeledCorrelationSet]) -> pd.DataFrame:
    """Mean attended correlation per window length and its deviation from the pooled mean.

    The ``z`` column is the deviation in standard errors of that window's mean.
    """
    if not sets:
        raise EmptySet("no correlation sets given")
    rows = []
    for s in sets:
        if s.m < 2:
            raise TooFewSamples(f"need at least 2 pairs at {s.window_s:g} s, got {s.m}")
        r_att = s.as_array()[:, 0]
        rows.append(
            {
                "window_s": s.window_s,
                "mean_r_att": float(r_att.mean()),
                "se": float(r_att.std(ddof=1) / np.sqrt(s.m)),
            }
        )
    df = pd.DataFrame(rows)
    weights = 1.0 / df["se"] ** 2
    pooled = float((weights * df["mean_r_att"]).sum() / weights.sum())
    df["z"] = (df["mean_r_att"] - pooled).abs() / df["se"]
    return df


def report_table(report: EvaluationReport) -> pd.DataFrame:
    """Per-window true and predicted accuracy averaged over repetitions, longest window first."""
    frame = pd.DataFrame([r.model_dump() for r in report.per_point])
    table = (
        frame.groupby("window_s")[["true_pct", "pred_pct"]]
        .mean()
        .sort_index(ascending=False)
        .reset_index()
    )
    return table
