from __future__ import annotations

import logging
from pathlib import Path
from typing import Any

from app.clients import (
    read_correlations,
    read_curve_csv,
    render_svg,
    report_path,
    write_correlations,
    write_curve_csv,
    write_json,
)
from app.core.errors import GridMismatch, InvalidWindow, ParseError, TooFewSamples
from app.evaluation import (
    average_curves,
    average_truth,
    compare,
    ground_truth_curve,
    report_table,
    summarize,
)
from app.model import estimate_model, model_curve
from app.schemas import (
    Aggregate,
    CiConfig,
    EvaluationReport,
    GroundTruthCurve,
    LabeledCorrelationSet,
    RunConfig,
    SyntheticScenario,
)
from app.simulation import correlation_pairs, labeled_set, windows_in
from app.utils import seeding

log = logging.getLogger("app.pipeline")


def _config_echo(cfg: RunConfig) -> dict[str, Any]:
    return cfg.model_dump(mode="json", exclude_none=True)


def _ci(cfg: RunConfig) -> CiConfig:
    return CiConfig(n_boot=cfg.n_boot, level=cfg.ci_level, seed=cfg.seed)


def _single_input(cfg: RunConfig) -> Path:
    if len(cfg.inputs) != 1:
        raise ParseError(f"{cfg.subcommand.value} takes exactly one input file, got {len(cfg.inputs)}")
    return cfg.inputs[0]


def run_predict(cfg: RunConfig) -> dict[str, Any]:
    """Curve CSV plus JSON report for one labeled correlation file."""
    data = read_correlations(_single_input(cfg), window_s=cfg.window_s, fs_hz=cfg.fs_hz)
    model = estimate_model(data)

    warnings: list[str] = []
    total_s = data.m * data.window_s
    for target in cfg.targets:
        if target > total_s:
            msg = f"target window {target:g} s is longer than the {total_s:g} s of estimation data"
            warnings.append(msg)
            log.warning(msg, extra={"event": "predict_warning", "target_s": target})

    curve = model_curve(data, list(cfg.targets), _ci(cfg))

    write_curve_csv(cfg.out, curve)
    report = {
        "config": _config_echo(cfg),
        "model": model.model_dump(mode="json"),
        "curve": [p.model_dump(mode="json") for p in curve.points],
        "warnings": warnings,
    }
    write_json(report_path(cfg.out), report)
    log.info(
        "Predicted curve written",
        extra={"event": "predict", "path": str(cfg.out), "m_count": data.m},
    )
    return report


def _required(cfg: RunConfig, *names: str) -> None:
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-").replace("fs-hz", "fs") for n in missing)
        raise ParseError(f"{cfg.subcommand.value}: missing {flags}")


def truth_file(out: Path, window_s: float) -> Path:
    """``sim.csv`` at 60 s -> ``sim.w60.csv``."""
    return out.with_name(f"{out.stem}.w{window_s:g}{out.suffix}")


def run_simulate(cfg: RunConfig) -> dict[str, Any]:
    """Labeled estimation set, and optional ground-truth sets at ``truth_windows``."""
    _required(cfg, "rho_att", "rho_unatt", "window_s", "fs_hz", "minutes")
    scn = SyntheticScenario(
        rho_att=cfg.rho_att,
        rho_unatt=cfg.rho_unatt,
        fs_hz=cfg.fs_hz,
        duration_s=cfg.minutes * 60.0,
        seed=cfg.seed,
        mode=cfg.mode,
    )
    try:
        data = labeled_set(scn, cfg.window_s, cfg.minutes)
    except TooFewSamples as e:
        raise InvalidWindow(str(e)) from e

    scenario = scn.model_dump(mode="json")
    write_correlations(cfg.out, data, {"role": "estimation", "scenario": scenario})

    written = [str(cfg.out)]
    truth_scn = scn.reseeded(seeding.derive_seed(cfg.seed, seeding.SYNTHETIC, 1))
    truth_minutes = cfg.truth_minutes or cfg.minutes
    for w in cfg.truth_windows:
        count = windows_in(truth_minutes, w)
        if count < 1:
            raise InvalidWindow(f"{truth_minutes} min holds no {w:g} s window")
        truth_set = LabeledCorrelationSet(
            pairs=correlation_pairs(truth_scn, w, count), window_s=w, fs_hz=cfg.fs_hz
        )
        path = truth_file(cfg.out, w)
        write_correlations(path, truth_set, {"role": "ground-truth", "scenario": truth_scn.model_dump(mode="json")})
        written.append(str(path))

    log.info(
        "Simulated %s labeled pairs",
        data.m,
        extra={"event": "simulate", "path": str(cfg.out), "m_count": data.m},
    )
    return {"scenario": scenario, "m_count": data.m, "files": written}


def _truth_curve(paths: tuple[Path, ...], cfg: RunConfig) -> GroundTruthCurve:
    window = cfg.window_s if len(paths) == 1 else None
    sets = [read_correlations(p, window_s=window, fs_hz=cfg.fs_hz) for p in paths]
    return ground_truth_curve(sets)


def _report_block(label: str, report: EvaluationReport) -> dict[str, Any]:
    table = report_table(report)
    return {
        "label": label,
        "table": table.to_dict(orient="records"),
        "mae_pp": report.mae_pp,
        "std_err_pp": report.std_err_pp,
        "std_rep_mae_pp": report.std_rep_mae_pp,
        "coverage_pct": report.coverage_pct,
        "per_point": [r.model_dump(mode="json") for r in report.per_point],
    }


def run_evaluate(cfg: RunConfig) -> dict[str, Any]:
    """Compare prediction curve(s) against ground truth built from multi-window correlation files."""
    if not cfg.inputs:
        raise ParseError("evaluate: no prediction curve given")
    if not cfg.truth:
        raise ParseError("evaluate: no ground-truth correlation files given (--truth)")
    if len(cfg.truth) not in (1, len(cfg.inputs)):
        raise GridMismatch(
            f"{len(cfg.inputs)} prediction curves but {len(cfg.truth)} ground-truth groups"
        )

    preds = [read_curve_csv(p) for p in cfg.inputs]
    truths = [_truth_curve(g, cfg) for g in cfg.truth]
    if len(truths) == 1 and len(preds) > 1:
        truths = truths * len(preds)

    if cfg.aggregate is Aggregate.mean:
        summary = compare(average_curves(preds), average_truth(truths))
        sets = []
    else:
        reports = [compare(p, t, repetition=i) for i, (p, t) in enumerate(zip(preds, truths))]
        summary = summarize(reports)
        sets = [_report_block(str(path), rep) for path, rep in zip(cfg.inputs, reports)]

    payload = {
        "config": _config_echo(cfg),
        "aggregate": cfg.aggregate.value,
        "sets": sets,
        "summary": _report_block(cfg.aggregate.value, summary),
    }
    write_json(cfg.out, payload)
    log.info(
        "Evaluation: mae=%.3f pp coverage=%.1f%%",
        summary.mae_pp,
        summary.coverage_pct,
        extra={"event": "evaluate", "path": str(cfg.out)},
    )
    return payload


def run_plot(cfg: RunConfig) -> Path:
    curve = read_curve_csv(_single_input(cfg))
    truth = _truth_curve(cfg.truth[0], cfg) if cfg.truth else None
    return render_svg(curve, cfg.out, truth=truth, log_x=cfg.log_x)
