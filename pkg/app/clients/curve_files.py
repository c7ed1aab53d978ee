from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import pandas as pd
from pandas.errors import EmptyDataError, ParserError
from pydantic import ValidationError

from app.core.config import settings
from app.core.errors import ParseError
from app.model import CURVE_COLUMNS, curve_from_table, curve_table
from app.schemas import PerformanceCurve


def write_curve_csv(path: Path, curve: PerformanceCurve) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    curve_table(curve).to_csv(
        path,
        index=False,
        float_format=settings.io.FLOAT_FORMAT,
        lineterminator="\n",
        encoding="utf-8",
    )


def report_path(curve_path: Path) -> Path:
    return curve_path.with_suffix(".json")


def read_curve_csv(path: Path) -> PerformanceCurve:
    """Curve CSV back into a PerformanceCurve; metadata comes from the sibling report if present."""
    if not path.exists():
        raise ParseError(f"{path}: file not found")
    try:
        df = pd.read_csv(path)
    except (EmptyDataError, ParserError) as e:
        raise ParseError(f"{path}: {e}") from e

    missing = [c for c in CURVE_COLUMNS if c not in df.columns]
    if missing:
        raise ParseError(f"{path}: missing column {missing[0]}")
    if df.empty:
        raise ParseError(f"{path}: no curve points")
    bad = df[list(CURVE_COLUMNS)].apply(pd.to_numeric, errors="coerce").isna()
    if bad.to_numpy().any():
        row, col = next((i, c) for c in CURVE_COLUMNS for i in range(len(df)) if bad[c].iloc[i])
        raise ParseError(f"{path}: row {row + 2}, column {col}: not a number")

    meta: dict[str, Any] = {}
    sibling = report_path(path)
    if sibling.exists():
        report = read_json(sibling)
        cfg = report.get("config", {})
        model = report.get("model", {})
        meta = {
            "baseline_window_s": model.get("baseline_window_s", cfg.get("window_s", float("nan"))),
            "fs_hz": model.get("fs_hz", cfg.get("fs_hz", float("nan"))),
            "bootstrap_samples": cfg.get("n_boot", 0),
            "ci_level": cfg.get("ci_level", 0.95),
        }
    try:
        return curve_from_table(df.astype({c: float for c in CURVE_COLUMNS}), **meta)
    except ValidationError as e:
        raise ParseError(f"{path}: {e.errors()[0]['msg']}") from e


def write_json(path: Path, payload: dict[str, Any]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def read_json(path: Path) -> dict[str, Any]:
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from e
