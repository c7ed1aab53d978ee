from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd
from pandas.errors import EmptyDataError, ParserError

from app.core.config import settings
from app.core.errors import ParseError
from app.schemas import LabeledCorrelationSet

log = logging.getLogger("app.clients.correlations_csv")

COLUMNS = ("r_att", "r_unatt")


def sidecar_path(path: Path) -> Path:
    """``corr.csv`` -> ``corr.meta.json``."""
    return path.with_name(f"{path.stem}.meta.json")


def read_sidecar(path: Path) -> dict[str, Any]:
    meta = sidecar_path(path)
    if not meta.exists():
        return {}
    try:
        return json.loads(meta.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ParseError(f"{meta}: invalid JSON at line {e.lineno}: {e.msg}") from e


def _numeric_column(df: pd.DataFrame, col: str, path: Path) -> np.ndarray:
    values = pd.to_numeric(df[col], errors="coerce")
    bad = values.isna() | ~np.isfinite(values)
    if bad.any():
        row = int(np.argmax(bad.to_numpy())) + 2  # header is line 1
        raise ParseError(f"{path}: row {row}, column {col}: not a number ({df[col].iloc[row - 2]!r})")
    out = values.to_numpy(dtype=float)
    outside = np.abs(out) > 1.0
    if outside.any():
        row = int(np.argmax(outside)) + 2
        raise ParseError(f"{path}: row {row}, column {col}: correlation {out[row - 2]} outside [-1, 1]")
    return out


def read_correlations(
    path: Path,
    *,
    window_s: float | None = None,
    fs_hz: float | None = None,
) -> LabeledCorrelationSet:
    """Labeled correlations from CSV; flags override the ``.meta.json`` sidecar."""
    if not path.exists():
        raise ParseError(f"{path}: file not found")
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except EmptyDataError as e:
        raise ParseError(f"{path}: empty file") from e
    except ParserError as e:
        raise ParseError(f"{path}: {e}") from e

    df.columns = [str(c).strip() for c in df.columns]
    for col in COLUMNS:
        if col not in df.columns:
            raise ParseError(f"{path}: missing column {col} (header must start with r_att,r_unatt)")
    if df.empty:
        raise ParseError(f"{path}: no data rows")

    meta = read_sidecar(path)
    window_s = window_s if window_s is not None else meta.get("window_s")
    fs_hz = fs_hz if fs_hz is not None else meta.get("fs_hz")
    if window_s is None or fs_hz is None:
        raise ParseError(f"{path}: window length and sampling rate needed (--window-s/--fs or sidecar)")

    pairs = np.column_stack([_numeric_column(df, col, path) for col in COLUMNS])
    log.debug(
        "Read %s labeled pairs",
        len(pairs),
        extra={"event": "read_correlations", "path": str(path), "m_count": len(pairs)},
    )
    return LabeledCorrelationSet(pairs=pairs, window_s=float(window_s), fs_hz=float(fs_hz))


def write_correlations(path: Path, data: LabeledCorrelationSet, extra_meta: dict[str, Any] | None = None) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(data.as_array(), columns=list(COLUMNS)).to_csv(
        path,
        index=False,
        float_format=settings.io.FLOAT_FORMAT,
        lineterminator="\n",
        encoding="utf-8",
    )
    meta = {"window_s": data.window_s, "fs_hz": data.fs_hz, **(extra_meta or {})}
    sidecar_path(path).write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
