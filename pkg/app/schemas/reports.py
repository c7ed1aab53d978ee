from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field


class ReportRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    window_s: float
    true_pct: float
    pred_pct: float
    abs_err_pp: float = Field(ge=0)
    ci_low: float
    ci_high: float
    covered: bool
    repetition: int = 0


class EvaluationReport(BaseModel):
    """Modeled-vs-true comparison; one row per (curve point, repetition)."""

    model_config = ConfigDict(frozen=True)

    per_point: tuple[ReportRow, ...]
    mae_pp: float = Field(ge=0)
    std_err_pp: float = Field(ge=0)
    std_rep_mae_pp: float = Field(default=0.0, ge=0)
    coverage_pct: float = Field(ge=0, le=100)
    n_repetitions: int = Field(ge=1)
    baseline_window_s: float
    estimation_minutes: float | None = None
