from __future__ import annotations

import enum
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.core.config import settings
from app.schemas.scenario import GeneratorMode


class Subcommand(str, enum.Enum):
    predict = "predict"
    simulate = "simulate"
    evaluate = "evaluate"
    plot = "plot"


class Aggregate(str, enum.Enum):
    per_set = "per-set"
    mean = "mean"


def _unique_positive(v: tuple[float, ...]) -> tuple[float, ...]:
    if any(t <= 0 for t in v):
        raise ValueError("window lengths must be positive")
    if len(set(v)) != len(v):
        raise ValueError("window lengths must be unique")
    return v


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    subcommand: Subcommand
    inputs: tuple[Path, ...] = ()
    truth: tuple[tuple[Path, ...], ...] = ()
    out: Path

    window_s: float | None = Field(default=None, gt=0)
    fs_hz: float | None = Field(default=None, gt=0)
    targets: tuple[float, ...] = Field(default_factory=lambda: settings.evaluation.TARGETS)

    n_boot: int = Field(default_factory=lambda: settings.bootstrap.N_BOOT, ge=100)
    ci_level: float = Field(default_factory=lambda: settings.bootstrap.CI_LEVEL, gt=0.5, lt=1)
    seed: int = Field(default_factory=lambda: settings.bootstrap.SEED, ge=0, lt=2**64)

    rho_att: float | None = None
    rho_unatt: float | None = None
    minutes: float | None = Field(default=None, gt=0)
    mode: GeneratorMode = GeneratorMode.signal
    truth_windows: tuple[float, ...] = ()
    truth_minutes: float | None = Field(default=None, gt=0)

    aggregate: Aggregate = Aggregate.per_set
    log_x: bool = False

    @field_validator("targets", "truth_windows")
    @classmethod
    def _windows(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        return _unique_positive(v)
