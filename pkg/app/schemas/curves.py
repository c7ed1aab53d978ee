from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.core.config import settings


class CiConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_boot: int = Field(default_factory=lambda: settings.bootstrap.N_BOOT, ge=100)
    level: float = Field(default_factory=lambda: settings.bootstrap.CI_LEVEL, gt=0.5, lt=1)
    seed: int = Field(default_factory=lambda: settings.bootstrap.SEED, ge=0, lt=2**64)


class CiResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    low_pct: float = Field(ge=0, le=100)
    high_pct: float = Field(ge=0, le=100)
    point_pct: float = Field(ge=0, le=100)
    n_boot_effective: int
    percentile_fallback: bool = False
    bracket_adjusted: bool = False


class CurvePoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    window_s: float = Field(gt=0)
    accuracy_pct: float = Field(ge=0, le=100)
    ci_low_pct: float
    ci_high_pct: float


class PerformanceCurve(BaseModel):
    """Predicted accuracy per target window, sorted by descending window length."""

    model_config = ConfigDict(frozen=True)

    points: tuple[CurvePoint, ...]
    baseline_window_s: float
    fs_hz: float
    bootstrap_samples: int
    ci_level: float = Field(gt=0, lt=1)

    @field_validator("points")
    @classmethod
    def _sorted_unique(cls, v: tuple[CurvePoint, ...]) -> tuple[CurvePoint, ...]:
        pts = tuple(sorted(v, key=lambda p: -p.window_s))
        windows = [p.window_s for p in pts]
        if len(set(windows)) != len(windows):
            raise ValueError("window lengths must be unique")
        return pts

    @property
    def windows(self) -> list[float]:
        return [p.window_s for p in self.points]


class TruthPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    window_s: float = Field(gt=0)
    accuracy_pct: float = Field(ge=0, le=100)
    n_decisions: int = Field(ge=1)
    n_correct: int = Field(ge=0)


class GroundTruthCurve(BaseModel):
    model_config = ConfigDict(frozen=True)

    points: tuple[TruthPoint, ...]

    @field_validator("points")
    @classmethod
    def _sorted(cls, v: tuple[TruthPoint, ...]) -> tuple[TruthPoint, ...]:
        return tuple(sorted(v, key=lambda p: -p.window_s))

    @property
    def windows(self) -> list[float]:
        return [p.window_s for p in self.points]
