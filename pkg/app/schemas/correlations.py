from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator


class WindowedSignalPair(BaseModel):
    """Decoded response ``x`` and speech representation ``y`` over one decision window."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    x: np.ndarray
    y: np.ndarray

    @field_validator("x", "y", mode="before")
    @classmethod
    def _readonly_array(cls, v) -> np.ndarray:
        arr = np.array(v, dtype=float).ravel()
        arr.setflags(write=False)
        return arr

    @property
    def n(self) -> int:
        return int(self.x.size)


class HotellingMoments(BaseModel):
    model_config = ConfigDict(frozen=True)

    mu: float
    sigma_sq: float = Field(gt=0)


class LabeledCorrelationSet(BaseModel):
    """M labeled (attended, unattended) correlation pairs at one decision window length."""

    model_config = ConfigDict(frozen=True)

    pairs: tuple[tuple[float, float], ...]
    window_s: float = Field(gt=0)
    fs_hz: float = Field(gt=0)

    @field_validator("pairs", mode="before")
    @classmethod
    def _pairs_from_array(cls, v):
        if isinstance(v, np.ndarray):
            return tuple((float(a), float(u)) for a, u in v.reshape(-1, 2))
        return v

    @property
    def m(self) -> int:
        return len(self.pairs)

    @property
    def n_samples(self) -> int:
        return int(round(self.window_s * self.fs_hz))

    def as_array(self) -> np.ndarray:
        """(M, 2) float array; column 0 attended, column 1 unattended."""
        return np.asarray(self.pairs, dtype=float).reshape(-1, 2)

    def subset(self, idx) -> LabeledCorrelationSet:
        arr = self.as_array()[np.asarray(idx, dtype=int)]
        return LabeledCorrelationSet(pairs=arr, window_s=self.window_s, fs_hz=self.fs_hz)


class DecisionVariableModel(BaseModel):
    """Fisher-domain decision variable z_att - z_unatt estimated at the baseline window."""

    model_config = ConfigDict(frozen=True)

    mu_diff: float
    # zero is representable so identical-pair input surfaces as ZeroVariance downstream
    sigma_sum_sq: float = Field(ge=0)
    rho_att: float = Field(gt=-1, lt=1)
    rho_unatt: float = Field(gt=-1, lt=1)
    n_baseline: int = Field(ge=2)
    m_count: int = Field(ge=1)
    baseline_window_s: float = Field(gt=0)
    fs_hz: float = Field(gt=0)
