from __future__ import annotations

import enum

from pydantic import BaseModel, ConfigDict, Field


class GeneratorMode(str, enum.Enum):
    signal = "signal"
    correlation = "correlation"


class SyntheticScenario(BaseModel):
    """Ground-truth latent correlations driving the Monte Carlo oracle."""

    model_config = ConfigDict(frozen=True)

    rho_att: float
    rho_unatt: float
    fs_hz: float = Field(gt=0)
    duration_s: float = Field(gt=0)
    seed: int = Field(default=0, ge=0, lt=2**64)
    mode: GeneratorMode = GeneratorMode.signal

    def reseeded(self, seed: int) -> SyntheticScenario:
        return self.model_copy(update={"seed": int(seed)})
