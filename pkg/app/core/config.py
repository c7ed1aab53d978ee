from __future__ import annotations

import os

from dotenv import load_dotenv
from pydantic import BaseModel
from pydantic_settings import BaseSettings, SettingsConfigDict

# .env at the project root
load_dotenv(os.path.join(os.path.dirname(__file__), "../../.env"))


class BootstrapSettings(BaseModel):
    N_BOOT: int = 1000
    CI_LEVEL: float = 0.95
    SEED: int = 0
    MAX_REDRAW_FACTOR: int = 10


class StatsSettings(BaseModel):
    CLAMP: bool = True
    CLAMP_EPS: float = 1e-12


class EvaluationSettings(BaseModel):
    TARGETS: tuple[float, ...] = (60.0, 30.0, 20.0, 10.0, 5.0, 1.0)
    MINUTES_GRID: tuple[float, ...] = (2.0, 5.0, 10.0, 30.0, 60.0)
    REPETITIONS: int = 10
    BASELINE_S: float = 20.0


class IOSettings(BaseModel):
    FLOAT_FORMAT: str = "%.12g"
    SVG_Y_FLOOR: float = 45.0
    SVG_Y_CEIL: float = 100.0


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="AAD__",
        env_nested_delimiter="__",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
        populate_by_name=True,
    )

    bootstrap: BootstrapSettings = BootstrapSettings()
    stats: StatsSettings = StatsSettings()
    evaluation: EvaluationSettings = EvaluationSettings()
    io: IOSettings = IOSettings()


settings: Settings = Settings()
