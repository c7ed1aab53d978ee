from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from app.schemas import CiConfig, LabeledCorrelationSet, SyntheticScenario
from app.simulation import labeled_set

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def small_set() -> LabeledCorrelationSet:
    """Same pairs as tests/data/labeled_small.csv: d = artanh(0.5) * (1, 1, -1, 1, 2, 0, 1, 1)."""
    pairs = np.array(
        [
            [0.5, 0.0],
            [0.5, 0.0],
            [0.0, 0.5],
            [0.5, 0.0],
            [0.5, -0.5],
            [0.0, 0.0],
            [0.5, 0.0],
            [0.0, -0.5],
        ]
    )
    return LabeledCorrelationSet(pairs=pairs, window_s=20.0, fs_hz=64.0)


@pytest.fixture
def reference_scenario() -> SyntheticScenario:
    return SyntheticScenario(rho_att=0.2, rho_unatt=0.05, fs_hz=20.0, duration_s=1800.0, seed=11)


@pytest.fixture
def fast_ci() -> CiConfig:
    return CiConfig(n_boot=200, level=0.95, seed=7)


@pytest.fixture
def reference_set(reference_scenario) -> LabeledCorrelationSet:
    """30 min of 20 s windows: 90 pairs."""
    return labeled_set(reference_scenario, 20.0, 30.0)
