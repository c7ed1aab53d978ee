from .correlations import (
    WindowedSignalPair,
    HotellingMoments,
    LabeledCorrelationSet,
    DecisionVariableModel,
)
from .curves import CiConfig, CiResult, CurvePoint, PerformanceCurve, TruthPoint, GroundTruthCurve
from .scenario import GeneratorMode, SyntheticScenario
from .reports import ReportRow, EvaluationReport
from .run_config import Aggregate, RunConfig, Subcommand

__all__ = (
    "WindowedSignalPair",
    "HotellingMoments",
    "LabeledCorrelationSet",
    "DecisionVariableModel",
    "CiConfig",
    "CiResult",
    "CurvePoint",
    "PerformanceCurve",
    "TruthPoint",
    "GroundTruthCurve",
    "GeneratorMode",
    "SyntheticScenario",
    "ReportRow",
    "EvaluationReport",
    "Aggregate",
    "RunConfig",
    "Subcommand",
)
