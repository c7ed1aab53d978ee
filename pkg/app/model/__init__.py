from .decision import estimate_model, extrapolate, extrapolate_params, predict_accuracy
from .bootstrap import bca_interval, normal_quantile
from .curve import (
    CURVE_COLUMNS,
    model_curve,
    required_rho_att,
    min_window_for_accuracy,
    curve_table,
    curve_from_table,
)

__all__ = (
    "estimate_model",
    "extrapolate",
    "extrapolate_params",
    "predict_accuracy",
    "bca_interval",
    "normal_quantile",
    "CURVE_COLUMNS",
    "model_curve",
    "required_rho_att",
    "min_window_for_accuracy",
    "curve_table",
    "curve_from_table",
)
