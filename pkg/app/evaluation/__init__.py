from .protocol import (
    ground_truth_curve,
    compare,
    summarize,
    subsample_experiment,
    baseline_sweep,
    average_curves,
    average_truth,
    constancy_check,
    report_table,
)

__all__ = (
    "ground_truth_curve",
    "compare",
    "summarize",
    "subsample_experiment",
    "baseline_sweep",
    "average_curves",
    "average_truth",
    "constancy_check",
    "report_table",
)
