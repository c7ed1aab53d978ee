from .synthetic import (
    WindowTriple,
    generate_windows,
    correlation_pairs,
    empirical_accuracy,
    labeled_set,
    multi_window_sets,
    windows_in,
)

__all__ = (
    "WindowTriple",
    "generate_windows",
    "correlation_pairs",
    "empirical_accuracy",
    "labeled_set",
    "multi_window_sets",
    "windows_in",
)
