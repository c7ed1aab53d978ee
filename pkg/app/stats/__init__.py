from .core import (
    clamp_r,
    pearson,
    pearson_rows,
    fisher,
    fisher_inv,
    std_normal_cdf,
    samples_in_window,
    hotelling_moments,
)

__all__ = (
    "clamp_r",
    "pearson",
    "pearson_rows",
    "fisher",
    "fisher_inv",
    "std_normal_cdf",
    "samples_in_window",
    "hotelling_moments",
)
