from .correlations_csv import read_correlations, write_correlations, read_sidecar, sidecar_path
from .curve_files import read_curve_csv, write_curve_csv, read_json, write_json, report_path
from .curve_plot import render_svg

__all__ = [
    "read_correlations",
    "write_correlations",
    "read_sidecar",
    "sidecar_path",
    "read_curve_csv",
    "write_curve_csv",
    "read_json",
    "write_json",
    "report_path",
    "render_svg",
]
