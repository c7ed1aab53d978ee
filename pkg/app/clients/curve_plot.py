from __future__ import annotations

import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from app.core.config import settings  # noqa: E402
from app.schemas import GroundTruthCurve, PerformanceCurve  # noqa: E402

log = logging.getLogger("app.clients.curve_plot")

# element ids in the emitted markup
PRED_ID = "predicted-curve"
TRUTH_ID = "truth-curve"
BAND_ID = "ci-band"
CHANCE_ID = "chance-line"

_SVG_RC = {
    "svg.hashsalt": "aad-curve",
    "svg.fonttype": "none",
    "font.family": "DejaVu Sans",
}


def render_svg(
    curve: PerformanceCurve,
    out: Path,
    *,
    truth: GroundTruthCurve | None = None,
    log_x: bool = False,
) -> Path:
    """Predicted curve with CI band, optional ground truth and the 50% chance line.

    matplotlib writes each series as a ``<g>`` group of ``<path>`` elements, not as
    ``<polyline>``/``<polygon>``. The two curves and the band are told apart by group
    id: ``PRED_ID`` and ``TRUTH_ID`` for the lines, ``BAND_ID`` for the CI band and
    ``CHANCE_ID`` for the chance line. Each id appears exactly once in the file.
    """
    windows = np.array(curve.windows)
    acc = np.array([p.accuracy_pct for p in curve.points])
    low = np.array([p.ci_low_pct for p in curve.points])
    high = np.array([p.ci_high_pct for p in curve.points])

    with plt.rc_context(_SVG_RC):
        fig, ax = plt.subplots(figsize=(6.4, 4.0))
        band = ax.fill_between(windows, low, high, alpha=0.25, color="tab:blue", linewidth=0)
        band.set_gid(BAND_ID)
        (line,) = ax.plot(windows, acc, marker="o", color="tab:blue", label="predicted")
        line.set_gid(PRED_ID)
        for w, a in zip(windows, acc):
            ax.annotate(f"{a:.1f}", (w, a), textcoords="offset points", xytext=(0, 6), ha="center", fontsize=7)

        if truth is not None:
            t_w = np.array(truth.windows)
            t_acc = np.array([p.accuracy_pct for p in truth.points])
            (t_line,) = ax.plot(t_w, t_acc, marker="s", color="black", linestyle="--", label="ground truth")
            t_line.set_gid(TRUTH_ID)

        chance = ax.axhline(50.0, color="grey", linestyle=":", linewidth=1.0, label="chance")
        chance.set_gid(CHANCE_ID)

        floor, ceil = settings.io.SVG_Y_FLOOR, settings.io.SVG_Y_CEIL
        ax.set_ylim(floor, ceil)
        ax.set_yticks(np.arange(floor, ceil + 1e-9, 5.0))
        if log_x:
            ax.set_xscale("log")
        else:
            ax.invert_xaxis()
        ax.set_xlabel("decision window length [s]")
        ax.set_ylabel("accuracy [%]")
        ax.legend(loc="lower left", fontsize=8)
        ax.grid(alpha=0.3)
        fig.tight_layout()

        out.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out, format="svg", metadata={"Date": None})
        plt.close(fig)

    log.info("Wrote curve plot", extra={"event": "plot", "path": str(out)})
    return out
