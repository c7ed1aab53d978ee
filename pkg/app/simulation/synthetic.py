from __future__ import annotations

import logging
import math
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from app.core.errors import InvalidWindow, NormConstraint, OutOfDomain, TooFewSamples
from app.schemas import GeneratorMode, LabeledCorrelationSet, SyntheticScenario
from app.stats import hotelling_moments, pearson_rows, samples_in_window
from app.utils import seeding

log = logging.getLogger("app.simulation.synthetic")

# windows are drawn in blocks of about this many samples; block b of a window
# length always comes from substream (seed, N, b)
_BLOCK_SAMPLES = 1 << 18


class WindowTriple(NamedTuple):
    x: np.ndarray
    y_att: np.ndarray
    y_unatt: np.ndarray


def _check(scn: SyntheticScenario) -> None:
    if not scn.rho_att**2 + scn.rho_unatt**2 < 1.0:
        raise NormConstraint(
            f"rho_att^2 + rho_unatt^2 must be < 1, got {scn.rho_att**2 + scn.rho_unatt**2:.6g}"
        )


def _block_size(n: int) -> int:
    return max(1, _BLOCK_SAMPLES // n)


def _signal_blocks(scn: SyntheticScenario, n: int, n_windows: int) -> Iterator[WindowTriple]:
    """Mixed signals x = rho_a*y_a + rho_u*y_u + sqrt(1-rho_a^2-rho_u^2)*noise, blockwise."""
    bw = _block_size(n)
    gain = math.sqrt(1.0 - scn.rho_att**2 - scn.rho_unatt**2)
    remaining = n_windows
    for b in range(math.ceil(n_windows / bw)):
        rng = seeding.stream(scn.seed, seeding.SYNTHETIC, n, b)
        y_att, y_unatt, noise = rng.standard_normal((3, bw, n))
        x = scn.rho_att * y_att + scn.rho_unatt * y_unatt + gain * noise
        take = min(bw, remaining)
        remaining -= take
        yield WindowTriple(x[:take], y_att[:take], y_unatt[:take])


def _fisher_blocks(scn: SyntheticScenario, n: int, n_windows: int) -> Iterator[np.ndarray]:
    """Correlation pairs drawn straight from the Hotelling normal model, blockwise."""
    att = hotelling_moments(scn.rho_att, n)
    unatt = hotelling_moments(scn.rho_unatt, n)
    loc = np.array([att.mu, unatt.mu])
    scale = np.sqrt([att.sigma_sq, unatt.sigma_sq])

    bw = _block_size(n)
    remaining = n_windows
    for b in range(math.ceil(n_windows / bw)):
        rng = seeding.stream(scn.seed, seeding.SYNTHETIC, n, b)
        z = loc + scale * rng.standard_normal((bw, 2))
        take = min(bw, remaining)
        remaining -= take
        yield np.tanh(z[:take])


def generate_windows(
    scn: SyntheticScenario,
    window_s: float,
    n_windows: int | None = None,
) -> list[WindowTriple]:
    """Non-overlapping signal windows; defaults to floor(duration / window) of them."""
    _check(scn)
    if scn.mode is not GeneratorMode.signal:
        raise OutOfDomain("correlation-level scenarios emit correlation pairs, not signals")
    n = samples_in_window(window_s, scn.fs_hz)
    if n_windows is None:
        if window_s > scn.duration_s:
            raise InvalidWindow(f"window {window_s} s exceeds scenario duration {scn.duration_s} s")
        n_windows = int(scn.duration_s // window_s)

    out: list[WindowTriple] = []
    for block in _signal_blocks(scn, n, n_windows):
        out.extend(WindowTriple(*w) for w in zip(block.x, block.y_att, block.y_unatt))
    return out


def correlation_pairs(scn: SyntheticScenario, window_s: float, n_windows: int) -> np.ndarray:
    """(n_windows, 2) array of (r_att, r_unatt); the first k rows do not depend on n_windows."""
    _check(scn)
    if n_windows < 1:
        raise InvalidWindow(f"need at least one window, got {n_windows}")
    n = samples_in_window(window_s, scn.fs_hz)

    if scn.mode is GeneratorMode.correlation:
        return np.concatenate(list(_fisher_blocks(scn, n, n_windows)))

    chunks = []
    for block in _signal_blocks(scn, n, n_windows):
        chunks.append(
            np.column_stack([pearson_rows(block.x, block.y_att), pearson_rows(block.x, block.y_unatt)])
        )
    return np.concatenate(chunks)


def empirical_accuracy(scn: SyntheticScenario, window_s: float, n_windows: int) -> float:
    """Brute-force accuracy of the max-correlation rule; ties count as errors."""
    if n_windows < 1:
        raise InvalidWindow(f"need at least one window, got {n_windows}")
    pairs = correlation_pairs(scn, window_s, n_windows)
    correct = int(np.count_nonzero(pairs[:, 0] > pairs[:, 1]))
    return 100.0 * correct / n_windows


def windows_in(minutes: float, window_s: float) -> int:
    return int(math.floor(60.0 * minutes / window_s + 1e-9))


def labeled_set(scn: SyntheticScenario, window_s: float, minutes: float) -> LabeledCorrelationSet:
    m = windows_in(minutes, window_s)
    if m < 2:
        raise TooFewSamples(f"{minutes} min of {window_s} s windows gives {m} < 2 pairs")
    return LabeledCorrelationSet(
        pairs=correlation_pairs(scn, window_s, m),
        window_s=window_s,
        fs_hz=scn.fs_hz,
    )


def multi_window_sets(
    scn: SyntheticScenario,
    windows_s: Sequence[float],
    n_windows: int | None = None,
) -> list[LabeledCorrelationSet]:
    """One labeled set per window length; defaults to floor(duration / window) windows each."""
    sets = []
    for w in windows_s:
        count = n_windows if n_windows is not None else int(scn.duration_s // w)
        if count < 1:
            raise InvalidWindow(f"window {w} s exceeds scenario duration {scn.duration_s} s")
        sets.append(
            LabeledCorrelationSet(pairs=correlation_pairs(scn, w, count), window_s=w, fs_hz=scn.fs_hz)
        )
    log.debug(
        "Generated ground-truth pools for windows %s",
        list(windows_s),
        extra={"event": "multi_window_sets"},
    )
    return sets
