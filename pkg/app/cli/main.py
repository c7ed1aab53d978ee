from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from pydantic import ValidationError

from app.core.errors import AADError, ParseError
from app.core.logger import setup_logging
from app.pipeline import run_evaluate, run_plot, run_predict, run_simulate
from app.schemas import Aggregate, GeneratorMode, RunConfig, Subcommand

log = logging.getLogger("app.cli")

EXIT_INPUT = 2


def parse_windows(text: str) -> tuple[float, ...]:
    """``"60,30,20"`` -> ``(60.0, 30.0, 20.0)``."""
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"not a comma list of seconds: {text!r}") from e


def parse_paths(text: str) -> tuple[Path, ...]:
    return tuple(Path(t.strip()) for t in text.split(",") if t.strip())


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", type=Path, required=True, help="output path")
    p.add_argument("--window-s", dest="window_s", type=float, help="decision window length [s]")
    p.add_argument("--fs", dest="fs_hz", type=float, help="sampling rate [Hz]")
    p.add_argument("--seed", type=int, help="RNG seed (unsigned 64-bit)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aad-curve",
        description="Model the AAD accuracy vs decision-window-length curve from one window length.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("predict", help="labeled correlations CSV -> curve CSV + JSON report")
    p.add_argument("input", type=Path)
    _common(p)
    p.add_argument("--targets", type=parse_windows, help="target windows, e.g. 60,30,20,10,5,1")
    p.add_argument("--n-boot", dest="n_boot", type=int)
    p.add_argument("--ci", dest="ci_level", type=float, help="confidence level, e.g. 0.95")

    p = sub.add_parser("simulate", help="synthetic labeled correlations with known ground truth")
    _common(p)
    p.add_argument("--rho-att", dest="rho_att", type=float, required=True)
    p.add_argument("--rho-unatt", dest="rho_unatt", type=float, required=True)
    p.add_argument("--minutes", type=float, required=True)
    p.add_argument("--mode", choices=[m.value for m in GeneratorMode], default=GeneratorMode.signal.value)
    p.add_argument(
        "--truth-windows",
        dest="truth_windows",
        type=parse_windows,
        help="also write one ground-truth CSV per window length",
    )
    p.add_argument("--truth-minutes", dest="truth_minutes", type=float)

    p = sub.add_parser("evaluate", help="prediction curve(s) vs ground truth -> evaluation JSON")
    p.add_argument("inputs", type=Path, nargs="+", help="prediction curve CSV(s)")
    _common(p)
    p.add_argument(
        "--truth",
        type=parse_paths,
        action="append",
        required=True,
        help="comma list of ground-truth correlation CSVs (one per window); repeat per set",
    )
    p.add_argument(
        "--aggregate", choices=[a.value for a in Aggregate], default=Aggregate.per_set.value
    )

    p = sub.add_parser("plot", help="curve CSV -> SVG")
    p.add_argument("input", type=Path)
    _common(p)
    p.add_argument("--truth", type=parse_paths, action="append", help="ground-truth correlation CSVs")
    p.add_argument("--log-x", dest="log_x", action="store_true")

    return parser


def to_run_config(args: argparse.Namespace) -> RunConfig:
    values = {k: v for k, v in vars(args).items() if v is not None}
    if "input" in values:
        values["inputs"] = (values.pop("input"),)
    return RunConfig(**values)


_HANDLERS = {
    Subcommand.predict: run_predict,
    Subcommand.simulate: run_simulate,
    Subcommand.evaluate: run_evaluate,
    Subcommand.plot: run_plot,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging()

    try:
        cfg = to_run_config(args)
    except ValidationError as e:
        err = e.errors()[0]
        field = ".".join(str(x) for x in err["loc"])
        print(f"❌ invalid --{field.replace('_', '-')}: {err['msg']}", file=sys.stderr)
        return EXIT_INPUT

    try:
        _HANDLERS[cfg.subcommand](cfg)
    except AADError as e:
        log.error(str(e), extra={"event": "cli_error", "exit_code": e.exit_code})
        print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    except ValidationError as e:
        err = ParseError(e.errors()[0]["msg"])
        log.error(str(err), extra={"event": "cli_error", "exit_code": err.exit_code})
        print(f"❌ {type(err).__name__}: {err}", file=sys.stderr)
        return err.exit_code

    print(f"✅ {cfg.subcommand.value} -> {cfg.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
