"""Command-line entry point: ``mobfemto sweep|trace|validate``.

Exit status is 0 on success, 1 when a config, override or trace is
invalid, and 2 when a file cannot be read or written.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from . import configio
from .scenario import ConfigError, ScenarioConfig, default_config, validate
from .simengine import SweepResult, TraceResult, run_sweep, run_trace

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2

SWEEP_COLUMNS = [
    "distance_m",
    "snir_db_direct",
    "snir_db_femto_access",
    "snir_db_backhaul",
    "ce_bpshz_direct",
    "ce_bpshz_relayed",
    "outage_direct",
    "outage_relayed",
]
TRACE_COLUMNS = ["time_s", "backhaul", "snir_db", "ce_bpshz", "outage"]


class CLIError(Exception):
    def __init__(self, status: int, messages):
        self.status = status
        self.messages = [messages] if isinstance(messages, str) else list(messages)
        super().__init__("; ".join(self.messages))


def fmt(x: float) -> str:
    return format(float(x), ".6g")


def sweep_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    columns = [getattr(result, name) for name in SWEEP_COLUMNS]
    for row in zip(*columns):
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def trace_csv(result: TraceResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    for r in result.records:
        w.writerow([fmt(r.time_s), r.decision.choice, fmt(r.snir_db), fmt(r.ce_bpshz), fmt(r.outage)])
    buf.write(f"# switches={result.switches}\n")
    return buf.getvalue()


def _load(args) -> ScenarioConfig:
    if args.config is None:
        config = default_config()
    else:
        try:
            config = configio.load_config(args.config)
        except OSError as exc:
            raise CLIError(EXIT_IO, f"cannot read config {args.config}: {exc.strerror or exc}") from None
        except ConfigError as exc:
            raise CLIError(EXIT_INVALID, exc.violations) from None
    try:
        config = configio.apply_overrides(config, getattr(args, "set", None) or [])
        if getattr(args, "seed", None) is not None:
            config = configio.apply_overrides(config, [f"seed={args.seed}"])
    except ConfigError as exc:
        raise CLIError(EXIT_INVALID, exc.violations) from None
    problems = validate(config)
    if problems:
        raise CLIError(EXIT_INVALID, problems)
    return config


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        configio.atomic_write(out, text)
    except OSError as exc:
        raise CLIError(EXIT_IO, f"cannot write {out}: {exc.strerror or exc}") from None


def cmd_sweep(args) -> int:
    config = _load(args)
    if args.plot and args.out is None:
        raise CLIError(EXIT_INVALID, "--plot requires --out")
    if args.workers < 1:
        raise CLIError(EXIT_INVALID, "--workers must be >= 1")
    try:
        result = run_sweep(config, workers=args.workers)
    except ConfigError as exc:
        raise CLIError(EXIT_INVALID, exc.violations) from None
    _emit(sweep_csv(result), args.out)
    if args.plot:
        from .plots import write_sweep_plots

        try:
            for path in write_sweep_plots(result, Path(args.out)):
                print(f"wrote {path}", file=sys.stderr)
        except OSError as exc:
            raise CLIError(EXIT_IO, f"cannot write plots: {exc}") from None
    return EXIT_OK


def cmd_trace(args) -> int:
    config = _load(args)
    try:
        trace = configio.load_trace(args.trace)
    except OSError as exc:
        raise CLIError(EXIT_IO, f"cannot read trace {args.trace}: {exc.strerror or exc}") from None
    except configio.TraceFormatError as exc:
        raise CLIError(EXIT_INVALID, f"{args.trace}: {exc}") from None
    try:
        result = run_trace(config, trace)
    except ConfigError as exc:
        raise CLIError(EXIT_INVALID, exc.violations) from None
    _emit(trace_csv(result), args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    _load(args)
    print("ok")
    return EXIT_OK


def cmd_show_config(args) -> int:
    _emit(configio.dump_config(_load(args)), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mobfemto", description="Mobile femtocell link simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, overrides=True):
        p.add_argument("--config", help="JSON scenario file (defaults to the built-in scenario)")
        if overrides:
            p.add_argument("--set", action="append", metavar="KEY=VALUE", default=[],
                           help="override one config field; repeatable")
            p.add_argument("--seed", type=int, help="override the RNG seed")

    p = sub.add_parser("sweep", help="distance sweep, direct vs relayed")
    common(p)
    p.add_argument("--out", help="CSV output path (stdout if omitted)")
    p.add_argument("--plot", action="store_true", help="also write SNIR/efficiency/outage SVG plots")
    p.add_argument("--workers", type=int, default=1, help="threads used across distance points")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("trace", help="replay a mobility trace through the backhaul policy")
    common(p)
    p.add_argument("--trace", required=True, help="trace CSV")
    p.add_argument("--out", help="CSV output path (stdout if omitted)")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("validate", help="check a scenario file")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("show-config", help="print the effective scenario as JSON")
    common(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_show_config)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CLIError as exc:
        for msg in exc.messages:
            print(f"error: {msg}", file=sys.stderr)
        return exc.status


if __name__ == "__main__":
    sys.exit(main())
