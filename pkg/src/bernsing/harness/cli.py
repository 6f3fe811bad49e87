"""Command-line front end.

Subcommands: lemmas | direct | inverse | rates | dump-operator.
Exit codes: 0 when everything passed, 1 when any check failed,
2 on usage or configuration errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from ..exceptions import Degenerate, InvalidDegree, MissingExponent
from ..weights import StepWeight, WeightParams
from .checks import direct_check, error_decay, inverse_check, lemma_suite, operator_dump
from .config import ExperimentConfig
from .rates import (
    lemma_results_to_csv,
    lemma_results_to_json,
    report_to_csv,
    report_to_json,
)

__all__ = ["run_cli", "main"]


class UsageError(Exception):
    pass


def _parse_n(spec: str) -> tuple[int, ...]:
    """'64:4096' -> powers-of-two sweep; a single integer is allowed."""
    try:
        if ":" in spec:
            lo_s, hi_s = spec.split(":", 1)
            lo, hi = int(lo_s), int(hi_s)
        else:
            lo = hi = int(spec)
    except ValueError as e:
        raise UsageError(f"cannot parse --n {spec!r}: {e}") from None
    if lo < 1 or hi < lo:
        raise UsageError(f"--n range must satisfy 1 <= min <= max, got {spec!r}")
    if lo & (lo - 1) or hi & (hi - 1):
        raise UsageError(f"--n endpoints must be powers of two, got {spec!r}")
    vals = []
    n = lo
    while n <= hi:
        vals.append(n)
        n *= 2
    return tuple(vals)


def _parse_t(spec: str) -> tuple[float, ...]:
    """'min:max' -> doubling ladder from min up to max; single value ok."""
    try:
        if ":" in spec:
            lo_s, hi_s = spec.split(":", 1)
            lo, hi = float(lo_s), float(hi_s)
        else:
            lo = hi = float(spec)
    except ValueError as e:
        raise UsageError(f"cannot parse --t {spec!r}: {e}") from None
    if not 0.0 < lo <= hi or hi > 0.25:
        raise UsageError(f"--t range must satisfy 0 < min <= max <= 0.25, got {spec!r}")
    vals = []
    t = lo
    while t <= hi * (1.0 + 1e-12):
        vals.append(min(t, hi))
        t *= 2.0
    return tuple(vals)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bernsing",
        description="Verification experiments for Bernstein-type approximation "
        "around an interior singularity.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, blurb in (
        ("lemmas", "run all bounded-constant and decay checks"),
        ("direct", "Jackson-type error/modulus ratio sweep"),
        ("inverse", "exponent recovery for a function of known smoothness"),
        ("rates", "raw weighted-error decay table with a log-log fit"),
        ("dump-operator", "knots and spliced samples of the largest degree"),
    ):
        p = sub.add_parser(name, help=blurb)
        p.add_argument("--xi", type=float, help="singularity location in (0,1)")
        p.add_argument("--alpha", type=float, help="weight exponent, > 0")
        p.add_argument("--beta0", type=float, default=0.5, help="step-weight exponent at 0")
        p.add_argument("--beta1", type=float, default=0.5, help="step-weight exponent at 1")
        p.add_argument("--function", default="inner-root", help="corpus function name")
        p.add_argument("--alpha0", type=float, default=None,
                       help="nominal exponent for inner-cusp")
        p.add_argument("--n", default="64:1024", help="powers-of-two degree sweep min:max")
        p.add_argument("--t", default="0.001953125:0.125",
                       help="geometric scale sweep min:max (doubling)")
        p.add_argument("--grid", type=int, default=4097, help="uniform grid density")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--format", default="csv", choices=("csv", "json"))
        p.add_argument("--config", default=None,
                       help="JSON file whose entries override the flags")
    return parser


_CONFIG_KEYS = ("xi", "alpha", "beta0", "beta1", "function", "alpha0",
                "n", "t", "grid", "out", "format")


def _merge_config(args: argparse.Namespace) -> dict:
    merged = {k: getattr(args, k) for k in _CONFIG_KEYS}
    if args.config is not None:
        try:
            with open(args.config, encoding="utf-8") as fh:
                overrides = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"cannot read --config {args.config!r}: {e}") from None
        unknown = set(overrides) - set(_CONFIG_KEYS)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        merged.update(overrides)
    return merged


def _experiment_config(merged: dict) -> ExperimentConfig:
    if merged["xi"] is None:
        raise UsageError("--xi is required (flag or config file)")
    if merged["alpha"] is None:
        raise UsageError("--alpha is required (flag or config file)")
    n_spec = merged["n"]
    t_spec = merged["t"]
    n_values = _parse_n(str(n_spec)) if not isinstance(n_spec, (list, tuple)) else tuple(
        int(v) for v in n_spec
    )
    t_values = _parse_t(str(t_spec)) if not isinstance(t_spec, (list, tuple)) else tuple(
        float(v) for v in t_spec
    )
    try:
        return ExperimentConfig(
            params=WeightParams(xi=float(merged["xi"]), alpha=float(merged["alpha"])),
            sw=StepWeight(beta0=float(merged["beta0"]), beta1=float(merged["beta1"])),
            function_name=str(merged["function"]),
            n_values=n_values,
            t_values=t_values,
            grid_density=int(merged["grid"]),
            alpha0=None if merged["alpha0"] is None else float(merged["alpha0"]),
            out=merged["out"],
            fmt=str(merged["format"]),
        )
    except (ValueError, InvalidDegree) as e:
        raise UsageError(str(e)) from None


def _dump_to_csv(dump: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "t", "fbar_sample"])
    n = dump["n"]
    for k, s in enumerate(dump["samples"]):
        w.writerow([k, format(k / n, ".17g"), format(s, ".17g")])
    return buf.getvalue()


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def run_cli(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as e:
        return int(e.code or 0)
    try:
        cfg = _experiment_config(_merge_config(args))
    except UsageError as e:
        sys.stderr.write(f"error: {e}\n")
        parser.print_usage(sys.stderr)
        return 2

    try:
        if args.command == "lemmas":
            results = lemma_suite(cfg)
            text = lemma_results_to_csv(results) if cfg.fmt == "csv" else lemma_results_to_json(results)
            _write(text, cfg.out)
            return 0 if all(r.verdict != "fail" for r in results.values()) else 1
        if args.command == "direct":
            report = direct_check(cfg)
        elif args.command == "inverse":
            report = inverse_check(cfg)
        elif args.command == "rates":
            report = error_decay(cfg)
        else:  # dump-operator
            dump = operator_dump(cfg)
            text = _dump_to_csv(dump) if cfg.fmt == "csv" else json.dumps(
                dump, sort_keys=True, indent=2
            ) + "\n"
            _write(text, cfg.out)
            return 0
    except (MissingExponent, ValueError) as e:
        if isinstance(e, Degenerate):
            sys.stderr.write(f"check failed: {e}\n")
            return 1
        sys.stderr.write(f"error: {e}\n")
        return 2

    text = report_to_csv(report) if cfg.fmt == "csv" else report_to_json(report)
    _write(text, cfg.out)
    return 0 if report.verdict == "pass" else 1


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
