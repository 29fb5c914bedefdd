"""Command-line entry point: load a JSON config, run sweeps, write CSV.

Subcommands
-----------
sweep-n / sweep-t / sweep-snr
    Run one sweep family and write per-point gap statistics.
theorem1
    Empirically check the implicit-model-error tail bound.
demo
    A miniature built-in dataset-size sweep as a smoke test.

All randomness derives from the config's master_seed; reruns of the same
invocation produce byte-identical CSV files regardless of --threads.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import fields

from .experiments import (
    BoundCheckResult,
    ExperimentConfig,
    SweepResult,
    sweep,
    verify_error_bound,
)

SWEEP_CSV_HEADER = (
    "sweep_name,sweep_value,method,L,T,N,snr,mean_gap,ci_low,ci_high,trial_count,master_seed"
)
BOUND_CSV_HEADER = "N,eps,empirical_freq,bound,excluded_trials,trial_count,master_seed"

_CONFIG_KEYS = {f.name for f in fields(ExperimentConfig)}


class ConfigError(ValueError):
    """A config file or override that cannot be turned into an ExperimentConfig."""


def _required_keys():
    from dataclasses import MISSING

    return {
        f.name
        for f in fields(ExperimentConfig)
        if f.default is MISSING and f.default_factory is MISSING
    }


def parse_config(path: str, overrides=()) -> ExperimentConfig:
    """Load and validate a flat-JSON experiment config.

    Unknown keys, missing required keys, and invalid field values all raise
    ConfigError naming the offending key. Overrides are `key=value` strings
    whose values are parsed as JSON fragments (falling back to raw strings).
    """
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path!r} must hold a JSON object")

    for item in overrides:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"override {item!r} must have the form key=value")
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"unknown config key in override: {key!r}")
        try:
            raw[key] = json.loads(value)
        except json.JSONDecodeError:
            raw[key] = value

    unknown = sorted(set(raw) - _CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown config key: {unknown[0]!r}")
    missing = sorted(_required_keys() - set(raw))
    if missing:
        raise ConfigError(f"missing config key: {missing[0]!r}")
    try:
        return ExperimentConfig(**raw)
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc


def _fmt(value) -> str:
    """CSV cell formatting: ints verbatim, reals at 16 significant digits, None empty."""
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.15e}"
    return str(value)


def sweep_csv_lines(result: SweepResult):
    yield SWEEP_CSV_HEADER
    for r in result.rows:
        cells = [
            r.sweep_name,
            _fmt(r.sweep_value),
            r.method,
            "" if r.L is None else str(r.L),
            str(r.T),
            str(r.N),
            _fmt(float(r.snr)),
            _fmt(float(r.mean_gap)),
            _fmt(float(r.ci_low)),
            _fmt(float(r.ci_high)),
            str(r.trial_count),
            str(r.master_seed),
        ]
        yield ",".join(cells)


def bound_csv_lines(result: BoundCheckResult):
    yield BOUND_CSV_HEADER
    for r in result.rows:
        yield ",".join(
            [
                str(r.N),
                _fmt(float(r.eps)),
                _fmt(float(r.empirical_freq)),
                _fmt(float(r.bound)),
                str(r.excluded_trials),
                str(r.trial_count),
                str(r.master_seed),
            ]
        )


def write_csv_atomic(lines, out_path: str):
    """Write via a temp file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(out_path))
    fd, tmp_path = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            for line in lines:
                fh.write(line + "\n")
        os.replace(tmp_path, out_path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def _print_sweep_summary(result: SweepResult):
    seen = []
    for r in result.rows:
        key = (r.sweep_value, r.T, r.N)
        if key not in seen:
            seen.append(key)
    for key in seen:
        parts = []
        for r in result.rows:
            if (r.sweep_value, r.T, r.N) != key:
                continue
            label = r.method if r.L is None else f"{r.method}[L={r.L}]"
            parts.append(f"{label}={r.mean_gap:.6e}")
        value, T, N = key
        print(f"[{result.family}-sweep] value={value} T={T} N={N}  " + "  ".join(parts))


def _demo_config() -> ExperimentConfig:
    return ExperimentConfig(
        n=3,
        T=5,
        L_values=(2, 4),
        N_grid=(20, 50, 100, 200),
        trials=8,
        sigma_u=1.0,
        omega_scalar=math.sqrt(0.75),
        q_weight=1.0,
        r_weight=1.0,
        y_ref=1.0,
        master_seed=7,
    )


def _add_common(parser):
    parser.add_argument("--config", required=True, help="JSON experiment config")
    parser.add_argument("--out", required=True, help="output CSV path")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a config key (repeatable)",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=1,
        help="worker threads for trials; 0 = one per CPU",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ddpc",
        description="Benchmark direct vs indirect data-driven predictive control.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, family in (("sweep-n", "N"), ("sweep-t", "T"), ("sweep-snr", "SNR")):
        p = sub.add_parser(name, help=f"{family} sweep of the mean suboptimality gap")
        _add_common(p)
        p.set_defaults(family=family)
    p = sub.add_parser("theorem1", help="implicit-model-error tail bound check")
    _add_common(p)
    p = sub.add_parser("demo", help="small built-in smoke sweep")
    p.add_argument("--out", default="demo_sweep.csv", help="output CSV path")
    p.add_argument("--threads", type=int, default=1)
    return parser


def run(args) -> int:
    if args.command == "demo":
        config = _demo_config()
        result = sweep(config, "N", threads=args.threads)
        write_csv_atomic(sweep_csv_lines(result), args.out)
        _print_sweep_summary(result)
        print(f"wrote {args.out}")
        return 0

    config = parse_config(args.config, args.overrides)
    if args.command == "theorem1":
        result = verify_error_bound(config, threads=args.threads)
        write_csv_atomic(bound_csv_lines(result), args.out)
        for N, z in result.max_abs_mean_z.items():
            print(
                f"[bound-check] N={N}  mean ||Delta||_F={result.mean_delta_frobenius[N]:.6e}"
                f"  max entrywise |mean|/SE={z:.3f}"
            )
        print(f"wrote {args.out}")
        return 0

    result = sweep(config, args.family, threads=args.threads)
    write_csv_atomic(sweep_csv_lines(result), args.out)
    _print_sweep_summary(result)
    print(f"wrote {args.out}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
