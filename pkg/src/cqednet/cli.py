"""Command-line scenario runner.

    cqednet run <config> [--out DIR] [--samples N]
    cqednet sweep <config> --axis NAME --values v1,v2,... [--out DIR]
    cqednet selftest [--seed N]

Configs are TOML files; the bundled scenarios can be named directly
(e.g. ``cqednet run freeze_bd``).  Exit codes: 0 success, 2 validation
error, 3 numerical-contract violation.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from . import engines, selftest
from .errors import CQEDNetError, ValidationError

BUNDLED = (
    "freeze_bd",
    "double_transition",
    "thermal_gain",
    "chain_transmission",
    "werner_eavesdrop",
    "tangle_bounds",
)


def bundled_scenario_path(name: str) -> Path:
    name = name.removesuffix(".toml")
    if name not in BUNDLED:
        raise ValidationError(f"no bundled scenario {name!r}; choose from {BUNDLED}")
    return Path(str(resources.files("cqednet").joinpath(f"scenarios/{name}.toml")))


def resolve_config(arg: str) -> Path:
    path = Path(arg)
    if path.exists():
        return path
    if "/" not in arg:
        return bundled_scenario_path(arg)
    raise ValidationError(f"config file {arg!r} does not exist")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="cqednet", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario")
    p_run.add_argument("config", help="config path or bundled scenario name")
    p_run.add_argument("--out", default=None, help="output directory")
    p_run.add_argument("--samples", type=int, default=None, help="override n_samples")

    p_sweep = sub.add_parser("sweep", help="run a scenario over an axis of values")
    p_sweep.add_argument("config", help="config path or bundled scenario name")
    p_sweep.add_argument("--axis", required=True, help="dotted parameter path, e.g. params.J")
    p_sweep.add_argument("--values", required=True, help="comma-separated numbers")
    p_sweep.add_argument("--out", default=None, help="output directory")

    p_self = sub.add_parser("selftest", help="run the invariant suites")
    p_self.add_argument("--seed", type=int, default=0)

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            config_path = resolve_config(args.config)
            config = engines.load_config(config_path)
            out = Path(args.out) if args.out else Path(config_path.stem + "_out")
            summary = engines.run_scenario(config, out, samples_override=args.samples)
            for line in summary.lines():
                print(line)
            print(f"wrote {out / 'series.csv'} and {out / 'summary.txt'}")
            return 0
        if args.command == "sweep":
            config_path = resolve_config(args.config)
            config = engines.load_config(config_path)
            try:
                values = [float(v) for v in args.values.split(",") if v.strip() != ""]
            except ValueError as exc:
                raise ValidationError(f"--values must be numbers: {args.values!r}") from exc
            out = Path(args.out) if args.out else Path(config_path.stem + "_sweep")
            summaries = engines.run_sweep(config, args.axis, values, out)
            for value, summary in zip(values, summaries):
                changes = {k: len(v) for k, v in summary.sudden_changes.items()}
                print(f"{args.axis}={value:g}: changes={changes} metrics={summary.metrics}")
            print(f"wrote {out / 'sweep.csv'}")
            return 0
        if args.command == "selftest":
            return selftest.run(seed=args.seed)
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2
    except CQEDNetError as exc:
        print(f"numerical contract violation: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
