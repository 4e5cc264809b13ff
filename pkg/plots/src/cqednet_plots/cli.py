"""Figure regeneration CLI.

    plots render <figure_spec> --out DIR [--data DIR]

``figure_spec`` is a TOML spec path or the name of a bundled spec (one per
bundled scenario).  ``--data`` points at the directory holding the CSV the
spec names (defaults to the spec's own directory).  Exit codes: 0 success,
2 bad spec or schema, 3 missing column.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from .figspec import FigureSpecError, load_figure_spec
from .render import MissingColumnError, SchemaError, render

BUNDLED = (
    "freeze_bd",
    "double_transition",
    "thermal_gain",
    "chain_transmission",
    "werner_eavesdrop",
    "tangle_bounds",
)


def bundled_spec_path(name: str) -> Path:
    name = name.removesuffix(".toml")
    if name not in BUNDLED:
        raise FigureSpecError(f"no bundled figure spec {name!r}; choose from {BUNDLED}")
    return Path(str(resources.files("cqednet_plots").joinpath(f"figures/{name}.toml")))


def resolve_spec(arg: str) -> Path:
    path = Path(arg)
    if path.exists():
        return path
    if "/" not in arg:
        return bundled_spec_path(arg)
    raise FigureSpecError(f"figure spec {arg!r} does not exist")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="plots", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    p_render = sub.add_parser("render", help="render one figure spec to SVG and PNG")
    p_render.add_argument("figure_spec", help="spec path or bundled spec name")
    p_render.add_argument("--out", required=True, help="output directory")
    p_render.add_argument("--data", default=None, help="directory holding the CSV input")

    args = parser.parse_args(argv)
    try:
        spec = load_figure_spec(resolve_spec(args.figure_spec))
        written = render(spec, args.out, data_dir=args.data)
    except (FigureSpecError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MissingColumnError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 3
    for path in written:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
