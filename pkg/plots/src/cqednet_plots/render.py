"""Render figure specs from versioned CSV series files.

Only schema ``cqednet-csv v1`` files are accepted; a file with any other
first line is rejected by name.  Rendering never recomputes physics, it
draws exactly the columns the spec names.  Output is one SVG and one PNG
per spec, deterministic for identical inputs.
"""

from __future__ import annotations

import warnings
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .figspec import FigureSpec

CSV_MAGIC = "# cqednet-csv v1"

matplotlib.rcParams["svg.hashsalt"] = "cqednet-plots"


class SchemaError(ValueError):
    """CSV file is not a cqednet-csv v1 series."""


class MissingColumnError(KeyError):
    """Spec references a column the CSV header does not carry."""


def read_series_csv(path) -> dict[str, np.ndarray]:
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"CSV file {path} does not exist")
    lines = path.read_text().splitlines()
    if not lines or lines[0].strip() != CSV_MAGIC:
        found = lines[0].strip() if lines else "<empty file>"
        raise SchemaError(
            f"{path} is not schema '{CSV_MAGIC}' (first line: {found!r})"
        )
    body = [line for line in lines[1:] if not line.startswith("#")]
    if not body:
        raise SchemaError(f"{path} carries no header row")
    header = body[0].split(",")
    rows = []
    for line in body[1:]:
        rows.append([float(x) if x else np.nan for x in line.split(",")])
    if not rows:
        raise SchemaError(f"{path} carries no data rows")
    data = np.array(rows)
    return {name: data[:, i] for i, name in enumerate(header)}


def _column(columns: dict, name: str, csv_path) -> np.ndarray:
    if name not in columns:
        raise MissingColumnError(
            f"column {name!r} not in {csv_path} (has {sorted(columns)})"
        )
    return columns[name]


def render(spec: FigureSpec, out_dir, data_dir=None) -> list[Path]:
    """Draw one spec; returns the written SVG and PNG paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    base = spec.path.parent if spec.path is not None else Path(".")
    csv_path = Path(data_dir) / spec.csv if data_dir is not None else base / spec.csv
    columns = read_series_csv(csv_path)

    t = _column(columns, "t", csv_path) * spec.time_scale
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    drew_anything = False
    for item in spec.series:
        values = _column(columns, item.column, csv_path)
        if np.all(np.isnan(values)):
            warnings.warn(f"series {item.column!r} in {csv_path} is empty; skipped",
                          stacklevel=2)
            continue
        ax.plot(t, values, linestyle=item.linestyle, color=item.color, label=item.label)
        drew_anything = True
    if spec.band is not None:
        lower = _column(columns, spec.band[0], csv_path)
        upper = _column(columns, spec.band[1], csv_path)
        ax.fill_between(t, lower, upper, alpha=0.3, label=spec.band_label)
        ax.plot(t, lower, linestyle=":", linewidth=0.9)
        ax.plot(t, upper, linestyle="-", linewidth=0.9)
        drew_anything = True
    if not drew_anything:
        plt.close(fig)
        raise MissingColumnError(f"nothing to draw for {spec.figure_id}: all series empty")

    if spec.log_time:
        positive = t > 0
        if positive.any():
            ax.set_xlim(t[positive].min(), t.max())
        ax.set_xscale("log")
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(spec.ylabel)
    if any(s.label for s in spec.series) or spec.band_label:
        ax.legend(loc="best")
    ax.set_title(spec.figure_id)
    fig.tight_layout()

    written = []
    for ext in ("svg", "png"):
        target = out_dir / f"{spec.figure_id}.{ext}"
        fig.savefig(target, format=ext, dpi=150, metadata={"Date": None} if ext == "svg" else None)
        written.append(target)
    plt.close(fig)
    return written
