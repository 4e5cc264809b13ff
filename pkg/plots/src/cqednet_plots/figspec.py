"""Figure specifications: which CSV columns to draw and how.

A spec is TOML with a ``[figure]`` section (id, axis labels, optional
``log_time`` flag and ``time_scale`` factor), one ``csv`` filename, a
``[series.<column>]`` table per drawn column (style, label, optional
color) and optional ``[band]`` (lower/upper columns drawn as a filled
band).  Rendering is strictly read-only over the CSV.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import tomli


class FigureSpecError(ValueError):
    """Malformed figure specification."""


_STYLES = {"solid": "-", "dashed": "--", "dotted": ":", "dashdot": "-."}


@dataclass
class SeriesStyle:
    column: str
    style: str = "solid"
    label: str | None = None
    color: str | None = None

    @property
    def linestyle(self) -> str:
        return _STYLES[self.style]


@dataclass
class FigureSpec:
    figure_id: str
    csv: str
    series: list[SeriesStyle]
    xlabel: str = "t"
    ylabel: str = ""
    log_time: bool = False
    time_scale: float = 1.0
    band: tuple[str, str] | None = None
    band_label: str | None = None
    path: Path | None = field(default=None, repr=False)


def _check_keys(section: dict, allowed, where: str):
    for key in section:
        if key not in allowed:
            raise FigureSpecError(f"unknown key {where}.{key}")


def load_figure_spec(path) -> FigureSpec:
    path = Path(path)
    if not path.exists():
        raise FigureSpecError(f"figure spec {path} does not exist")
    try:
        with open(path, "rb") as fh:
            raw = tomli.load(fh)
    except tomli.TOMLDecodeError as exc:
        raise FigureSpecError(f"figure spec {path} is not valid TOML: {exc}") from exc

    _check_keys(raw, {"figure", "series", "band"}, "spec")
    if "figure" not in raw:
        raise FigureSpecError(f"{path} is missing the [figure] section")
    fig = raw["figure"]
    _check_keys(
        fig, {"id", "csv", "xlabel", "ylabel", "log_time", "time_scale"}, "figure"
    )
    for key in ("id", "csv"):
        if key not in fig:
            raise FigureSpecError(f"{path} is missing figure.{key}")

    series = []
    for column, opts in raw.get("series", {}).items():
        _check_keys(opts, {"style", "label", "color"}, f"series.{column}")
        style = opts.get("style", "solid")
        if style not in _STYLES:
            raise FigureSpecError(
                f"series.{column}.style must be one of {sorted(_STYLES)}, got {style!r}"
            )
        series.append(
            SeriesStyle(
                column=column,
                style=style,
                label=opts.get("label", column),
                color=opts.get("color"),
            )
        )

    band = None
    band_label = None
    if "band" in raw:
        _check_keys(raw["band"], {"lower", "upper", "label"}, "band")
        try:
            band = (raw["band"]["lower"], raw["band"]["upper"])
        except KeyError as exc:
            raise FigureSpecError(f"{path} band needs lower and upper columns") from exc
        band_label = raw["band"].get("label")

    if not series and band is None:
        raise FigureSpecError(f"{path} draws nothing: no [series.*] and no [band]")

    return FigureSpec(
        figure_id=str(fig["id"]),
        csv=str(fig["csv"]),
        series=series,
        xlabel=str(fig.get("xlabel", "t")),
        ylabel=str(fig.get("ylabel", "")),
        log_time=bool(fig.get("log_time", False)),
        time_scale=float(fig.get("time_scale", 1.0)),
        band=band,
        band_label=band_label,
        path=path,
    )
