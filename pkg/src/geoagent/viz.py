"""Deterministic visual artifacts: SVG plots and self-contained HTML maps.

Artifacts are plain text written atomically, so identical inputs produce
byte-identical files and golden tests can diff them. No basemap tiles are
embedded; coordinates render on a blank canvas with axis ticks.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from xml.sax.saxutils import escape

PLOT_KINDS = ("line", "bar")
MAP_KINDS = ("points", "heatmap")

WIDTH, HEIGHT = 640, 400
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 62, 20, 40, 52
PLOT_W = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
PLOT_H = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

DEFAULT_GRID = 64
POINTS_THRESHOLD = 200  # above this row count, spatial results default to heatmap

_SERIES_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
_HEAT_COLOR = "#c0392b"


class VizError(ValueError):
    pass


@dataclass
class VisualizationSpec:
    kind: str
    x: str | None = None
    y: str | None = None
    series: str | None = None
    lat: str | None = None
    lon: str | None = None
    title: str = ""
    grid: int = DEFAULT_GRID


@dataclass
class RenderResult:
    path: str
    kind: str
    meta: dict = field(default_factory=dict)


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name("." + path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _column_index(columns: list[str], name: str | None, fallbacks: tuple[str, ...] = ()) -> int:
    lowered = [c.lower() for c in columns]
    if name is not None:
        if name.lower() in lowered:
            return lowered.index(name.lower())
        raise VizError(f"column '{name}' not in result columns {columns}")
    for fb in fallbacks:
        if fb in lowered:
            return lowered.index(fb)
    raise VizError(f"none of {fallbacks} found in result columns {columns}")


def _as_float(value, what: str) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise VizError(f"non-numeric {what} value: {value!r}") from None


# -- plots ---------------------------------------------------------------------


def render_plot(spec: VisualizationSpec, columns: list[str], rows: list[list], out_path: str | Path) -> RenderResult:
    """Line or bar chart; one path per series for lines, one rect per row for bars."""
    if spec.kind not in PLOT_KINDS:
        raise VizError(f"render_plot cannot draw kind '{spec.kind}'")
    if not rows:
        raise VizError("no rows to plot")

    xi = _column_index(columns, spec.x) if spec.x is not None else 0
    si = _column_index(columns, spec.series) if spec.series is not None else None
    if spec.y is not None:
        yi = _column_index(columns, spec.y)
    else:
        free = [i for i in range(len(columns)) if i != xi and i != si]
        if not free:
            raise VizError("no y column available")
        yi = free[0]
    if yi == xi:
        raise VizError("x and y must be different columns")

    x_labels: list[str] = []
    seen = set()
    for row in rows:
        label = str(row[xi])
        if label not in seen:
            seen.add(label)
            x_labels.append(label)
    slots = {label: i for i, label in enumerate(x_labels)}
    n = len(x_labels)

    y_values = [_as_float(row[yi], "y") for row in rows]
    lo = min(0.0, min(y_values))
    hi = max(y_values)
    if hi == lo:
        hi = lo + 1.0

    def sx(label: str) -> float:
        return MARGIN_LEFT + (slots[label] + 0.5) * PLOT_W / n

    def sy(v: float) -> float:
        return MARGIN_TOP + (hi - v) * PLOT_H / (hi - lo)

    body: list[str] = []
    element_count = 0
    if spec.kind == "bar":
        bar_w = 0.8 * PLOT_W / n
        for row, v in zip(rows, y_values):
            x = sx(str(row[xi])) - bar_w / 2
            y = sy(v)
            h = MARGIN_TOP + PLOT_H - y
            body.append(
                f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(bar_w)}" '
                f'height="{_fmt(h)}" fill="{_SERIES_COLORS[0]}" />'
            )
            element_count += 1
    else:
        groups: dict[str, list[tuple[str, float]]] = {}
        for row, v in zip(rows, y_values):
            key = str(row[si]) if si is not None else ""
            groups.setdefault(key, []).append((str(row[xi]), v))
        for gi, (key, points) in enumerate(groups.items()):
            d = " ".join(
                f"{'M' if i == 0 else 'L'} {_fmt(sx(label))} {_fmt(sy(v))}"
                for i, (label, v) in enumerate(points)
            )
            color = _SERIES_COLORS[gi % len(_SERIES_COLORS)]
            body.append(f'<path d="{d}" fill="none" stroke="{color}" stroke-width="2" />')
            element_count += 1
            if key:
                body.append(
                    f'<text x="{_fmt(WIDTH - MARGIN_RIGHT - 8)}" y="{_fmt(MARGIN_TOP + 14 + 14 * gi)}" '
                    f'text-anchor="end" font-size="11" fill="{color}">{escape(key)}</text>'
                )

    axes = _plot_axes(columns[xi], columns[yi], x_labels, lo, hi, sx)
    svg = _svg_document(spec.title, body, axes)
    out_path = Path(out_path)
    _atomic_write(out_path, svg)
    return RenderResult(
        path=str(out_path),
        kind=spec.kind,
        meta={"elements": element_count, "x_ticks": n, "rows": len(rows)},
    )


def _plot_axes(x_name, y_name, x_labels, lo, hi, sx) -> list[str]:
    parts = [
        f'<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP + PLOT_H}" x2="{MARGIN_LEFT + PLOT_W}" '
        f'y2="{MARGIN_TOP + PLOT_H}" stroke="#333" />',
        f'<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP}" x2="{MARGIN_LEFT}" '
        f'y2="{MARGIN_TOP + PLOT_H}" stroke="#333" />',
    ]
    base = MARGIN_TOP + PLOT_H
    for label in x_labels:
        x = sx(label)
        parts.append(f'<line x1="{_fmt(x)}" y1="{base}" x2="{_fmt(x)}" y2="{base + 4}" stroke="#333" class="x-tick" />')
        parts.append(
            f'<text x="{_fmt(x)}" y="{base + 16}" text-anchor="middle" font-size="9">{escape(_short(label))}</text>'
        )
    for k in range(5):
        v = lo + (hi - lo) * k / 4
        y = MARGIN_TOP + PLOT_H - PLOT_H * k / 4
        parts.append(f'<line x1="{MARGIN_LEFT - 4}" y1="{_fmt(y)}" x2="{MARGIN_LEFT}" y2="{_fmt(y)}" stroke="#333" />')
        parts.append(
            f'<text x="{MARGIN_LEFT - 7}" y="{_fmt(y + 3)}" text-anchor="end" font-size="9">{escape(_short(_fmt(v)))}</text>'
        )
    parts.append(
        f'<text x="{MARGIN_LEFT + PLOT_W / 2}" y="{HEIGHT - 8}" text-anchor="middle" font-size="11">{escape(str(x_name))}</text>'
    )
    parts.append(
        f'<text x="14" y="{MARGIN_TOP + PLOT_H / 2}" text-anchor="middle" font-size="11" '
        f'transform="rotate(-90 14 {MARGIN_TOP + PLOT_H / 2})">{escape(str(y_name))}</text>'
    )
    return parts


def _short(label: str, limit: int = 14) -> str:
    return label if len(label) <= limit else label[: limit - 1] + "…"


def _svg_document(title: str, body: list[str], axes: list[str]) -> str:
    head = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff" />',
        f'<text x="{WIDTH / 2}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
    ]
    return "\n".join(head + axes + body + ["</svg>"]) + "\n"


# -- maps -----------------------------------------------------------------------


def render_map(spec: VisualizationSpec, columns: list[str], rows: list[list], out_path: str | Path) -> RenderResult:
    """Point map or binned density heatmap as a self-contained HTML document."""
    if spec.kind not in MAP_KINDS:
        raise VizError(f"render_map cannot draw kind '{spec.kind}'")
    if not rows:
        raise VizError("no rows to map")

    lat_i = _column_index(columns, spec.lat, ("latitude", "lat"))
    lon_i = _column_index(columns, spec.lon, ("longitude", "lon"))

    accepted: list[tuple[float, float]] = []
    skipped = 0
    for row in rows:
        try:
            lat = float(row[lat_i])
            lon = float(row[lon_i])
        except (TypeError, ValueError):
            skipped += 1
            continue
        if not (-90 <= lat <= 90 and -180 <= lon <= 180):
            skipped += 1
            continue
        accepted.append((lat, lon))
    if not accepted:
        raise VizError("no plottable coordinates after skipping invalid rows")

    lat_min = min(p[0] for p in accepted)
    lat_max = max(p[0] for p in accepted)
    lon_min = min(p[1] for p in accepted)
    lon_max = max(p[1] for p in accepted)
    if lat_max == lat_min:
        lat_min -= 0.0005
        lat_max += 0.0005
    if lon_max == lon_min:
        lon_min -= 0.0005
        lon_max += 0.0005

    def px(lon: float) -> float:
        return MARGIN_LEFT + (lon - lon_min) / (lon_max - lon_min) * PLOT_W

    def py(lat: float) -> float:
        return MARGIN_TOP + (lat_max - lat) / (lat_max - lat_min) * PLOT_H

    body: list[str] = []
    meta: dict = {"accepted": len(accepted), "skipped": skipped, "rows": len(rows)}

    if spec.kind == "points":
        for lat, lon in accepted:
            body.append(
                f'<circle cx="{_fmt(px(lon))}" cy="{_fmt(py(lat))}" r="3" '
                f'fill="{_SERIES_COLORS[0]}" fill-opacity="0.65" class="marker" />'
            )
        meta["markers"] = len(accepted)
    else:
        grid = spec.grid
        bins: dict[tuple[int, int], int] = {}
        for lat, lon in accepted:
            gx = min(int((lon - lon_min) / (lon_max - lon_min) * grid), grid - 1)
            gy = min(int((lat - lat_min) / (lat_max - lat_min) * grid), grid - 1)
            bins[(gx, gy)] = bins.get((gx, gy), 0) + 1
        max_count = max(bins.values())
        cell_w = PLOT_W / grid
        cell_h = PLOT_H / grid
        for (gx, gy), count in sorted(bins.items()):
            x = MARGIN_LEFT + gx * cell_w
            y = MARGIN_TOP + (grid - 1 - gy) * cell_h
            body.append(
                f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(cell_w)}" height="{_fmt(cell_h)}" '
                f'fill="{_HEAT_COLOR}" fill-opacity="{count / max_count:.4f}" '
                f'class="bin" data-count="{count}" />'
            )
        meta["bins_total"] = sum(bins.values())
        meta["max_bin"] = max_count
        meta["grid"] = grid

    axes = _map_axes(lat_min, lat_max, lon_min, lon_max)
    svg = _svg_document(spec.title, body, axes)
    html = (
        "<!DOCTYPE html>\n<html>\n<head>\n"
        '<meta charset="utf-8" />\n'
        f"<title>{escape(spec.title or spec.kind)}</title>\n"
        "</head>\n<body>\n"
        + svg
        + f"<!-- geoagent-meta {json.dumps(meta, sort_keys=True)} -->\n"
        + "</body>\n</html>\n"
    )
    out_path = Path(out_path)
    _atomic_write(out_path, html)
    return RenderResult(path=str(out_path), kind=spec.kind, meta=meta)


def _map_axes(lat_min, lat_max, lon_min, lon_max) -> list[str]:
    parts = [
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{PLOT_W}" height="{PLOT_H}" '
        f'fill="none" stroke="#999" />'
    ]
    for k in range(5):
        lon = lon_min + (lon_max - lon_min) * k / 4
        x = MARGIN_LEFT + PLOT_W * k / 4
        parts.append(
            f'<text x="{_fmt(x)}" y="{MARGIN_TOP + PLOT_H + 16}" text-anchor="middle" '
            f'font-size="9">{lon:.4f}</text>'
        )
        lat = lat_min + (lat_max - lat_min) * k / 4
        y = MARGIN_TOP + PLOT_H - PLOT_H * k / 4
        parts.append(
            f'<text x="{MARGIN_LEFT - 7}" y="{_fmt(y + 3)}" text-anchor="end" '
            f'font-size="9">{lat:.4f}</text>'
        )
    return parts


# -- default visualization choice --------------------------------------------------

_TEMPORAL_NAMES = frozenset(
    "month hour day week year date time period checkin_time checkin_date minute".split()
)


def choose_visualization(columns: list[str], rows: list[list]) -> str | None:
    """Default chart kind: line for temporal, bar for categorical, map for lat/lon."""
    if not rows or not columns:
        return None
    if len(columns) == 1 and len(rows) == 1:
        return None
    lowered = [c.lower() for c in columns]
    has_lat = any(c in ("latitude", "lat") for c in lowered)
    has_lon = any(c in ("longitude", "lon") for c in lowered)
    if has_lat and has_lon:
        return "heatmap" if len(rows) > POINTS_THRESHOLD else "points"
    if len(columns) < 2:
        return None
    first = lowered[0]
    x_value = rows[0][0]
    if first in _TEMPORAL_NAMES or _looks_temporal(x_value):
        return "line"
    if isinstance(x_value, str) and not _is_number(x_value):
        return "bar"
    if _is_number(x_value):
        return "line"
    return None


def _looks_temporal(value) -> bool:
    s = str(value)
    return len(s) >= 7 and s[0:4].isdigit() and s[4] == "-" and s[5:7].isdigit()


def _is_number(value) -> bool:
    try:
        float(value)
        return True
    except (TypeError, ValueError):
        return False


# -- artifact index -----------------------------------------------------------------


def append_artifact_index(session_dir: str | Path, entry: dict) -> None:
    """Append one artifact record to the session's artifacts.json index."""
    session_dir = Path(session_dir)
    session_dir.mkdir(parents=True, exist_ok=True)
    index_path = session_dir / "artifacts.json"
    if index_path.exists():
        entries = json.loads(index_path.read_text(encoding="utf-8"))
    else:
        entries = []
    entries.append(entry)
    _atomic_write(index_path, json.dumps(entries, indent=2, sort_keys=True) + "\n")


def read_artifact_index(session_dir: str | Path) -> list[dict]:
    index_path = Path(session_dir) / "artifacts.json"
    if not index_path.exists():
        return []
    return json.loads(index_path.read_text(encoding="utf-8"))
