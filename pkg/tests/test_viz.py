import random
import re

import pytest

from geoagent.viz import (
    VisualizationSpec,
    VizError,
    append_artifact_index,
    choose_visualization,
    read_artifact_index,
    render_map,
    render_plot,
)


def _read(path):
    return open(path, encoding="utf-8").read()


# --- plots ---------------------------------------------------------------------


def test_line_plot_has_one_polyline_with_all_vertices(tmp_path):
    rows = [[h, (h * 7) % 13 + 1] for h in range(24)]
    result = render_plot(
        VisualizationSpec(kind="line", title="Hourly check-ins"),
        ["hour", "count"],
        rows,
        tmp_path / "hourly.svg",
    )
    svg = _read(result.path)
    paths = re.findall(r'<path d="([^"]+)"', svg)
    assert len(paths) == 1
    assert len(re.findall(r"[ML] ", paths[0])) == 24


def test_single_row_bar_has_one_rect(tmp_path):
    result = render_plot(
        VisualizationSpec(kind="bar"),
        ["category_name", "count"],
        [["Bar", 42]],
        tmp_path / "one.svg",
    )
    svg = _read(result.path)
    data_rects = [r for r in re.findall(r"<rect [^>]+/>", svg) if "fill=\"#1f77b4\"" in r]
    assert len(data_rects) == 1


def test_month_ticks_match_input_cardinality(tmp_path):
    rows = [[f"2012-{m:02d}", m * 10] for m in range(1, 13)]
    result = render_plot(
        VisualizationSpec(kind="line"), ["month", "count"], rows, tmp_path / "m.svg"
    )
    svg = _read(result.path)
    assert result.meta["x_ticks"] == 12
    assert len(re.findall(r'class="x-tick"', svg)) == 12


def test_multi_series_line_one_path_each(tmp_path):
    rows = []
    for cat in ("Bar", "Nightclub", "Music Venue"):
        for m in range(1, 7):
            rows.append([f"2012-{m:02d}", cat, m + len(cat)])
    result = render_plot(
        VisualizationSpec(kind="line", series="category_name"),
        ["month", "category_name", "count"],
        rows,
        tmp_path / "series.svg",
    )
    assert result.meta["elements"] == 3


def test_plot_errors(tmp_path):
    with pytest.raises(VizError):
        render_plot(VisualizationSpec(kind="line"), ["x", "y"], [], tmp_path / "e.svg")
    with pytest.raises(VizError):
        render_plot(
            VisualizationSpec(kind="line"), ["x", "y"], [["a", "not-a-number"]], tmp_path / "e.svg"
        )
    with pytest.raises(VizError):
        render_plot(
            VisualizationSpec(kind="line", y="missing"), ["x", "y"], [["a", 1]], tmp_path / "e.svg"
        )


def test_plot_element_count_property(tmp_path):
    rng = random.Random(7)
    for trial in range(20):
        n = rng.randint(1, 40)
        rows = [[f"c{i}", rng.randint(0, 100)] for i in range(n)]
        result = render_plot(
            VisualizationSpec(kind="bar"), ["category_name", "count"], rows,
            tmp_path / f"p{trial}.svg",
        )
        assert result.meta["elements"] == n


# --- maps ----------------------------------------------------------------------


def test_single_point_map_has_one_marker(tmp_path):
    result = render_map(
        VisualizationSpec(kind="points"),
        ["latitude", "longitude"],
        [[40.7, -74.0]],
        tmp_path / "p.html",
    )
    html = _read(result.path)
    assert html.count('class="marker"') == 1
    assert result.meta["accepted"] == 1


def test_heatmap_bins_sum_to_accepted_rows(tmp_path):
    rng = random.Random(11)
    rows = [
        [40.5 + rng.random() * 0.4, -74.05 + rng.random() * 0.35] for _ in range(721)
    ]
    result = render_map(
        VisualizationSpec(kind="heatmap", title="Laundromats"),
        ["latitude", "longitude"],
        rows,
        tmp_path / "h.html",
    )
    assert result.meta["bins_total"] == 721
    html = _read(result.path)
    counts = [int(m) for m in re.findall(r'data-count="(\d+)"', html)]
    assert sum(counts) == 721


def test_heatmap_hotspot_matches_bruteforce_binning(tmp_path):
    # oracle: independent binning pass over the same grid definition
    rng = random.Random(5)
    rows = [[40.6 + rng.random() * 0.2, -74.0 + rng.random() * 0.2] for _ in range(400)]
    rows += [[40.65, -73.95]] * 50  # forced hotspot
    result = render_map(
        VisualizationSpec(kind="heatmap", grid=32),
        ["latitude", "longitude"],
        rows,
        tmp_path / "g.html",
    )
    lats = [r[0] for r in rows]
    lons = [r[1] for r in rows]
    lat_min, lat_max = min(lats), max(lats)
    lon_min, lon_max = min(lons), max(lons)
    bins = {}
    for lat, lon in rows:
        gx = min(int((lon - lon_min) / (lon_max - lon_min) * 32), 31)
        gy = min(int((lat - lat_min) / (lat_max - lat_min) * 32), 31)
        bins[(gx, gy)] = bins.get((gx, gy), 0) + 1
    assert result.meta["max_bin"] == max(bins.values())


def test_map_skips_out_of_range_rows(tmp_path):
    rows = [[40.7, -74.0], [95.0, -74.0], [40.8, -200.0], ["bad", "row"]]
    result = render_map(
        VisualizationSpec(kind="points"), ["latitude", "longitude"], rows, tmp_path / "s.html"
    )
    assert result.meta["accepted"] == 1
    assert result.meta["skipped"] == 3
    assert result.meta["accepted"] + result.meta["skipped"] == len(rows)


def test_map_zero_rows_errors(tmp_path):
    with pytest.raises(VizError):
        render_map(VisualizationSpec(kind="points"), ["latitude", "longitude"], [], tmp_path / "z.html")


def test_artifacts_are_byte_identical_across_renders(tmp_path):
    rows = [[40.5 + i * 0.001, -74.0 + i * 0.002] for i in range(300)]
    a = render_map(VisualizationSpec(kind="heatmap"), ["latitude", "longitude"], rows, tmp_path / "a.html")
    b = render_map(VisualizationSpec(kind="heatmap"), ["latitude", "longitude"], rows, tmp_path / "b.html")
    assert _read(a.path) == _read(b.path)

    prows = [[h, h * 2] for h in range(24)]
    pa = render_plot(VisualizationSpec(kind="line"), ["hour", "n"], prows, tmp_path / "pa.svg")
    pb = render_plot(VisualizationSpec(kind="line"), ["hour", "n"], prows, tmp_path / "pb.svg")
    assert _read(pa.path) == _read(pb.path)


# --- default choice ---------------------------------------------------------------


def test_choose_temporal_is_line():
    assert choose_visualization(["month", "count"], [["2012-04-01 00:00:00", 5]] * 3) == "line"


def test_choose_categorical_is_bar():
    assert choose_visualization(["category_name", "count"], [["Bar", 5], ["Park", 2]]) == "bar"


def test_choose_single_cell_is_none():
    assert choose_visualization(["count"], [[227428]]) is None


def test_choose_spatial_threshold():
    rows_small = [[40.7, -74.0]] * 10
    rows_big = [[40.7, -74.0]] * 201
    assert choose_visualization(["latitude", "longitude"], rows_small) == "points"
    assert choose_visualization(["latitude", "longitude"], rows_big) == "heatmap"


# --- artifact index ----------------------------------------------------------------


def test_artifact_index_roundtrip(tmp_path):
    append_artifact_index(tmp_path, {"id": "plot-0001", "kind": "plot", "path": "plot-0001.svg", "title": "t", "source_result_id": "res-0001"})
    append_artifact_index(tmp_path, {"id": "map-0001", "kind": "map", "path": "map-0001.html", "title": "m", "source_result_id": "res-0002"})
    index = read_artifact_index(tmp_path)
    assert [e["id"] for e in index] == ["plot-0001", "map-0001"]
