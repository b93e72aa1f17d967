import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geoagent.sqlguard import (
    BBOX_SUGGESTION,
    METERS_PER_DEGREE,
    RewriteError,
    analyze,
    has_errors,
    lint,
    parse_statement,
    radial_bbox,
    rewrite_radial_to_bbox,
)

BOROUGH_CASE_SQL = (
    "SELECT CASE WHEN latitude BETWEEN 40.5707 AND 40.7395 "
    "AND longitude BETWEEN -74.0423 AND -73.8334 THEN 'Brooklyn' "
    "WHEN latitude BETWEEN 40.5091 AND 40.8007 "
    "AND longitude BETWEEN -73.9642 AND -73.7004 THEN 'Queens' "
    "END AS borough FROM checkins_nyc"
)


# --- parse_statement -------------------------------------------------------


def test_minimal_select():
    s = parse_statement("SELECT 1")
    assert s.statement_kind == "select"
    assert s.referenced_tables == set()
    assert s.called_functions == set()


def test_non_select_statement():
    assert parse_statement("DROP TABLE checkins_nyc").statement_kind == "other"


def test_borough_case_query_columns_and_functions():
    s = parse_statement(BOROUGH_CASE_SQL)
    assert ("", "latitude") in s.referenced_columns
    assert ("", "longitude") in s.referenced_columns
    assert s.called_functions == set()
    assert s.referenced_tables == {"checkins_nyc"}


def test_alias_resolution_and_qualified_columns():
    s = parse_statement(
        "SELECT c.latitude, c.longitude FROM checkins_nyc c "
        "WHERE c.category_name = 'Laundry Service'"
    )
    assert ("c", "latitude") in s.referenced_columns
    assert ("c", "category_name") in s.referenced_columns
    assert s.referenced_tables == {"checkins_nyc"}


def test_cte_names_are_not_referenced_tables():
    s = parse_statement(
        "WITH top5 AS (SELECT category_name FROM checkins_nyc GROUP BY 1 "
        "ORDER BY count(*) DESC LIMIT 5) "
        "SELECT category_name FROM checkins_nyc "
        "WHERE category_name IN (SELECT category_name FROM top5)"
    )
    assert s.referenced_tables == {"checkins_nyc"}
    assert s.has_cte


def test_union_flags():
    s = parse_statement("SELECT 1 UNION ALL SELECT 2")
    assert s.has_union


def test_multiple_statements_are_other():
    assert parse_statement("SELECT 1; DROP TABLE x").statement_kind == "other"


def test_unparseable_does_not_crash():
    s = parse_statement("SELECT 'unterminated")
    assert s.statement_kind == "other"


def test_extract_interior_is_not_a_table_context():
    s = parse_statement("SELECT EXTRACT(HOUR FROM checkin_time) FROM checkins_nyc")
    assert s.referenced_tables == {"checkins_nyc"}
    assert ("", "checkin_time") in s.referenced_columns
    assert "extract" in s.called_functions


# --- lint -------------------------------------------------------------------


def test_lint_clean_minimal():
    assert lint("SELECT 1") == []


def test_lint_r1_soundness():
    statements = [
        "SELECT 1",
        "SELECT * FROM checkins_nyc",
        "DROP TABLE checkins_nyc",
        "INSERT INTO t VALUES (1)",
        "SELECT 1; SELECT 2",
        "WITH c AS (SELECT 1) SELECT * FROM c",
        "UPDATE t SET x = 1",
    ]
    for sql in statements:
        diags = lint(sql)
        has_r1 = any(d.rule_id == "R1" and d.severity == "error" for d in diags)
        assert has_r1 == (parse_statement(sql).statement_kind != "select"), sql


def test_lint_geodesic_blocked_with_bbox_suggestion(schema):
    sql = (
        "SELECT * FROM checkins_nyc "
        "WHERE ST_DWithin(longitude, latitude, 2000)"
    )
    diags = lint(sql, schema)
    r4 = [d for d in diags if d.rule_id == "R4"]
    assert r4 and r4[0].severity == "error"
    assert r4[0].suggestion == BBOX_SUGGESTION


@pytest.mark.parametrize("fn", ["earth_distance", "ll_to_earth", "ST_Distance", "st_within"])
def test_lint_geodesic_names(fn, schema):
    diags = lint(f"SELECT * FROM checkins_nyc WHERE {fn}(latitude, longitude) < 10", schema)
    assert any(d.rule_id == "R4" and d.suggestion == BBOX_SUGGESTION for d in diags)


def test_lint_unknown_function(schema):
    diags = lint("SELECT madeup(latitude) FROM checkins_nyc", schema)
    assert any(d.rule_id == "R4" for d in diags)


def test_lint_unknown_column_oracle(schema):
    # oracle: membership of the name in the schema's column set
    all_columns = {c.lower() for _, cols in schema.tables for c, _ in cols}
    assert "foo" not in all_columns
    diags = lint("SELECT foo FROM checkins_nyc", schema)
    r3 = [d for d in diags if d.rule_id == "R3"]
    assert len(r3) == 1 and "foo" in r3[0].message

    for col in sorted(all_columns):
        assert not any(
            d.rule_id == "R3" for d in lint(f"SELECT {col} FROM checkins_nyc", schema)
        ), col


def test_lint_unknown_table(schema):
    diags = lint("SELECT * FROM checkins_atlantis", schema)
    assert any(d.rule_id == "R2" and d.severity == "error" for d in diags)


def test_lint_alias_not_flagged(schema):
    diags = lint(
        "SELECT category_name, count(*) AS n FROM checkins_nyc GROUP BY 1 ORDER BY n DESC",
        schema,
    )
    assert not any(d.rule_id == "R3" for d in diags)


def test_lint_union_shape_mismatch(schema):
    sql = (
        "SELECT user_id, place_id FROM checkins_nyc "
        "UNION ALL SELECT user_id FROM checkins_tokyo"
    )
    diags = lint(sql, schema)
    assert any(d.rule_id == "R5" and d.severity == "error" for d in diags)


def test_lint_union_shape_match(schema):
    sql = (
        "SELECT 'NYC' AS city, count(*) AS n FROM checkins_nyc "
        "UNION ALL SELECT 'Tokyo', count(*) FROM checkins_tokyo"
    )
    assert not any(d.rule_id == "R5" for d in lint(sql, schema))


def test_lint_empty_result_risk(schema):
    diags = lint(
        "SELECT * FROM checkins_nyc WHERE category_name = 'Totally Absent Label'",
        schema,
    )
    r6 = [d for d in diags if d.rule_id == "R6"]
    assert r6 and r6[0].severity == "warning"
    assert r6[0].suggestion == "run label discovery"


def test_lint_no_r6_for_sampled_value(store, schema):
    sampled = schema.samples["checkins_nyc"][0][4]
    diags = lint(
        f"SELECT * FROM checkins_nyc WHERE category_name = '{sampled}'", schema
    )
    assert not any(d.rule_id == "R6" for d in diags)


def test_lint_is_pure(schema):
    sql = "SELECT foo, ST_X(geom) FROM nowhere UNION ALL SELECT 1, 2"
    first = lint(sql, schema)
    for _ in range(3):
        assert lint(sql, schema) == first


def test_lint_diagnostic_json_shape(schema):
    diags = lint("SELECT * FROM checkins_nyc WHERE ST_DWithin(a, b, 1)", schema)
    d = diags[0].to_dict()
    assert set(d) == {"rule_id", "severity", "message", "span", "suggestion"}
    assert d["span"][0] >= 0 and d["span"][1] >= d["span"][0]


# --- rewrite ----------------------------------------------------------------

RADIAL_SQL = "SELECT * FROM checkins_nyc WHERE ST_DWithin(longitude, latitude, 2000)"
JFK = (40.6413, -73.7781)


def test_bbox_arithmetic_matches_stated_formula():
    # oracle: direct arithmetic on the documented formula
    lat_min, lat_max, lon_min, lon_max = radial_bbox(JFK[0], JFK[1], 2000)
    half_lat = (lat_max - lat_min) / 2
    assert half_lat == pytest.approx(2000 / METERS_PER_DEGREE)
    assert half_lat == pytest.approx(0.01797, abs=5e-6)
    half_lon = (lon_max - lon_min) / 2
    assert half_lon == pytest.approx(
        2000 / (METERS_PER_DEGREE * math.cos(math.radians(JFK[0])))
    )


def test_zero_radius_degenerate_box():
    sql = rewrite_radial_to_bbox(RADIAL_SQL, JFK, 0)
    assert f"latitude BETWEEN {JFK[0]!r} AND {JFK[0]!r}" in sql


def test_rewrite_requires_exactly_one_radial():
    with pytest.raises(RewriteError) as exc:
        rewrite_radial_to_bbox("SELECT 1 FROM checkins_nyc", JFK, 100)
    assert exc.value.kind == "not-applicable"

    two = (
        "SELECT * FROM checkins_nyc WHERE ST_DWithin(a, b, 1) "
        "AND ST_DWithin(c, d, 2)"
    )
    with pytest.raises(RewriteError):
        rewrite_radial_to_bbox(two, JFK, 100)


def test_rewrite_near_pole_degenerate():
    with pytest.raises(RewriteError) as exc:
        rewrite_radial_to_bbox(RADIAL_SQL, (89.5, 0.0), 100)
    assert exc.value.kind == "degenerate-longitude"


def test_rewrite_output_lints_clean_and_preserves_tables(schema):
    out = rewrite_radial_to_bbox(RADIAL_SQL, JFK, 2000)
    assert not any(d.rule_id == "R4" for d in lint(out, schema))
    assert not has_errors(lint(out, schema))
    assert parse_statement(out).referenced_tables == parse_statement(RADIAL_SQL).referenced_tables


def test_rewrite_handles_comparison_form(schema):
    sql = (
        "SELECT * FROM checkins_nyc "
        "WHERE earth_distance(ll_to_earth(latitude, longitude), ll_to_earth(40.6413, -73.7781)) < 2000"
    )
    out = rewrite_radial_to_bbox(sql, JFK, 2000)
    assert "earth_distance" not in out and "< 2000" not in out
    assert not has_errors(lint(out, schema))


# haversine oracle on the mean-radius sphere; the box uses the flat 111,320
# constant, so containment is asserted on the disk interior (<= 0.99 r)
EARTH_RADIUS_M = 6371000.0


def haversine_m(lat1, lon1, lat2, lon2):
    p1, p2 = math.radians(lat1), math.radians(lat2)
    dp = p2 - p1
    dl = math.radians(lon2 - lon1)
    a = math.sin(dp / 2) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dl / 2) ** 2
    return 2 * EARTH_RADIUS_M * math.asin(math.sqrt(a))


def destination(lat, lon, bearing_deg, dist_m):
    d = dist_m / EARTH_RADIUS_M
    b = math.radians(bearing_deg)
    p1 = math.radians(lat)
    l1 = math.radians(lon)
    p2 = math.asin(
        math.sin(p1) * math.cos(d) + math.cos(p1) * math.sin(d) * math.cos(b)
    )
    l2 = l1 + math.atan2(
        math.sin(b) * math.sin(d) * math.cos(p1),
        math.cos(d) - math.sin(p1) * math.sin(p2),
    )
    return math.degrees(p2), math.degrees(l2)


def check_containment(lat, lon, radius_m, eps=1e-9):
    # eps absorbs radians<->degrees roundoff in the oracle itself
    lat_min, lat_max, lon_min, lon_max = radial_bbox(lat, lon, radius_m)
    for bearing in range(0, 360, 30):
        for frac in (0.0, 0.25, 0.5, 0.75, 0.9, 0.99):
            plat, plon = destination(lat, lon, bearing, radius_m * frac)
            assert haversine_m(lat, lon, plat, plon) <= radius_m * frac + 1e-6
            assert lat_min - eps <= plat <= lat_max + eps, (lat, lon, radius_m, bearing, frac)
            assert lon_min - eps <= plon <= lon_max + eps, (lat, lon, radius_m, bearing, frac)


@settings(max_examples=50, deadline=None)
@given(
    lat=st.floats(min_value=-79.9, max_value=79.9),
    lon=st.floats(min_value=-179.0, max_value=179.0),
    radius=st.floats(min_value=0.0, max_value=50_000.0),
)
def test_bbox_contains_haversine_disk(lat, lon, radius):
    check_containment(lat, lon, radius)
