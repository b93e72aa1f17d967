from datetime import date, datetime

import pytest

from geoagent.knowledge import (
    DAYPART_NAMES,
    KnowledgeError,
    UnknownNameError,
    daypart,
    edit_similarity,
    normalize_term,
)


# --- bounding boxes -----------------------------------------------------------


def test_brooklyn_bounds_exact(kb):
    box = kb.lookup_bounds("Brooklyn")
    assert (box.lat_min, box.lat_max, box.lon_min, box.lon_max) == (
        40.5707, 40.7395, -74.0423, -73.8334,
    )
    assert box.kind == "borough"


def test_queens_bounds_exact(kb):
    box = kb.lookup_bounds("Queens")
    assert (box.lat_min, box.lat_max, box.lon_min, box.lon_max) == (
        40.5091, 40.8007, -73.9642, -73.7004,
    )


def test_lookup_is_case_insensitive(kb):
    assert kb.lookup_bounds("bRoOkLyN").name == "Brooklyn"


def test_unknown_region(kb):
    with pytest.raises(UnknownNameError):
        kb.lookup_bounds("Atlantis")


def test_brooklyn_and_queens_overlap(kb):
    b = kb.lookup_bounds("brooklyn")
    q = kb.lookup_bounds("queens")
    # a known overlap: a point in both boxes, so WHEN order matters downstream
    lat, lon = 40.7, -73.95
    assert b.contains(lat, lon) and q.contains(lat, lon)


def test_non_paper_boxes_are_marked(kb):
    assert kb.lookup_bounds("central park").source != "paper"
    assert kb.lookup_bounds("brooklyn").source == "paper"


# --- calendar windows ----------------------------------------------------------


def test_thanksgiving_2012_fourth_thursday(kb):
    # independent oracle: enumerate the month's Thursdays
    thursdays = [d for d in range(1, 31) if date(2012, 11, d).weekday() == 3]
    assert thursdays[3] == 22

    window = kb.lookup_window("thanksgiving", 2012)
    assert window.start == datetime(2012, 11, 22)
    assert window.end == datetime(2012, 11, 23)


def test_new_years_eve_2012(kb):
    window = kb.lookup_window("new year's eve", 2012)
    assert window.start == datetime(2012, 12, 31)
    assert window.end == datetime(2013, 1, 1)


def test_summer_2012(kb):
    window = kb.lookup_window("summer", 2012)
    assert (window.start, window.end) == (datetime(2012, 6, 1), datetime(2012, 9, 1))


def test_winter_crosses_year_boundary(kb):
    window = kb.lookup_window("winter", 2012)
    assert (window.start, window.end) == (datetime(2012, 12, 1), datetime(2013, 3, 1))


def test_unknown_holiday(kb):
    with pytest.raises(UnknownNameError):
        kb.lookup_window("festivus", 2012)


def test_year_out_of_range(kb):
    with pytest.raises(KnowledgeError):
        kb.lookup_window("thanksgiving", 1999)


# --- synonyms -------------------------------------------------------------------


def test_nightlife_expands_to_paper_categories(kb):
    assert kb.expand_term("nightlife") == ["Bar", "Nightclub", "Music Venue"]


def test_laundromat_expands_to_schema_label(kb):
    assert kb.expand_term("laundromat") == ["Laundry Service"]


def test_unknown_term_expands_to_empty(kb):
    assert kb.expand_term("zzz-unknown") == []


def test_expand_is_stable_under_case_and_whitespace(kb):
    assert kb.expand_term("  NightLife ") == kb.expand_term("nightlife")
    assert normalize_term(" A  b ") == normalize_term("a b".upper())


# --- dayparts -------------------------------------------------------------------


@pytest.mark.parametrize(
    "hour,name",
    [(3, "Late Night"), (8, "Morning"), (23, "Evening"), (0, "Late Night"),
     (5, "Early Morning"), (12, "Midday"), (16, "Afternoon"), (19, "Evening")],
)
def test_daypart_examples(hour, name):
    assert daypart(hour) == name


def test_dayparts_partition_all_hours():
    seen = {}
    for hour in range(24):
        seen.setdefault(daypart(hour), []).append(hour)
    assert sorted(seen) == sorted(DAYPART_NAMES)
    assert sum(len(v) for v in seen.values()) == 24


@pytest.mark.parametrize("hour", [-1, 24, 2.5, "8"])
def test_daypart_rejects_bad_hours(hour):
    with pytest.raises(ValueError):
        daypart(hour)


# --- label discovery -------------------------------------------------------------


def test_edit_similarity_pins_laundry_rule():
    assert edit_similarity("laundromat", "laundry") == pytest.approx(0.6)


def test_discover_laundromat_ranks_laundry_service_first(kb, store):
    ranked = kb.discover_labels("laundromat", "checkins_nyc", store)
    assert ranked and ranked[0][0] == "Laundry Service"
    assert 0 < ranked[0][1] <= 1


def test_discover_pizza_matches_substring_oracle(kb, store):
    _, rows = store.query("SELECT DISTINCT category_name FROM checkins_nyc")
    expected = {r[0] for r in rows if "pizza" in r[0].lower()}
    assert expected  # fixture must contain at least one pizza label

    got = {label for label, _ in kb.discover_labels("pizza joints", "checkins_nyc", store)}
    assert got == expected


def test_discover_no_candidates(kb, store):
    assert kb.discover_labels("zq", "checkins_nyc", store) == []


def test_discover_scores_monotone_and_subset(kb, store):
    _, rows = store.query("SELECT DISTINCT category_name FROM checkins_nyc")
    distinct = {r[0] for r in rows}
    ranked = kb.discover_labels("coffee house", "checkins_nyc", store)
    assert {label for label, _ in ranked} <= distinct
    scores = [s for _, s in ranked]
    assert scores == sorted(scores, reverse=True)
