"""Regenerates bench/data/suite.json and table1_verdicts.json."""

import json
from pathlib import Path

ALL_COLS = "user_id, place_id, latitude, longitude, category_name, checkin_time"
LATE_NIGHT = "(EXTRACT(HOUR FROM checkin_time) >= 22 OR EXTRACT(HOUR FROM checkin_time) < 4)"
CP_BOX = "latitude BETWEEN 40.7644 AND 40.8005 AND longitude BETWEEN -73.9818 AND -73.9495"
JFK_BOX = "latitude BETWEEN 40.6195 AND 40.6631 AND longitude BETWEEN -73.8255 AND -73.7307"
MIDTOWN_BOX = "latitude BETWEEN 40.742 AND 40.765 AND longitude BETWEEN -74.002 AND -73.958"
DOWNTOWN_BOX = "latitude BETWEEN 40.7 AND 40.723 AND longitude BETWEEN -74.019 AND -73.972"
BK_BOX = "latitude BETWEEN 40.5707 AND 40.7395 AND longitude BETWEEN -74.0423 AND -73.8334"
QU_BOX = "latitude BETWEEN 40.5091 AND 40.8007 AND longitude BETWEEN -73.9642 AND -73.7004"
Y2012 = "checkin_time >= '2012-01-01 00:00:00' AND checkin_time < '2013-01-01 00:00:00'"


def rows(sql, digits=6, require_artifact=None, params=None, notes=None):
    oracle = {"kind": "rows", "reference_sql": sql, "digits": digits}
    if require_artifact:
        oracle["require_artifact"] = require_artifact
    if params:
        oracle["params"] = params
    if notes:
        oracle["notes"] = notes
    return oracle


def ranked(sql, k, label_col=0, score_col=1, notes=None):
    oracle = {
        "kind": "ranked", "reference_sql": sql, "k": k,
        "label_col": label_col, "score_col": score_col,
    }
    if notes:
        oracle["notes"] = notes
    return oracle


def winner(sql, candidates, notes=None):
    oracle = {"kind": "winner", "reference_sql": sql, "candidates": candidates}
    if notes:
        oracle["notes"] = notes
    return oracle


QUESTIONS = [
    (1, "Show all check-ins at train stations.", "B",
     rows(f"SELECT {ALL_COLS} FROM checkins_nyc WHERE category_name = 'Train Station'")),
    (2, "List check-ins made by user 123.", "B",
     rows(f"SELECT {ALL_COLS} FROM checkins_nyc WHERE user_id = '123'")),
    (3, "Find all check-ins at restaurants in 2012.", "B,T",
     rows(f"SELECT {ALL_COLS} FROM checkins_nyc WHERE category_name ILIKE '%restaurant%' AND {Y2012}")),
    (4, "What are the top 10 most popular places?", "A",
     ranked("SELECT place_id, count(*) AS n FROM checkins_nyc GROUP BY place_id ORDER BY n DESC, place_id", 10)),
    (5, "Which category had the most check-ins overall?", "A",
     ranked("SELECT category_name, count(*) AS n FROM checkins_nyc GROUP BY category_name ORDER BY n DESC, category_name", 1)),
    (6, "How many check-ins happened each month in 2012?", "A,T",
     rows(f"SELECT date_trunc('month', checkin_time) AS month, count(*) AS n FROM checkins_nyc WHERE {Y2012} GROUP BY 1")),
    (7, "When during the day do people check in at coffee shops?", "A,T",
     rows("SELECT EXTRACT(HOUR FROM checkin_time) AS hour, count(*) AS n FROM checkins_nyc WHERE category_name = 'Coffee Shop' GROUP BY 1")),
    (8, "Compare check-ins at 1pm vs 1am.", "A,T",
     winner("SELECT '1pm' AS label, count(*) AS n FROM checkins_nyc WHERE EXTRACT(HOUR FROM checkin_time) = 13 "
            "UNION ALL SELECT '1am', count(*) FROM checkins_nyc WHERE EXTRACT(HOUR FROM checkin_time) = 1",
            [["1pm", "1 pm"], ["1am", "1 am"]])),
    (9, "Show weekday vs weekend check-in totals.", "A,T",
     rows("SELECT CASE WHEN EXTRACT(DOW FROM checkin_time) IN (0, 6) THEN 'weekend' ELSE 'weekday' END AS part, "
          "count(*) AS n FROM checkins_nyc GROUP BY 1")),
    (10, "Which category dominates late-night activity (10pm-4am)?", "A,T",
     ranked(f"SELECT category_name, count(*) AS n FROM checkins_nyc WHERE {LATE_NIGHT} "
            "GROUP BY category_name ORDER BY n DESC, category_name", 1,
            notes="late-night window is [22:00, 04:00) event-local")),
    (11, "For the top 5 categories, what is the average check-in time of day?", "A,T,M",
     rows("WITH top5 AS (SELECT category_name FROM checkins_nyc GROUP BY category_name "
          "ORDER BY count(*) DESC, category_name LIMIT 5) "
          "SELECT category_name, avg(EXTRACT(HOUR FROM checkin_time)) AS avg_hour FROM checkins_nyc "
          "WHERE category_name IN (SELECT category_name FROM top5) GROUP BY category_name", digits=4)),
    (12, "For each of the top 3 categories, show the trend of monthly check-ins over 2012.", "A,T,M",
     rows("WITH top3 AS (SELECT category_name FROM checkins_nyc GROUP BY category_name "
          "ORDER BY count(*) DESC, category_name LIMIT 3) "
          "SELECT category_name, date_trunc('month', checkin_time) AS month, count(*) AS n FROM checkins_nyc "
          f"WHERE category_name IN (SELECT category_name FROM top3) AND {Y2012} GROUP BY 1, 2")),
    (13, "Among the top 10 places, which has the largest share of late-night check-ins?", "A,T,M",
     ranked("WITH top10 AS (SELECT place_id, count(*) AS total FROM checkins_nyc GROUP BY place_id "
            "ORDER BY total DESC, place_id LIMIT 10) "
            "SELECT c.place_id, CAST(sum(CASE WHEN EXTRACT(HOUR FROM c.checkin_time) >= 22 "
            "OR EXTRACT(HOUR FROM c.checkin_time) < 4 THEN 1 ELSE 0 END) AS REAL) / count(*) AS late_share "
            "FROM checkins_nyc c WHERE c.place_id IN (SELECT place_id FROM top10) "
            "GROUP BY c.place_id ORDER BY late_share DESC, c.place_id", 1)),
    (14, "For the top 5 users, show their distribution of activity across categories.", "A,M",
     rows("WITH top5u AS (SELECT user_id, count(*) AS total FROM checkins_nyc GROUP BY user_id "
          "ORDER BY total DESC, user_id LIMIT 5) "
          "SELECT user_id, category_name, count(*) AS n FROM checkins_nyc "
          "WHERE user_id IN (SELECT user_id FROM top5u) GROUP BY 1, 2")),
    (15, "Map the locations of all laundromats.", "B,S",
     rows("SELECT latitude, longitude FROM checkins_nyc WHERE category_name = 'Laundry Service'",
          require_artifact="map")),
    (16, "Where are most gyms located?", "A,S",
     rows("SELECT latitude, longitude FROM checkins_nyc WHERE category_name = 'Gym / Fitness Center'",
          require_artifact="map")),
    (17, "Show check-ins at JFK Airport.", "S,E",
     rows(f"SELECT {ALL_COLS} FROM checkins_nyc WHERE {JFK_BOX}",
          notes="JFK box is configured knowledge, not published bounds")),
    (18, "Compare check-ins in Midtown vs Downtown Manhattan.", "M,S,E",
     rows(f"SELECT 'Midtown' AS area, count(*) AS n FROM checkins_nyc WHERE {MIDTOWN_BOX} "
          f"UNION ALL SELECT 'Downtown', count(*) FROM checkins_nyc WHERE {DOWNTOWN_BOX}",
          notes="neighborhood boxes are configured knowledge")),
    (19, "How do categories of check-ins differ between Brooklyn and Queens?", "A,M,S,E",
     rows(f"SELECT CASE WHEN {BK_BOX} THEN 'Brooklyn' WHEN {QU_BOX} THEN 'Queens' END AS borough, "
          f"category_name, count(*) AS n FROM checkins_nyc WHERE ({BK_BOX}) OR ({QU_BOX}) GROUP BY 1, 2",
          notes="Brooklyn clause first: overlapping boxes resolve to Brooklyn")),
    (20, "Compare the number of morning check-ins versus evening check-ins at Central Park.", "A,T,S",
     rows(f"SELECT 'morning' AS period, count(*) AS n FROM checkins_nyc WHERE {CP_BOX} "
          "AND EXTRACT(HOUR FROM checkin_time) >= 6 AND EXTRACT(HOUR FROM checkin_time) < 12 "
          f"UNION ALL SELECT 'evening', count(*) FROM checkins_nyc WHERE {CP_BOX} "
          "AND EXTRACT(HOUR FROM checkin_time) >= 18",
          notes="morning [06,12), evening [18,24); Central Park box is configured knowledge")),
    (21, "Show all check-ins at Pizza Joints.", "B",
     rows(f"SELECT {ALL_COLS} FROM checkins_nyc WHERE category_name ILIKE '%pizza%'")),
    (22, "Find all check-ins in February 2015.", "B,T",
     rows(f"SELECT {ALL_COLS} FROM checkins_nyc WHERE checkin_time >= '2015-02-01 00:00:00' "
          "AND checkin_time < '2015-03-01 00:00:00'",
          notes="outside the dataset span; the correct answer is the empty set")),
    (23, "Show the busiest subway station.", "A,S",
     ranked("SELECT place_id, count(*) AS n FROM checkins_nyc WHERE category_name = 'Subway' "
            "GROUP BY place_id ORDER BY n DESC, place_id", 1)),
    (24, "Show all check-ins at places with more than 1,000 visits.", "A",
     rows(f"SELECT {ALL_COLS} FROM checkins_nyc WHERE place_id IN "
          "(SELECT place_id FROM checkins_nyc GROUP BY place_id HAVING count(*) > {min_visits})",
          params={"desk": {"min_visits": 25}, "full": {"min_visits": 1000}},
          notes="visit threshold scales with dataset: 1,000 on the full data, 25 on the 5,000-row fixture")),
    (25, "Were check-ins higher on New Year's Eve than on an average day?", "A,T,E",
     winner("SELECT 'New Year''s Eve' AS label, CAST(count(*) AS REAL) AS n FROM checkins_nyc "
            "WHERE checkin_time >= '2012-12-31 00:00:00' AND checkin_time < '2013-01-01 00:00:00' "
            "UNION ALL SELECT 'average day', CAST(count(*) AS REAL) / count(DISTINCT date_trunc('day', checkin_time)) "
            "FROM checkins_nyc",
            [["new year's eve", "nye", "december 31"], ["average day", "typical day"]])),
    (26, "Show check-ins during Thanksgiving Day.", "T,E",
     rows(f"SELECT {ALL_COLS} FROM checkins_nyc WHERE checkin_time >= '2012-11-22 00:00:00' "
          "AND checkin_time < '2012-11-23 00:00:00'",
          notes="Thanksgiving 2012 = fourth Thursday of November = Nov 22")),
    (27, "Compare summer vs winter check-in activity.", "A,T,E",
     rows("SELECT 'summer' AS season, count(*) AS n FROM checkins_nyc "
          "WHERE checkin_time >= '2012-06-01 00:00:00' AND checkin_time < '2012-09-01 00:00:00' "
          "UNION ALL SELECT 'winter', count(*) FROM checkins_nyc "
          "WHERE checkin_time >= '2012-12-01 00:00:00' AND checkin_time < '2013-03-01 00:00:00'",
          notes="summer Jun 1-Sep 1; winter Dec 1-Mar 1 (dataset ends Feb 16)")),
    (28, "Which places are busiest during lunch hours (11am-2pm)?", "A,T",
     ranked("SELECT place_id, count(*) AS n FROM checkins_nyc "
            "WHERE EXTRACT(HOUR FROM checkin_time) >= 11 AND EXTRACT(HOUR FROM checkin_time) < 14 "
            "GROUP BY place_id ORDER BY n DESC, place_id", 10)),
    (29, "Show trends in nightlife activity over time.", "A,T",
     rows("SELECT date_trunc('month', checkin_time) AS month, count(*) AS n FROM checkins_nyc "
          "WHERE category_name IN ('Bar', 'Nightclub', 'Music Venue') GROUP BY 1",
          notes="nightlife = Bar, Nightclub, Music Venue; monthly resolution")),
    (30, "How does check-in activity change across different times of day?", "A,T",
     rows("SELECT EXTRACT(HOUR FROM checkin_time) AS hour, count(*) AS n FROM checkins_nyc GROUP BY 1")),
    (31, "Compare the most popular categories in NYC vs Tokyo.", "A,M,X",
     {"kind": "ranked_per_group", "k": 5, "group_col": 0, "label_col": 1, "score_col": 2,
      "reference_sql": "SELECT 'NYC' AS city, category_name, count(*) AS n FROM checkins_nyc GROUP BY 2 "
                       "UNION ALL SELECT 'Tokyo', category_name, count(*) FROM checkins_tokyo GROUP BY 2",
      "notes": "top 5 per city, ties accepted"}),
    (32, "Which city has more late-night check-ins?", "A,T,X",
     winner(f"SELECT 'NYC' AS city, count(*) AS n FROM checkins_nyc WHERE {LATE_NIGHT} "
            f"UNION ALL SELECT 'Tokyo', count(*) FROM checkins_tokyo WHERE {LATE_NIGHT}",
            [["NYC", "New York"], ["Tokyo"]],
            notes="hours compare event-local per city")),
    (33, "Show the average check-ins per place in NYC vs Tokyo.", "A,X",
     rows("SELECT 'NYC' AS city, CAST(count(*) AS REAL) / count(DISTINCT place_id) AS avg_per_place "
          "FROM checkins_nyc UNION ALL SELECT 'Tokyo', CAST(count(*) AS REAL) / count(DISTINCT place_id) "
          "FROM checkins_tokyo", digits=4)),
    (34, "Which city has more check-ins at train stations?", "A,X",
     winner("SELECT 'NYC' AS city, count(*) AS n FROM checkins_nyc WHERE category_name = 'Train Station' "
            "UNION ALL SELECT 'Tokyo', count(*) FROM checkins_tokyo WHERE category_name = 'Train Station'",
            [["NYC", "New York"], ["Tokyo"]])),
    (35, "Compare weekend activity patterns between NYC and Tokyo.", "A,T,X",
     rows("SELECT 'NYC' AS city, EXTRACT(HOUR FROM checkin_time) AS hour, count(*) AS n FROM checkins_nyc "
          "WHERE EXTRACT(DOW FROM checkin_time) IN (0, 6) GROUP BY 1, 2 "
          "UNION ALL SELECT 'Tokyo', EXTRACT(HOUR FROM checkin_time), count(*) FROM checkins_tokyo "
          "WHERE EXTRACT(DOW FROM checkin_time) IN (0, 6) GROUP BY 1, 2")),
]

NAIVE_CORRECT = {2, 3, 5, 6, 8, 12, 22, 24, 29, 30}
AGENTIC_INCORRECT = {17, 21, 35}


def main():
    out_dir = Path(__file__).resolve().parents[1] / "src" / "geoagent" / "bench" / "data"
    out_dir.mkdir(parents=True, exist_ok=True)

    questions = [
        {"id": qid, "text": text, "categories": cats.split(","), "oracle": oracle}
        for qid, text, cats, oracle in QUESTIONS
    ]
    (out_dir / "suite.json").write_text(
        json.dumps({"questions": questions}, indent=2) + "\n", encoding="utf-8"
    )

    verdicts = {
        "naive": {str(q["id"]): q["id"] in NAIVE_CORRECT for q in questions},
        "agentic": {str(q["id"]): q["id"] not in AGENTIC_INCORRECT for q in questions},
    }
    (out_dir / "table1_verdicts.json").write_text(
        json.dumps(verdicts, indent=2) + "\n", encoding="utf-8"
    )

    counts = {}
    for q in questions:
        for c in q["categories"]:
            counts[c] = counts.get(c, 0) + 1
    print("tag counts:", counts)
    print("wrote", out_dir / "suite.json")


if __name__ == "__main__":
    main()
