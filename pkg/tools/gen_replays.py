"""Builds the shipped replay scripts under bench/data/replays/.

Agentic scripts cover Q15, Q16, Q19, Q29, Q30, Q34; naive scripts cover all
35 questions with the kind of single-pass SQL a schema-blind generator
plausibly emits (correct for the questions marked correct in the verdict
fixture, characteristic failures elsewhere). Every generated script is
verified by actually running the suite against the desk fixture before
anything is written.
"""

import json
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from geoagent.bench import load_suite, run_suite  # noqa: E402
from geoagent.datastore import CheckinStore  # noqa: E402
from geoagent.fixtures import write_fixture_dataset  # noqa: E402
from geoagent.knowledge import KnowledgeBase, daypart  # noqa: E402

OUT = ROOT / "src" / "geoagent" / "bench" / "data" / "replays"

LAUNDRY_SQL = "SELECT latitude, longitude FROM checkins_nyc WHERE category_name = 'Laundry Service'"
GYM_SQL = "SELECT latitude, longitude FROM checkins_nyc WHERE category_name = 'Gym / Fitness Center'"
DISCOVERY_SQL = (
    "SELECT DISTINCT category_name FROM checkins_nyc "
    "WHERE category_name ILIKE '%laundry%' OR category_name ILIKE '%wash%'"
)
BK = "latitude BETWEEN 40.5707 AND 40.7395 AND longitude BETWEEN -74.0423 AND -73.8334"
QU = "latitude BETWEEN 40.5091 AND 40.8007 AND longitude BETWEEN -73.9642 AND -73.7004"
BOROUGH_SQL = (
    f"SELECT CASE WHEN {BK} THEN 'Brooklyn' WHEN {QU} THEN 'Queens' END AS borough, "
    f"category_name, count(*) AS n FROM checkins_nyc WHERE ({BK}) OR ({QU}) "
    "GROUP BY 1, 2 ORDER BY 1, 3 DESC"
)
NIGHTLIFE_SQL = (
    "SELECT date_trunc('month', checkin_time) AS month, count(*) AS n FROM checkins_nyc "
    "WHERE category_name IN ('Bar', 'Nightclub', 'Music Venue') GROUP BY 1 ORDER BY 1"
)
HOURLY_SQL = (
    "SELECT EXTRACT(HOUR FROM checkin_time) AS hour, count(*) AS n "
    "FROM checkins_nyc GROUP BY 1 ORDER BY 1"
)
TRAIN_SQL = (
    "SELECT 'NYC' AS city, count(*) AS n FROM checkins_nyc WHERE category_name = 'Train Station' "
    "UNION ALL SELECT 'Tokyo', count(*) FROM checkins_tokyo WHERE category_name = 'Train Station'"
)


def planner(text):
    return {"role": "planner", "match": {"mode": "step-index"}, "completion": text}


def sqlgen(text):
    return {"role": "sql_generator", "match": {"mode": "step-index"}, "completion": text}


def act(tool, **args):
    return f"Thought: proceeding step by step.\nAction: {tool}\nAction Input: {json.dumps(args)}"


def agentic_scripts(store):
    scripts = {}

    n_laundry = store.query(f"SELECT count(*) FROM ({LAUNDRY_SQL})")[1][0][0]
    scripts[15] = [
        planner(act("get_database_schema")),
        planner(act("execute_on_database", sql=DISCOVERY_SQL)),
        planner(act("generate_sql_query", request="latitude and longitude of every check-in whose category_name is 'Laundry Service' in checkins_nyc")),
        sqlgen(LAUNDRY_SQL),
        planner(act("execute_on_database", sql=LAUNDRY_SQL)),
        planner(act("map_results", result_id="res-0002", kind="heatmap", title="Laundromat locations")),
        planner(
            "Final Answer: The schema has no 'Laundromat' label; the matching category is "
            f"'Laundry Service'. All {n_laundry} such check-ins are plotted as a heatmap "
            "(see the map artifact)."
        ),
    ]

    n_gym = store.query(f"SELECT count(*) FROM ({GYM_SQL})")[1][0][0]
    scripts[16] = [
        planner(act("get_database_schema")),
        planner(act("generate_sql_query", request="latitude and longitude of every check-in whose category_name is 'Gym / Fitness Center' in checkins_nyc")),
        sqlgen(GYM_SQL),
        planner(act("execute_on_database", sql=GYM_SQL)),
        planner(act("map_results", result_id="res-0001", kind="heatmap", title="Gym locations")),
        planner(
            f"Final Answer: {n_gym} gym check-ins ('Gym / Fitness Center') are plotted as a "
            "density heatmap; the strongest clusters sit in the Manhattan core, with smaller "
            "pockets in Brooklyn and Queens."
        ),
    ]

    _, borough_rows = store.query(BOROUGH_SQL)
    top_by = {}
    for borough, cat, n in borough_rows:
        top_by.setdefault(borough, []).append((cat, n))
    bk_top = ", ".join(f"{c} ({n})" for c, n in top_by["Brooklyn"][:3])
    qu_top = ", ".join(f"{c} ({n})" for c, n in top_by["Queens"][:3])
    kb = KnowledgeBase()
    b = kb.lookup_bounds("brooklyn")
    q = kb.lookup_bounds("queens")
    scripts[19] = [
        planner(act("get_database_schema")),
        planner(act(
            "generate_sql_query",
            request="count check-ins per category for Brooklyn and Queens, labeling each row by borough with a CASE over latitude/longitude bounding boxes (Brooklyn clause first)",
            knowledge={
                "brooklyn_box": [b.lat_min, b.lat_max, b.lon_min, b.lon_max],
                "queens_box": [q.lat_min, q.lat_max, q.lon_min, q.lon_max],
            },
        )),
        sqlgen(BOROUGH_SQL),
        planner(act("execute_on_database", sql=BOROUGH_SQL)),
        planner(
            "Final Answer: Category mix differs by borough. Brooklyn's most frequent "
            f"categories: {bk_top}. Queens' most frequent: {qu_top}. Counts label points in "
            "the box overlap as Brooklyn (first CASE clause wins)."
        ),
    ]

    _, month_rows = store.query(NIGHTLIFE_SQL)
    peak_month, peak_n = max(month_rows, key=lambda r: r[1])
    scripts[29] = [
        planner(act("get_database_schema")),
        planner(act(
            "generate_sql_query",
            request="monthly counts of check-ins whose category_name is Bar, Nightclub, or Music Venue, grouped with date_trunc('month', checkin_time)",
            knowledge={"nightlife_categories": ["Bar", "Nightclub", "Music Venue"]},
        )),
        sqlgen(NIGHTLIFE_SQL),
        planner(act("execute_on_database", sql=NIGHTLIFE_SQL)),
        planner(act("plot_results", result_id="res-0001", kind="line", x="month", y="n", title="Nightlife check-ins per month")),
        planner(
            "Final Answer: Nightlife here means the Bar, Nightclub, and Music Venue "
            f"categories, aggregated monthly. The busiest month is {str(peak_month)[:7]} "
            f"with {peak_n} check-ins; the full trend is in the line plot."
        ),
    ]

    _, hour_rows = store.query(HOURLY_SQL)
    counts = {int(h): n for h, n in hour_rows}
    by_part = {}
    for h, n in counts.items():
        by_part.setdefault(daypart(h), []).append((h, n))
    lines = []
    for part in ("Late Night", "Early Morning", "Morning", "Midday", "Afternoon", "Evening"):
        hours = by_part.get(part, [])
        total = sum(n for _, n in hours)
        peak_h, peak_hn = max(hours, key=lambda x: x[1])
        lines.append(f"{part}: {total} check-ins, busiest at {peak_h}:00 ({peak_hn}).")
    scripts[30] = [
        planner(act("get_database_schema")),
        planner(act("generate_sql_query", request="check-in counts grouped by hour of day using EXTRACT(HOUR FROM checkin_time)")),
        sqlgen(HOURLY_SQL),
        planner(act("execute_on_database", sql=HOURLY_SQL)),
        planner(act("plot_results", result_id="res-0001", kind="line", x="hour", y="n", title="Hourly check-ins")),
        planner("Final Answer: Activity by daypart. " + " ".join(lines) + " See the hourly line plot."),
    ]

    _, train_rows = store.query(TRAIN_SQL)
    by_city = {c: n for c, n in train_rows}
    assert by_city["Tokyo"] > by_city["NYC"], "fixture must give Tokyo more train stations"
    scripts[34] = [
        planner(act("get_database_schema")),
        planner(act("generate_sql_query", request="count check-ins with category_name 'Train Station' in checkins_nyc and checkins_tokyo as one result with a city label per row")),
        sqlgen(TRAIN_SQL),
        planner(act("execute_on_database", sql=TRAIN_SQL)),
        planner(
            f"Final Answer: Tokyo has more train station check-ins: Tokyo {by_city['Tokyo']} "
            f"vs NYC {by_city['NYC']}."
        ),
    ]
    return scripts


NAIVE_SQL = {
    1: "SELECT * FROM checkins_nyc WHERE category_name = 'Train Stations'",
    2: "SELECT * FROM checkins_nyc WHERE user_id = '123'",
    3: "SELECT * FROM checkins_nyc WHERE category_name ILIKE '%restaurant%' AND checkin_time >= '2012-01-01 00:00:00' AND checkin_time < '2013-01-01 00:00:00'",
    4: "SELECT venue_name, count(*) FROM checkins_nyc GROUP BY venue_name ORDER BY count(*) DESC LIMIT 10",
    5: "SELECT category_name, count(*) AS n FROM checkins_nyc GROUP BY category_name ORDER BY n DESC LIMIT 1",
    6: "SELECT date_trunc('month', checkin_time) AS month, count(*) AS n FROM checkins_nyc WHERE EXTRACT(YEAR FROM checkin_time) = 2012 GROUP BY 1 ORDER BY 1",
    7: "SELECT EXTRACT(HOUR FROM checkin_time) AS hour, count(*) AS n FROM checkins_nyc WHERE category_name = 'Coffee' GROUP BY 1 ORDER BY 1",
    8: "SELECT '1pm' AS label, count(*) AS n FROM checkins_nyc WHERE EXTRACT(HOUR FROM checkin_time) = 13 UNION ALL SELECT '1am', count(*) FROM checkins_nyc WHERE EXTRACT(HOUR FROM checkin_time) = 1",
    9: "SELECT CASE WHEN EXTRACT(DOW FROM checkin_time) IN (6, 7) THEN 'weekend' ELSE 'weekday' END AS part, count(*) AS n FROM checkins_nyc GROUP BY 1",
    10: "SELECT category_name, count(*) AS n FROM checkins_nyc WHERE EXTRACT(HOUR FROM checkin_time) >= 22 AND EXTRACT(HOUR FROM checkin_time) < 4 GROUP BY category_name ORDER BY n DESC LIMIT 1",
    11: "SELECT category_name, avg(EXTRACT(HOUR FROM checkin_time)) AS avg_hour FROM checkins_nyc GROUP BY category_name",
    12: "WITH top3 AS (SELECT category_name FROM checkins_nyc GROUP BY category_name ORDER BY count(*) DESC, category_name LIMIT 3) SELECT category_name, date_trunc('month', checkin_time) AS month, count(*) AS n FROM checkins_nyc WHERE category_name IN (SELECT category_name FROM top3) AND EXTRACT(YEAR FROM checkin_time) = 2012 GROUP BY 1, 2 ORDER BY 1, 2",
    13: "SELECT place_id, CAST(sum(CASE WHEN EXTRACT(HOUR FROM checkin_time) >= 22 OR EXTRACT(HOUR FROM checkin_time) < 4 THEN 1 ELSE 0 END) AS REAL) / count(*) AS late_share FROM checkins_nyc GROUP BY place_id ORDER BY late_share DESC LIMIT 1",
    14: "SELECT user_id, category_name, count(*) AS n FROM checkins_nyc WHERE user_id IN ('1', '2', '3', '4', '5') GROUP BY 1, 2",
    15: "SELECT latitude, longitude FROM checkins_nyc WHERE category_name = 'Laundromat'",
    16: "SELECT latitude, longitude FROM checkins_nyc WHERE category_name = 'Gym'",
    17: "SELECT * FROM checkins_nyc WHERE ST_DWithin(ST_MakePoint(longitude, latitude), ST_MakePoint(-73.7781, 40.6413), 2000)",
    18: "SELECT neighborhood, count(*) FROM checkins_nyc WHERE neighborhood IN ('Midtown', 'Downtown') GROUP BY neighborhood",
    19: "SELECT borough, category_name, count(*) FROM checkins_nyc GROUP BY 1, 2",
    20: "SELECT 'morning' AS period, count(*) FROM checkins_nyc WHERE category_name = 'Central Park' AND EXTRACT(HOUR FROM checkin_time) < 12 UNION ALL SELECT 'evening', count(*) FROM checkins_nyc WHERE category_name = 'Central Park' AND EXTRACT(HOUR FROM checkin_time) >= 18",
    21: "SELECT * FROM checkins_nyc WHERE category_name = 'Pizza Joints'",
    22: "SELECT * FROM checkins_nyc WHERE checkin_time >= '2015-02-01 00:00:00' AND checkin_time < '2015-03-01 00:00:00'",
    23: "SELECT place_id, count(*) AS n FROM checkins_nyc WHERE category_name = 'Subway Station' GROUP BY place_id ORDER BY n DESC LIMIT 1",
    24: "SELECT * FROM checkins_nyc WHERE place_id IN (SELECT place_id FROM checkins_nyc GROUP BY place_id HAVING count(*) > 1000)",
    25: "SELECT count(*) FROM checkins_nyc WHERE date_trunc('day', checkin_time) = '2012-12-31 00:00:00'",
    26: "SELECT * FROM checkins_nyc WHERE checkin_time >= '2012-11-24 00:00:00' AND checkin_time < '2012-11-25 00:00:00'",
    27: "SELECT season(checkin_time) AS season, count(*) FROM checkins_nyc GROUP BY 1",
    28: "SELECT place_id, count(*) AS n FROM checkins_nyc WHERE EXTRACT(HOUR FROM checkin_time) BETWEEN 11 AND 2 GROUP BY place_id ORDER BY n DESC LIMIT 10",
    29: "SELECT date_trunc('month', checkin_time) AS month, count(*) AS n FROM checkins_nyc WHERE category_name IN ('Bar', 'Nightclub', 'Music Venue') GROUP BY 1 ORDER BY 1",
    30: "SELECT EXTRACT(HOUR FROM checkin_time) AS hour, count(*) AS n FROM checkins_nyc GROUP BY 1 ORDER BY 1",
    31: "SELECT 'NYC' AS city, category_name, count(*) FROM checkins_nyc GROUP BY 2 UNION ALL SELECT category_name, count(*) FROM checkins_tokyo GROUP BY 1",
    32: "SELECT count(*) FROM checkins_nyc WHERE EXTRACT(HOUR FROM checkin_time) >= 22 AND EXTRACT(HOUR FROM checkin_time) < 4",
    33: "SELECT city, count(*) / count(DISTINCT place_id) FROM checkins_nyc GROUP BY city",
    34: "SELECT count(*) FROM checkins_nyc WHERE category_name = 'Train Station'",
    35: "SELECT n.category_name, count(*) FROM checkins_nyc n JOIN checkins_tokyo t ON n.user_id = t.user_id WHERE EXTRACT(DOW FROM n.checkin_time) IN (0, 6) GROUP BY 1",
}

# what the desk-scale replay run should score (Q24's naive SQL keeps the
# question's literal 1,000 threshold, which no fixture place reaches, so it
# diverges from the full-data verdict fixture there)
EXPECTED_NAIVE_CORRECT = {2, 3, 5, 6, 8, 12, 22, 29, 30}
AGENTIC_IDS = (15, 16, 19, 29, 30, 34)


def write_scripts(scripts: dict, directory: Path):
    directory.mkdir(parents=True, exist_ok=True)
    for qid, entries in scripts.items():
        path = directory / f"q{qid:02d}.jsonl"
        path.write_text(
            "\n".join(json.dumps(e) for e in entries) + "\n", encoding="utf-8"
        )


def main():
    tmp = Path(tempfile.mkdtemp(prefix="geoagent-replays-"))
    try:
        paths = write_fixture_dataset(tmp / "data")
        store = CheckinStore(artifact_root=tmp / "arts")
        for table, p in paths.items():
            store.ingest_checkins(p, table)

        agentic = agentic_scripts(store)
        write_scripts(agentic, OUT / "agentic")
        naive = {qid: [sqlgen(sql)] for qid, sql in NAIVE_SQL.items()}
        write_scripts(naive, OUT / "naive")

        # verify the shipped scripts behave as documented
        kb = KnowledgeBase()
        questions = load_suite()
        by_id = {q.id: q for q in questions}

        agentic_report = run_suite(
            "agentic", [by_id[i] for i in AGENTIC_IDS],
            store=store, knowledge=kb, artifact_root=tmp / "arts",
            session_prefix="verify",
        )
        bad = [v for v in agentic_report.verdicts if not v.correct]
        assert not bad, f"agentic replay failures: {[(v.question_id, v.reason) for v in bad]}"

        naive_report = run_suite(
            "naive", questions,
            store=store, knowledge=kb, artifact_root=tmp / "arts",
            session_prefix="verify",
        )
        got_correct = {v.question_id for v in naive_report.verdicts if v.correct}
        assert got_correct == EXPECTED_NAIVE_CORRECT, (
            f"naive verdicts changed: got {sorted(got_correct)}, "
            f"expected {sorted(EXPECTED_NAIVE_CORRECT)}"
        )
        assert naive_report.mean_sql_gen_calls == 1.0
        print("agentic verified:", [(v.question_id, v.correct) for v in agentic_report.verdicts])
        print("naive correct set:", sorted(got_correct))
        print("naive mean calls:", naive_report.mean_sql_gen_calls)
        print("scripts written to", OUT)
    finally:
        shutil.rmtree(tmp, ignore_errors=True)


if __name__ == "__main__":
    main()
