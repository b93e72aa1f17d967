import json

import pytest

from geoagent.agent import (
    FINAL_ANSWER,
    build_borough_case,
    build_summary_prompt,
    parse_action,
    run_agent,
    run_naive,
    strip_code_fences,
    summarize,
    truncate_observation,
)
from geoagent.gateway import LlmGateway, ReplayBackend, ReplayEntry

LAUNDRY_SQL = "SELECT latitude, longitude FROM checkins_nyc WHERE category_name = 'Laundry Service'"
DISCOVERY_SQL = (
    "SELECT DISTINCT category_name FROM checkins_nyc "
    "WHERE category_name ILIKE '%laundry%' OR category_name ILIKE '%wash%'"
)


def planner(text):
    return ReplayEntry(role="planner", completion=text)


def sqlgen(text):
    return ReplayEntry(role="sql_generator", completion=text)


def make_gateway(entries):
    backend = ReplayBackend(entries)
    return LlmGateway({"planner": backend, "sql_generator": backend})


def act(tool, **args):
    return f"Thought: next step\nAction: {tool}\nAction Input: {json.dumps(args)}"


# --- parse_action ---------------------------------------------------------------


def test_parse_canonical_action():
    a = parse_action('Thought: look first\nAction: get_database_schema\nAction Input: {}')
    assert a.ok and a.tool == "get_database_schema" and a.args == {}
    assert a.thought == "look first"


def test_parse_final_answer():
    a = parse_action("Final Answer: Evening exceeded morning by 243 check-ins.")
    assert a.ok and a.tool == FINAL_ANSWER
    assert a.args["text"] == "Evening exceeded morning by 243 check-ins."


def test_parse_unknown_tool():
    a = parse_action("Action: fly_to_moon\nAction Input: {}")
    assert not a.ok and "fly_to_moon" in a.error


def test_parse_malformed_json():
    a = parse_action('Action: execute_on_database\nAction Input: {"sql": }')
    assert not a.ok and "JSON" in a.error


def test_parse_missing_block():
    a = parse_action("I think we should look at the schema first.")
    assert not a.ok


def test_parse_ignores_trailing_prose():
    a = parse_action(
        'Action: read_file\nAction Input: {"result_id": "res-0001"}\n'
        "That will show us the rows."
    )
    assert a.ok and a.args == {"result_id": "res-0001"}


def test_parse_rejects_undeclared_args():
    a = parse_action('Action: read_file\nAction Input: {"result_id": "r", "speed": 11}')
    assert not a.ok and "speed" in a.error


def test_strip_code_fences():
    assert strip_code_fences("```sql\nSELECT 1;\n```") == "SELECT 1"
    assert strip_code_fences("SELECT 2") == "SELECT 2"


def test_truncate_observation_limits_bytes():
    text = "x" * 5000
    out = truncate_observation(text, 2000)
    assert out.endswith("…[truncated]")
    assert len(out.encode()) < 2100


# --- borough CASE builder ----------------------------------------------------------

PAPER_SNIPPET = """
CASE
  WHEN latitude BETWEEN 40.5707 AND 40.7395
   AND longitude BETWEEN -74.0423 AND -73.8334 THEN 'Brooklyn'
  WHEN latitude BETWEEN 40.5091 AND 40.8007
   AND longitude BETWEEN -73.9642 AND -73.7004 THEN 'Queens'
END AS borough
"""


def test_borough_case_matches_reference_snippet(kb):
    fragment = build_borough_case([kb.lookup_bounds("brooklyn"), kb.lookup_bounds("queens")])
    assert fragment.split() == PAPER_SNIPPET.split()


def test_borough_case_single_region(kb):
    fragment = build_borough_case([kb.lookup_bounds("central park")], alias="area")
    assert fragment.count("WHEN") == 1 and fragment.endswith("END AS area")


def test_borough_case_empty():
    with pytest.raises(ValueError):
        build_borough_case([])


def test_borough_case_order_decides_overlap(kb, store):
    b = kb.lookup_bounds("brooklyn")
    q = kb.lookup_bounds("queens")
    lat, lon = 40.7, -73.95
    assert b.contains(lat, lon) and q.contains(lat, lon)  # membership oracle

    point = f"(SELECT {lat} AS latitude, {lon} AS longitude)"
    first = build_borough_case([b, q])
    swapped = build_borough_case([q, b])
    _, rows = store.query(f"SELECT {first} FROM {point}")
    assert rows[0][0] == "Brooklyn"
    _, rows = store.query(f"SELECT {swapped} FROM {point}")
    assert rows[0][0] == "Queens"


# --- naive pipeline -----------------------------------------------------------------


def test_naive_valid_filter_query(store):
    gw = make_gateway([sqlgen("SELECT * FROM checkins_nyc WHERE user_id = '123'")])
    outcome = run_naive("List check-ins made by user 123.", store, gw, "naive-ok")
    assert outcome.succeeded
    _, expected = store.query("SELECT count(*) FROM checkins_nyc WHERE user_id = '123'")
    assert outcome.execution.row_count == expected[0][0]
    assert gw.usage_report("naive-ok").role_counts == {"sql_generator": 1}


def test_naive_hallucinated_column_returns_error(store):
    gw = make_gateway([sqlgen("SELECT venue_name FROM checkins_nyc")])
    outcome = run_naive("Show venues.", store, gw, "naive-bad")
    assert not outcome.succeeded
    assert "venue_name" in outcome.error
    assert gw.usage_report("naive-bad").role_counts == {"sql_generator": 1}


def test_naive_select_one(store):
    gw = make_gateway([sqlgen("```sql\nSELECT 1;\n```")])
    outcome = run_naive("Anything.", store, gw, "naive-one")
    assert outcome.preview == [[1]]


def test_naive_never_retries(store):
    gw = make_gateway([sqlgen("DROP TABLE checkins_nyc")])
    outcome = run_naive("Drop it.", store, gw, "naive-write")
    assert not outcome.succeeded
    assert gw.usage_report("naive-write").role_counts == {"sql_generator": 1}
    _, rows = store.query("SELECT count(*) FROM checkins_nyc")
    assert rows[0][0] > 0


# --- agent loop ----------------------------------------------------------------------


def agent_kwargs(store, kb, tmp_path, session):
    return dict(
        store=store,
        knowledge=kb,
        session=session,
        session_dir=tmp_path / session,
    )


def test_budget_one_without_final_answer(store, kb, tmp_path):
    gw = make_gateway([planner(act("get_database_schema"))])
    outcome = run_agent(
        "Q", gateway=gw, budget=1, **agent_kwargs(store, kb, tmp_path, "agent-b1")
    )
    assert not outcome.succeeded
    assert len(outcome.trajectory) == 1


def test_three_parse_errors_abort(store, kb, tmp_path):
    gw = make_gateway([planner("gibberish")] * 3)
    outcome = run_agent(
        "Q", gateway=gw, **agent_kwargs(store, kb, tmp_path, "agent-parse")
    )
    assert not outcome.succeeded
    assert [s.status for s in outcome.trajectory] == ["parse_error"] * 3


def test_lint_blocks_geodesic_and_feeds_suggestion(store, kb, tmp_path):
    bad_sql = "SELECT * FROM checkins_nyc WHERE ST_DWithin(longitude, latitude, 2000)"
    good_sql = (
        "SELECT * FROM checkins_nyc WHERE latitude BETWEEN 40.6195 AND 40.6631 "
        "AND longitude BETWEEN -73.8255 AND -73.7307"
    )
    gw = make_gateway(
        [
            planner(act("execute_on_database", sql=bad_sql)),
            planner(act("execute_on_database", sql=good_sql)),
            planner("Final Answer: done with the box."),
        ]
    )
    outcome = run_agent(
        "Show check-ins at JFK Airport.",
        gateway=gw,
        **agent_kwargs(store, kb, tmp_path, "agent-jfk"),
    )
    assert outcome.succeeded
    blocked = outcome.trajectory[0]
    assert blocked.status == "tool_error"
    assert "R4" in blocked.observation
    assert "axis-aligned bounding box" in blocked.observation
    # the blocked statement never executed: first persisted result is the good one
    assert outcome.result_ids == ["res-0001"]


def test_agent_subsumes_naive_single_query(store, kb, tmp_path):
    naive_sql = "SELECT category_name, count(*) AS n FROM checkins_nyc GROUP BY 1 ORDER BY n DESC"
    naive_gw = make_gateway([sqlgen(naive_sql)])
    naive_outcome = run_naive("Which category had the most check-ins overall?", store, naive_gw, "subsume-naive")

    gw = make_gateway(
        [
            planner(act("execute_on_database", sql=naive_sql)),
            planner("Final Answer: see the ranking."),
        ]
    )
    outcome = run_agent(
        "Which category had the most check-ins overall?",
        gateway=gw,
        budget=2,
        **agent_kwargs(store, kb, tmp_path, "subsume-agent"),
    )
    assert outcome.succeeded
    executed = [
        s.action.args["sql"]
        for s in outcome.trajectory
        if s.action.tool == "execute_on_database"
    ]
    assert executed == [naive_outcome.sql]


def test_laundromat_trajectory_with_map(store, kb, tmp_path):
    gw = make_gateway(
        [
            planner(act("get_database_schema")),
            planner(act("execute_on_database", sql=DISCOVERY_SQL)),
            planner(act("generate_sql_query", request="latitude and longitude of all check-ins with category_name = 'Laundry Service' in checkins_nyc")),
            sqlgen(LAUNDRY_SQL),
            planner(act("execute_on_database", sql=LAUNDRY_SQL)),
            planner(act("map_results", result_id="res-0002", kind="heatmap", title="Laundromat locations")),
            planner("Final Answer: Mapped all laundromat check-ins (category 'Laundry Service') as a heatmap."),
        ]
    )
    outcome = run_agent(
        "Map the locations of all laundromats.",
        gateway=gw,
        **agent_kwargs(store, kb, tmp_path, "agent-q15"),
    )
    assert outcome.succeeded
    assert outcome.sql_gen_calls == 1
    assert gw.usage_report("agent-q15").role_counts["sql_generator"] == 1
    maps = [a for a in outcome.artifacts if a.kind == "map"]
    assert len(maps) == 1
    assert (tmp_path / "agent-q15" / "map-0001.html").exists()
    # discovery surfaced the real label
    discovery_step = outcome.trajectory[1]
    assert "Laundry Service" in discovery_step.observation


def test_termination_budget_respected(store, kb, tmp_path):
    gw = make_gateway([planner(act("get_database_schema"))] * 4)
    outcome = run_agent(
        "Q", gateway=gw, budget=4, **agent_kwargs(store, kb, tmp_path, "agent-term")
    )
    assert not outcome.succeeded
    assert len(outcome.trajectory) == 4
    assert gw.usage_report("agent-term").role_counts["planner"] == 4


def test_empty_result_gets_discovery_hint(store, kb, tmp_path):
    gw = make_gateway(
        [
            planner(act("execute_on_database", sql="SELECT * FROM checkins_nyc WHERE category_name = 'Laundromat'")),
            planner("Final Answer: nothing found."),
        ]
    )
    outcome = run_agent(
        "Show laundromats.", gateway=gw, **agent_kwargs(store, kb, tmp_path, "agent-empty")
    )
    obs = outcome.trajectory[0].observation
    assert "rows=0" in obs
    assert "Retry with refinements" in obs
    assert "R6" in obs  # lint warned that the literal is not a sampled value


def test_trajectory_export_is_complete(store, kb, tmp_path):
    gw = make_gateway(
        [
            planner(act("execute_on_database", sql="SELECT count(*) FROM checkins_nyc")),
            planner("Final Answer: counted."),
        ]
    )
    outcome = run_agent(
        "How many?", gateway=gw, **agent_kwargs(store, kb, tmp_path, "agent-export")
    )
    path = tmp_path / "agent-export" / f"{outcome.trajectory_id}.json"
    data = json.loads(path.read_text())
    assert data["question"] == "How many?"
    assert len(data["steps"]) == len(outcome.trajectory) == 2
    assert data["succeeded"] is True
    assert data["sql_gen_calls"] == outcome.sql_gen_calls == 0


def test_read_file_beyond_end(store, kb, tmp_path):
    gw = make_gateway(
        [
            planner(act("execute_on_database", sql="SELECT user_id FROM checkins_nyc LIMIT 5")),
            planner(act("read_file", result_id="res-0001", offset=100, limit=5)),
            planner("Final Answer: ok."),
        ]
    )
    outcome = run_agent(
        "Q", gateway=gw, **agent_kwargs(store, kb, tmp_path, "agent-read")
    )
    assert "empty page (total 5 rows)" in outcome.trajectory[1].observation


# --- summarize -------------------------------------------------------------------


def test_summary_prompt_uses_dayparts_for_hourly_results():
    digest = {"columns": ["hour", "n"], "rows": [[h, h + 1] for h in range(24)]}
    prompt = build_summary_prompt("How does activity change?", digest, [])
    for name in ("Late Night", "Early Morning", "Morning", "Midday", "Afternoon", "Evening"):
        assert name in prompt


def test_summary_prompt_plain_for_single_number():
    digest = {"columns": ["count"], "rows": [[227428]]}
    prompt = build_summary_prompt("How many check-ins?", digest, [])
    assert "Late Night" not in prompt
    assert "227428" in prompt


def test_summarize_requires_rows():
    with pytest.raises(ValueError):
        build_summary_prompt("Q", {"columns": [], "rows": []}, [])


def test_summarize_roundtrip():
    scripted = (
        "Activity by daypart: Late Night (0-4 AM): minimal. Early Morning (5-7 AM): rising. "
        "Morning (8-11 AM): peak at 8 AM. Midday (12-3 PM): high. Afternoon (4-6 PM): peak "
        "at 6 PM. Evening (7-11 PM): elevated, tapering toward midnight."
    )
    gw = make_gateway([planner(scripted)])
    digest = {"columns": ["hour", "n"], "rows": [[h, 10] for h in range(24)]}
    out = summarize("How does check-in activity change across different times of day?", digest, [], gw, "sum")
    assert out == scripted


def test_summarize_comparison_digest_carries_both_numbers():
    digest = {"columns": ["city", "n"], "rows": [["NYC", 37], ["Tokyo", 130]]}
    prompt = build_summary_prompt("Which city has more?", digest, [])
    assert "37" in prompt and "130" in prompt
