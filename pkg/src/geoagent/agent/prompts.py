"""Prompt text assets. These strings are versioned artifacts of this project,
not copied from anywhere; edit with care since replay hashes depend on them."""

SCHEMA_DESCRIPTION = """\
Two tables with an identical schema:

CREATE TABLE checkins_nyc (
  user_id TEXT,
  place_id TEXT,
  latitude REAL,
  longitude REAL,
  category_name TEXT,
  checkin_time TIMESTAMP
);
CREATE TABLE checkins_tokyo (same columns);

Dialect: SELECT-only. Supported: date_trunc('month'|'day'|'hour', ts),
EXTRACT(HOUR|DOW|MONTH|YEAR FROM ts), ILIKE, CASE, BETWEEN, WITH (CTEs),
UNION ALL. There are NO geodesic/PostGIS functions; use latitude/longitude
BETWEEN bounds for spatial filters."""

NAIVE_SQL_PROMPT = """\
### Task
Generate a single SQL query that answers the question below.

### Database Schema
{schema}

### Question
{question}

### Answer
Return exactly one SQL SELECT statement and nothing else.
"""

PLANNER_SYSTEM = """\
You are a data analyst agent answering questions about check-in data by
working in steps. Available tools:

- get_database_schema: args {{"table": "<optional table name>"}} -> tables, columns, 3 sample rows
- generate_sql_query: args {{"request": "<plain-language data request>", "knowledge": {{<optional facts to include>}}}} -> one SQL SELECT from the SQL model
- execute_on_database: args {{"sql": "<SELECT statement>"}} -> runs it, saves the full result, returns up to 3 preview rows
- read_file: args {{"result_id": "<id>", "offset": 0, "limit": 50}} -> pages rows from a saved result
- plot_results: args {{"result_id": "<id>", "kind": "line"|"bar", "x": "<col>", "y": "<col>", "series": "<optional col>", "title": "<text>"}} -> saves an SVG chart
- map_results: args {{"result_id": "<id>", "kind": "points"|"heatmap", "title": "<text>"}} -> saves an HTML map from latitude/longitude rows

Respond with exactly this format (one action per turn):
Thought: <reasoning>
Action: <tool name>
Action Input: <JSON object>

Or, when done:
Final Answer: <clear, structured answer for the user>

Guidance: ground yourself in the schema before generating SQL. If a query
errors or returns nothing, refine it: discover real category labels with
SELECT DISTINCT category_name ... ILIKE '%term%', broaden categories, or use
latitude/longitude bounding boxes for places. Give up on a step after
{max_retries} failed tries and use what you have. Visualize results when a
map or chart would help (heatmaps for locations, line plots for trends).
"""

SQLGEN_PROMPT = """\
### Task
Generate a single SQL query for this request: {request}

### Database Schema
{schema}

### Additional facts
{knowledge}

### Answer
Return exactly one SQL SELECT statement and nothing else.
"""

SUMMARY_PROMPT = """\
Write the final answer for the user's question based on the executed results.

Question: {question}

Result digest:
{digest}

Artifacts produced: {artifacts}
{extra}
Write a concise, structured summary that highlights peaks, patterns, and
comparisons. State concrete numbers from the digest.
"""

DAYPART_INSTRUCTION = """\
Organize the hour-of-day findings into these dayparts: Late Night (0-4 AM),
Early Morning (5-7 AM), Morning (8-11 AM), Midday (12-3 PM), Afternoon
(4-6 PM), Evening (7-11 PM).
"""
