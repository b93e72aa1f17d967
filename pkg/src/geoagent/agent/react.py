"""The plan-act-observe agent: six tools, lint-guarded execution, retry hints,
observation budgets, and a JSON trajectory export per run."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from ..datastore import (
    CheckinStore,
    DatastoreError,
    SqlExecutionError,
    UnknownResultError,
    UnknownTableError,
)
from ..gateway import CompletionRequest, GatewayError, LlmGateway
from ..knowledge import KnowledgeBase
from ..sqlguard import has_errors, lint
from ..viz import (
    MAP_KINDS,
    PLOT_KINDS,
    VisualizationSpec,
    VizError,
    append_artifact_index,
    choose_visualization,
    render_map,
    render_plot,
)
from .actions import FINAL_ANSWER, Action, AgentStep, parse_action, strip_code_fences
from .prompts import PLANNER_SYSTEM, SCHEMA_DESCRIPTION, SQLGEN_PROMPT

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 12
DEFAULT_MAX_RETRIES = 3
DEFAULT_OBSERVATION_LIMIT = 2000

RETRY_HINT = (
    "Retry with refinements: rephrase the request, broaden categories "
    "(discover labels with DISTINCT + ILIKE), or substitute bounding boxes."
)


@dataclass
class Artifact:
    id: str
    kind: str  # csv | plot | map
    path: str
    title: str = ""
    source_result_id: str | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "path": self.path,
            "title": self.title,
            "source_result_id": self.source_result_id,
        }


@dataclass
class AgentOutcome:
    answer: str
    artifacts: list[Artifact]
    trajectory: list[AgentStep]
    sql_gen_calls: int
    succeeded: bool
    trajectory_id: str | None = None
    result_ids: list[str] = field(default_factory=list)


def truncate_observation(text: str, limit: int) -> str:
    raw = text.encode("utf-8")
    if len(raw) <= limit:
        return text
    cut = raw[:limit].decode("utf-8", errors="ignore")
    return cut + " …[truncated]"


class ReactAgent:
    def __init__(
        self,
        store: CheckinStore,
        gateway: LlmGateway,
        knowledge: KnowledgeBase,
        session: str,
        session_dir: str | Path,
        budget: int = DEFAULT_BUDGET,
        max_retries: int = DEFAULT_MAX_RETRIES,
        observation_limit: int = DEFAULT_OBSERVATION_LIMIT,
        lint_extra_functions=None,
    ):
        if budget < 1:
            raise ValueError("budget must be >= 1")
        self.store = store
        self.gateway = gateway
        self.knowledge = knowledge
        self.session = session
        self.session_dir = Path(session_dir)
        self.budget = budget
        self.max_retries = max_retries
        self.observation_limit = observation_limit
        self.lint_extra_functions = lint_extra_functions
        self.artifacts: list[Artifact] = []
        self.result_ids: list[str] = []
        self.sql_gen_calls = 0
        self._artifact_counters: dict[str, int] = {}

    # -- main loop -----------------------------------------------------------

    def run(self, question: str) -> AgentOutcome:
        transcript = [
            PLANNER_SYSTEM.format(max_retries=self.max_retries),
            f"Question: {question}",
        ]
        steps: list[AgentStep] = []
        answer = ""
        succeeded = False
        consecutive_parse_errors = 0
        failing_tool: str | None = None
        fail_count = 0

        for index in range(self.budget):
            prompt = "\n\n".join(transcript)
            try:
                completion = self.gateway.complete(
                    CompletionRequest(role="planner", prompt=prompt, session=self.session)
                )
            except GatewayError as exc:
                answer = f"aborted: planner backend failed ({exc})"
                break

            action = parse_action(completion)
            transcript.append(completion.strip())

            if not action.ok:
                consecutive_parse_errors += 1
                observation = (
                    f"Could not parse that response ({action.error}). "
                    "Reply with the documented Thought/Action/Action Input format, "
                    "or 'Final Answer:'."
                )
                steps.append(AgentStep(index, action.thought, action, observation, "parse_error"))
                transcript.append(f"Observation: {observation}")
                if consecutive_parse_errors >= 3:
                    answer = "aborted: three consecutive unparseable planner responses"
                    break
                continue
            consecutive_parse_errors = 0

            if action.tool == FINAL_ANSWER:
                answer = action.args.get("text", "")
                succeeded = True
                steps.append(AgentStep(index, action.thought, action, "final answer delivered", "ok"))
                break

            observation, status, retryable = self.dispatch_tool(action)
            observation = truncate_observation(observation, self.observation_limit)
            steps.append(AgentStep(index, action.thought, action, observation, status))
            transcript.append(f"Observation: {observation}")

            if retryable:
                if failing_tool == action.tool:
                    fail_count += 1
                else:
                    failing_tool, fail_count = action.tool, 1
                if fail_count >= self.max_retries:
                    transcript.append(
                        f"Observation: the retry budget for {action.tool} is exhausted "
                        f"({self.max_retries}); take a different approach or give a Final Answer."
                    )
            else:
                failing_tool, fail_count = None, 0
        else:
            answer = answer or "stopped: step budget exhausted before a final answer"

        outcome = AgentOutcome(
            answer=answer,
            artifacts=list(self.artifacts),
            trajectory=steps,
            sql_gen_calls=self.sql_gen_calls,
            succeeded=succeeded,
            result_ids=list(self.result_ids),
        )
        outcome.trajectory_id = self._export_trajectory(question, outcome)
        return outcome

    # -- dispatch --------------------------------------------------------------

    def dispatch_tool(self, action: Action) -> tuple[str, str, bool]:
        """Returns (observation, status, retryable); tool errors never raise."""
        handler = {
            "get_database_schema": self._tool_schema,
            "generate_sql_query": self._tool_generate_sql,
            "execute_on_database": self._tool_execute,
            "read_file": self._tool_read_file,
            "plot_results": self._tool_plot,
            "map_results": self._tool_map,
        }.get(action.tool)
        if handler is None:
            return f"unknown tool '{action.tool}'", "tool_error", False
        try:
            return handler(action.args)
        except Exception as exc:  # last-resort guard: the loop must survive
            logger.exception("tool %s crashed", action.tool)
            return f"tool {action.tool} failed unexpectedly: {exc}", "tool_error", True

    def _tool_schema(self, args: dict):
        try:
            snapshot = self.store.get_schema(args.get("table"))
        except UnknownTableError as exc:
            return str(exc), "tool_error", True
        lines = []
        for name, columns in snapshot.tables:
            cols = ", ".join(f"{c} {t}" for c, t in columns)
            lines.append(f"{name}({cols})")
            for row in snapshot.samples.get(name, []):
                lines.append(f"  sample: {row}")
        return "\n".join(lines) or "no tables", "ok", False

    def _tool_generate_sql(self, args: dict):
        request = args.get("request", "")
        if not request:
            return "generate_sql_query needs a 'request'", "tool_error", True
        knowledge = args.get("knowledge")
        prompt = SQLGEN_PROMPT.format(
            request=request,
            schema=SCHEMA_DESCRIPTION,
            knowledge=json.dumps(knowledge, sort_keys=True) if knowledge else "none",
        )
        try:
            completion = self.gateway.complete(
                CompletionRequest(role="sql_generator", prompt=prompt, session=self.session)
            )
        except GatewayError as exc:
            return f"SQL generation failed: {exc}", "tool_error", True
        self.sql_gen_calls += 1
        sql = strip_code_fences(completion)
        return f"Generated SQL:\n{sql}", "ok", False

    def _tool_execute(self, args: dict):
        sql = strip_code_fences(args.get("sql", ""))
        if not sql:
            return "execute_on_database needs 'sql'", "tool_error", True
        schema = self.store.get_schema()
        diagnostics = lint(sql, schema, extra_functions=self.lint_extra_functions)
        if has_errors(diagnostics):
            rendered = "; ".join(
                f"{d.rule_id} {d.severity}: {d.message}"
                + (f" (suggestion: {d.suggestion})" if d.suggestion else "")
                for d in diagnostics
                if d.severity == "error"
            )
            return f"SQL blocked by lint: {rendered}. {RETRY_HINT}", "tool_error", True

        try:
            outcome = self.store.execute_sql(sql, self.session)
        except SqlExecutionError as exc:
            return f"SQL execution error: {exc}. {RETRY_HINT}", "tool_error", True
        except DatastoreError as exc:
            return f"SQL rejected: {exc}", "tool_error", True

        self.result_ids.append(outcome.result_id)
        self._register_artifact("csv", Path(outcome.result_path).name, outcome.result_id, "query result", existing_path=outcome.result_path)
        preview = ", ".join(str(row) for row in outcome.preview)
        observation = (
            f"result_id={outcome.result_id} rows={outcome.row_count} "
            f"columns={outcome.columns} preview: [{preview}]"
        )
        warnings = [d for d in diagnostics if d.severity == "warning"]
        if warnings:
            observation += " | lint warnings: " + "; ".join(
                f"{d.rule_id}: {d.message}" for d in warnings
            )
        if outcome.row_count == 0:
            observation += f" | Result is empty. {RETRY_HINT}"
            return observation, "ok", True
        return observation, "ok", False

    def _tool_read_file(self, args: dict):
        result_id = args.get("result_id", "")
        offset = int(args.get("offset", 0))
        limit = int(args.get("limit", 50))
        try:
            page = self.store.read_result_file(self.session, result_id, offset, limit)
        except UnknownResultError as exc:
            return str(exc), "tool_error", True
        if not page.rows:
            return f"empty page (total {page.total} rows)", "ok", False
        body = "\n".join(str(row) for row in page.rows)
        return f"rows [{offset}, {offset + len(page.rows)}) of {page.total}:\n{body}", "ok", False

    def _load_result(self, args: dict):
        result_id = args.get("result_id", "")
        page = self.store.read_result_file(self.session, result_id, 0, 10**6)
        return result_id, page

    def _tool_plot(self, args: dict):
        try:
            result_id, page = self._load_result(args)
        except UnknownResultError as exc:
            return str(exc), "tool_error", True
        kind = args.get("kind")
        if kind is None:
            guess = choose_visualization(page.columns, page.rows)
            kind = guess if guess in PLOT_KINDS else "line"
        if kind not in PLOT_KINDS:
            return f"plot_results cannot draw kind '{kind}'", "tool_error", True
        artifact_id = self._next_artifact_id("plot")
        spec = VisualizationSpec(
            kind=kind,
            x=args.get("x"),
            y=args.get("y"),
            series=args.get("series"),
            title=args.get("title", ""),
        )
        try:
            result = render_plot(spec, page.columns, page.rows, self.session_dir / f"{artifact_id}.svg")
        except VizError as exc:
            return f"plot failed: {exc}", "tool_error", True
        self._register_artifact("plot", f"{artifact_id}.svg", result_id, spec.title, artifact_id=artifact_id)
        return (
            f"saved plot {artifact_id} ({kind}, {result.meta['rows']} rows) to {result.path}",
            "ok",
            False,
        )

    def _tool_map(self, args: dict):
        try:
            result_id, page = self._load_result(args)
        except UnknownResultError as exc:
            return str(exc), "tool_error", True
        kind = args.get("kind")
        if kind is None:
            guess = choose_visualization(page.columns, page.rows)
            kind = guess if guess in MAP_KINDS else "points"
        if kind not in MAP_KINDS:
            return f"map_results cannot draw kind '{kind}'", "tool_error", True
        artifact_id = self._next_artifact_id("map")
        spec = VisualizationSpec(
            kind=kind,
            lat=args.get("lat"),
            lon=args.get("lon"),
            title=args.get("title", ""),
        )
        try:
            result = render_map(spec, page.columns, page.rows, self.session_dir / f"{artifact_id}.html")
        except VizError as exc:
            return f"map failed: {exc}", "tool_error", True
        self._register_artifact("map", f"{artifact_id}.html", result_id, spec.title, artifact_id=artifact_id)
        extra = f", bins sum {result.meta['bins_total']}" if kind == "heatmap" else ""
        return (
            f"saved map {artifact_id} ({kind}, {result.meta['accepted']} points{extra}) to {result.path}",
            "ok",
            False,
        )

    # -- artifact bookkeeping ---------------------------------------------------

    def _next_artifact_id(self, prefix: str) -> str:
        n = self._artifact_counters.get(prefix, 0)
        while True:
            n += 1
            candidate = f"{prefix}-{n:04d}"
            suffix = ".svg" if prefix == "plot" else ".html"
            if not (self.session_dir / f"{candidate}{suffix}").exists():
                self._artifact_counters[prefix] = n
                return candidate

    def _register_artifact(self, kind, filename, source_result_id, title, artifact_id=None, existing_path=None):
        artifact_id = artifact_id or Path(filename).stem
        path = existing_path or str(self.session_dir / filename)
        artifact = Artifact(
            id=artifact_id,
            kind=kind,
            path=path,
            title=title,
            source_result_id=source_result_id,
        )
        self.artifacts.append(artifact)
        append_artifact_index(self.session_dir, artifact.to_dict())

    # -- trajectory export --------------------------------------------------------

    def _export_trajectory(self, question: str, outcome: AgentOutcome) -> str:
        self.session_dir.mkdir(parents=True, exist_ok=True)
        existing = sorted(self.session_dir.glob("trajectory-*.json"))
        next_id = 1
        if existing:
            last = existing[-1].stem.split("-")[-1]
            next_id = int(last) + 1 if last.isdigit() else len(existing) + 1
        trajectory_id = f"trajectory-{next_id:04d}"
        payload = {
            "trajectory_id": trajectory_id,
            "question": question,
            "mode": "agentic",
            "answer": outcome.answer,
            "succeeded": outcome.succeeded,
            "sql_gen_calls": outcome.sql_gen_calls,
            "steps": [s.to_dict() for s in outcome.trajectory],
            "artifacts": [a.to_dict() for a in outcome.artifacts],
            "result_ids": outcome.result_ids,
        }
        path = self.session_dir / f"{trajectory_id}.json"
        path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        return trajectory_id


def run_agent(
    question: str,
    store: CheckinStore,
    gateway: LlmGateway,
    knowledge: KnowledgeBase,
    session: str,
    session_dir: str | Path,
    budget: int = DEFAULT_BUDGET,
    **kwargs,
) -> AgentOutcome:
    agent = ReactAgent(
        store, gateway, knowledge, session, session_dir, budget=budget, **kwargs
    )
    return agent.run(question)
