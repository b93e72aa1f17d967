"""Benchmark suite: 35 tagged questions, per-question oracles, suite runner,
and the category aggregation that mirrors the published scoring tables."""

from __future__ import annotations

import json
import logging
import traceback
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..agent import run_agent, run_naive
from ..datastore import CheckinStore
from ..gateway import LlmGateway, ReplayBackend, load_replay_script
from ..knowledge import KnowledgeBase
from . import comparators

logger = logging.getLogger(__name__)

CATEGORY_ORDER = ("B", "A", "T", "M", "S", "E", "X")
CATEGORY_LABELS = {
    "B": "Basic Filtering",
    "A": "Aggregation/Ranking",
    "T": "Temporal Reasoning",
    "M": "Multi-step Reasoning",
    "S": "Spatial/Geographic",
    "E": "External Knowledge",
    "X": "Multi-table/Dataset",
}
EXPECTED_TAG_COUNTS = {"B": 6, "A": 26, "T": 19, "M": 7, "S": 7, "E": 6, "X": 5}
SYSTEMS = ("naive", "agentic")


class SuiteValidationError(ValueError):
    pass


@dataclass(frozen=True)
class BenchmarkQuestion:
    id: int
    text: str
    categories: tuple[str, ...]
    oracle: dict


@dataclass
class Verdict:
    question_id: int
    system: str
    correct: bool
    reason: str
    sql_gen_calls: int = 0

    def to_dict(self) -> dict:
        return {
            "question_id": self.question_id,
            "system": self.system,
            "correct": self.correct,
            "reason": self.reason,
            "sql_gen_calls": self.sql_gen_calls,
        }


@dataclass
class SystemResult:
    """What a pipeline produced for one question, flattened for scoring."""

    columns: list[str] = field(default_factory=list)
    rows: list[list] = field(default_factory=list)
    answer: str | None = None
    artifacts: list[str] = field(default_factory=list)  # artifact kinds
    succeeded: bool = False
    sql_gen_calls: int = 0


@dataclass
class RunReport:
    system: str
    verdicts: list[Verdict]
    by_category: dict[str, tuple[int, int]]
    overall: tuple[int, int]
    mean_sql_gen_calls: float
    mean_defined: bool

    def to_dict(self) -> dict:
        return {
            "system": self.system,
            "verdicts": [v.to_dict() for v in self.verdicts],
            "by_category": {
                cat: {
                    "correct": c,
                    "total": t,
                    "rate": format_rate(c, t),
                }
                for cat, (c, t) in self.by_category.items()
            },
            "overall": {
                "correct": self.overall[0],
                "total": self.overall[1],
                "rate": format_rate(*self.overall),
            },
            "mean_sql_gen_calls": f"{self.mean_sql_gen_calls:.2f}",
            "mean_defined": self.mean_defined,
        }


def format_rate(correct: int, total: int) -> str:
    if total == 0:
        return "n/a"
    return f"{100 * correct / total:.1f}%"


def _data_path(filename: str) -> Path:
    return Path(str(resources.files("geoagent.bench").joinpath("data", filename)))


def suite_path() -> Path:
    return _data_path("suite.json")


def replays_path(system: str) -> Path:
    return _data_path("replays") / system


def load_suite(path: str | Path | None = None) -> list[BenchmarkQuestion]:
    """Load and validate the 35-question suite; lists every mismatch on failure."""
    path = Path(path) if path else suite_path()
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    questions = [
        BenchmarkQuestion(
            id=q["id"],
            text=q["text"],
            categories=tuple(q["categories"]),
            oracle=q["oracle"],
        )
        for q in raw["questions"]
    ]

    problems: list[str] = []
    ids = [q.id for q in questions]
    if len(questions) != 35:
        problems.append(f"expected 35 questions, found {len(questions)}")
    if len(set(ids)) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        problems.append(f"duplicate question ids: {dupes}")
    for q in questions:
        if not q.text.strip():
            problems.append(f"q{q.id}: empty text")
        if not q.categories:
            problems.append(f"q{q.id}: no categories")
        bad = [c for c in q.categories if c not in CATEGORY_ORDER]
        if bad:
            problems.append(f"q{q.id}: unknown categories {bad}")
        if not q.oracle.get("kind"):
            problems.append(f"q{q.id}: missing oracle kind")
    counts = {c: 0 for c in CATEGORY_ORDER}
    for q in questions:
        for c in q.categories:
            if c in counts:
                counts[c] += 1
    for cat, expected in EXPECTED_TAG_COUNTS.items():
        if counts[cat] != expected:
            problems.append(f"tag count {cat}: {counts[cat]} != expected {expected}")
    if problems:
        raise SuiteValidationError("; ".join(problems))
    return questions


def load_verdict_fixture(path: str | Path | None = None) -> dict[str, dict[int, bool]]:
    path = Path(path) if path else _data_path("table1_verdicts.json")
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    return {
        system: {int(k): bool(v) for k, v in marks.items()}
        for system, marks in raw.items()
    }


# -- aggregation ---------------------------------------------------------------


def aggregate(
    correct_by_id: dict[int, bool], questions: list[BenchmarkQuestion]
) -> dict:
    """Category table: a multi-tag question counts once per tag."""
    missing = [q.id for q in questions if q.id not in correct_by_id]
    if missing:
        raise SuiteValidationError(f"verdicts missing for questions: {missing}")
    by_category = {}
    for cat in CATEGORY_ORDER:
        tagged = [q for q in questions if cat in q.categories]
        correct = sum(1 for q in tagged if correct_by_id[q.id])
        by_category[cat] = (correct, len(tagged))
    overall = (
        sum(1 for q in questions if correct_by_id[q.id]),
        len(questions),
    )
    return {"by_category": by_category, "overall": overall}


# -- per-question scoring ---------------------------------------------------------


def check_question(
    question: BenchmarkQuestion,
    result: SystemResult,
    *,
    store: CheckinStore,
    system: str,
    scale: str = "desk",
) -> Verdict:
    oracle = question.oracle
    if not result.succeeded:
        return Verdict(
            question.id, system, False,
            f"system failed before scoring: {result.answer or 'no result'}",
            result.sql_gen_calls,
        )

    sql = oracle["reference_sql"]
    params = (oracle.get("params") or {}).get(scale)
    if params:
        sql = sql.format(**params)
    try:
        _, ref_rows = store.query(sql)
    except Exception as exc:
        return Verdict(
            question.id, system, False, f"oracle-error: {exc}", result.sql_gen_calls
        )

    kind = oracle["kind"]
    if kind == "rows":
        ok, reason = comparators.multiset_equal(
            ref_rows, result.rows, oracle.get("digits", 6)
        )
    elif kind == "ranked":
        ok, reason = comparators.ranked_equal(
            ref_rows,
            result.rows,
            oracle["k"],
            oracle.get("label_col", 0),
            oracle.get("score_col", 1),
        )
    elif kind == "ranked_per_group":
        ok, reason = comparators.ranked_per_group_equal(
            ref_rows,
            result.rows,
            oracle["k"],
            oracle.get("group_col", 0),
            oracle.get("label_col", 1),
            oracle.get("score_col", 2),
        )
    elif kind == "winner":
        ok, reason = comparators.winner_check(
            ref_rows, result.rows, result.answer, oracle["candidates"]
        )
    else:
        return Verdict(
            question.id, system, False,
            f"oracle-error: unknown oracle kind '{kind}'", result.sql_gen_calls,
        )

    required = oracle.get("require_artifact")
    if ok and required and required not in result.artifacts:
        ok = False
        reason = f"required {required} artifact missing (have: {result.artifacts or 'none'})"

    return Verdict(question.id, system, ok, reason, result.sql_gen_calls)


# -- suite runner ------------------------------------------------------------------


def _result_from_naive(outcome, store: CheckinStore, session: str) -> SystemResult:
    if not outcome.succeeded:
        return SystemResult(answer=outcome.error, succeeded=False, sql_gen_calls=1)
    page = store.read_result_file(session, outcome.execution.result_id, 0, 10**6)
    return SystemResult(
        columns=page.columns,
        rows=page.rows,
        answer=None,
        artifacts=[],
        succeeded=True,
        sql_gen_calls=1,
    )


def _result_from_agent(outcome, store: CheckinStore, session: str) -> SystemResult:
    rows: list[list] = []
    columns: list[str] = []
    if outcome.result_ids:
        page = store.read_result_file(session, outcome.result_ids[-1], 0, 10**6)
        rows, columns = page.rows, page.columns
    return SystemResult(
        columns=columns,
        rows=rows,
        answer=outcome.answer,
        artifacts=[a.kind for a in outcome.artifacts],
        succeeded=outcome.succeeded,
        sql_gen_calls=outcome.sql_gen_calls,
    )


def run_suite(
    system: str,
    questions: list[BenchmarkQuestion],
    *,
    store: CheckinStore,
    knowledge: KnowledgeBase,
    replay_dir: str | Path | None = None,
    artifact_root: str | Path | None = None,
    session_prefix: str = "bench",
    scale: str = "desk",
    budget: int = 12,
    gateway_factory=None,
) -> RunReport:
    """Run one system over the questions; per-question crashes become verdicts."""
    if system not in SYSTEMS:
        raise ValueError(f"unknown system '{system}'")
    replay_dir = Path(replay_dir) if replay_dir else replays_path(system)
    # keep result CSVs and viz artifacts under one session directory
    artifact_root = Path(artifact_root) if artifact_root else Path(store.artifact_root)

    verdicts: list[Verdict] = []
    for question in questions:
        session = f"{session_prefix}-{system}-q{question.id:02d}"
        verdicts.append(
            _run_question(
                system, question, session,
                store=store, knowledge=knowledge, replay_dir=replay_dir,
                artifact_root=artifact_root, scale=scale, budget=budget,
                gateway_factory=gateway_factory,
            )
        )

    correct_by_id = {v.question_id: v.correct for v in verdicts}
    agg = aggregate(correct_by_id, questions)
    total_calls = sum(v.sql_gen_calls for v in verdicts)
    mean = round(total_calls / len(verdicts), 2) if verdicts else 0.0
    return RunReport(
        system=system,
        verdicts=verdicts,
        by_category=agg["by_category"],
        overall=agg["overall"],
        mean_sql_gen_calls=mean,
        mean_defined=bool(verdicts),
    )


def _run_question(
    system, question, session, *, store, knowledge, replay_dir,
    artifact_root, scale, budget, gateway_factory,
) -> Verdict:
    try:
        if gateway_factory is not None:
            gateway = gateway_factory(question, session)
        else:
            script = Path(replay_dir) / f"q{question.id:02d}.jsonl"
            if not script.exists():
                return Verdict(
                    question.id, system, False,
                    f"no replay script at {script}", 0,
                )
            backend = ReplayBackend(load_replay_script(script))
            gateway = LlmGateway({"planner": backend, "sql_generator": backend})
        gateway.open_session(session)
        gateway.start_question(session, question.id)

        if system == "naive":
            outcome = run_naive(question.text, store, gateway, session)
            result = _result_from_naive(outcome, store, session)
        else:
            outcome = run_agent(
                question.text,
                store=store,
                gateway=gateway,
                knowledge=knowledge,
                session=session,
                session_dir=Path(artifact_root) / session,
                budget=budget,
            )
            result = _result_from_agent(outcome, store, session)

        gw_report = gateway.usage_report(session)
        gw_calls = gw_report.role_counts.get("sql_generator", 0)
        if gw_calls != result.sql_gen_calls:
            return Verdict(
                question.id, system, False,
                f"accounting mismatch: outcome says {result.sql_gen_calls} "
                f"sql_generator calls, gateway says {gw_calls}",
                gw_calls,
            )
        return check_question(question, result, store=store, system=system, scale=scale)
    except Exception as exc:
        logger.debug("question %s crashed: %s", question.id, traceback.format_exc())
        return Verdict(question.id, system, False, f"suite-runner error: {exc}", 0)


# -- rendered report -----------------------------------------------------------------


def render_report_markdown(
    questions: list[BenchmarkQuestion], reports: dict[str, RunReport]
) -> str:
    mark = {True: "+", False: "x"}
    systems = [s for s in SYSTEMS if s in reports]
    lines = ["# Benchmark report", "", "## Per-question correctness", ""]
    header = "| # | Question | Categories |" + "".join(f" {s} |" for s in systems)
    lines.append(header)
    lines.append("|---|---|---|" + "---|" * len(systems))
    verdict_maps = {
        s: {v.question_id: v for v in reports[s].verdicts} for s in systems
    }
    for q in questions:
        cells = ""
        for s in systems:
            v = verdict_maps[s].get(q.id)
            cells += f" {mark[v.correct] if v else '?'} |"
        lines.append(f"| {q.id} | {q.text} | {', '.join(q.categories)} |{cells}")
    totals = "| | **Accuracy (correct/35)** | |"
    for s in systems:
        c, t = reports[s].overall
        totals += f" **{c}/{t} ({format_rate(c, t)})** |"
    lines.append(totals)

    lines += ["", "## Success rates by category", ""]
    lines.append("| Category |" + "".join(f" {s} |" for s in systems))
    lines.append("|---|" + "---|" * len(systems))
    for cat in CATEGORY_ORDER:
        row = f"| {CATEGORY_LABELS[cat]} ({cat}) |"
        for s in systems:
            c, t = reports[s].by_category[cat]
            row += f" {c}/{t} ({format_rate(c, t)}) |"
        lines.append(row)
    overall_row = "| Overall |"
    for s in systems:
        c, t = reports[s].overall
        overall_row += f" {c}/{t} ({format_rate(c, t)}) |"
    lines.append(overall_row)

    lines += ["", "## Call accounting", ""]
    for s in systems:
        lines.append(
            f"- {s}: mean sql_generator calls per question = "
            f"{reports[s].mean_sql_gen_calls:.2f}"
        )
    return "\n".join(lines) + "\n"
