"""Runtime assembly shared by the CLI and the HTTP service."""

from __future__ import annotations

import threading
from pathlib import Path

from .agent import run_agent, run_naive
from .bench import load_suite
from .config import AppConfig
from .datastore import CheckinStore
from .gateway import (
    GatewayError,
    HttpChatBackend,
    LlmGateway,
    RecordingBackend,
    ReplayBackend,
    load_replay_script,
)
from .knowledge import KnowledgeBase, normalize_term
from .sessions import Session, SessionManager


class AppContext:
    """Owns the store, knowledge base, sessions, and gateway construction."""

    def __init__(self, config: AppConfig):
        self.config = config
        self.store = CheckinStore(
            db_path=config.store_path,
            artifact_root=config.artifact_root,
        )
        self.knowledge = KnowledgeBase(
            geography_path=config.geography_path,
            holidays_path=config.holidays_path,
            synonyms_path=config.synonyms_path,
        )
        self.sessions = SessionManager(config.artifact_root)
        self._session_locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()
        self._question_index: dict[str, int] | None = None

    def close(self) -> None:
        self.store.close()

    def session_lock(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._session_locks.setdefault(session_id, threading.Lock())

    # -- gateway construction ------------------------------------------------

    def _replay_script_for(self, mode: str, question_text: str):
        if self._question_index is None:
            suite = load_suite(self.config.suite_path)
            self._question_index = {normalize_term(q.text): q.id for q in suite}
        qid = self._question_index.get(normalize_term(question_text))
        if qid is None:
            raise GatewayError(
                "replay mode: the question is not in the benchmark suite, "
                "so no replay script exists for it"
            )
        base = Path(self.config.replay_dir)
        for candidate in (base / mode / f"q{qid:02d}.jsonl", base / f"q{qid:02d}.jsonl"):
            if candidate.exists():
                return load_replay_script(candidate)
        raise GatewayError(f"replay mode: no script for question {qid} under {base}")

    def gateway_for(self, session: Session, question_text: str) -> LlmGateway:
        if self.config.replay_dir:
            backend = ReplayBackend(self._replay_script_for(session.mode, question_text))
            return LlmGateway({"planner": backend, "sql_generator": backend})

        backends = {}
        for role, backend_cfg in (
            ("planner", self.config.planner),
            ("sql_generator", self.config.sql_generator),
        ):
            if backend_cfg.url:
                backend = HttpChatBackend(
                    url=backend_cfg.url,
                    model=backend_cfg.model,
                    api_key=self.config.api_key,
                    timeout=backend_cfg.timeout,
                    max_retries=backend_cfg.max_retries,
                    backoff_base=backend_cfg.backoff_base,
                )
                if self.config.record_dir:
                    backend = RecordingBackend(
                        backend, Path(self.config.record_dir) / f"{session.id}.jsonl"
                    )
                backends[role] = backend
        if not backends:
            raise GatewayError(
                "no backends configured: set [backends.planner]/[backends.sql_generator] "
                "urls, the GEOAGENT_*_URL environment variables, or [replay] dir"
            )
        return LlmGateway(backends)

    # -- query handling ---------------------------------------------------------

    def handle_query(self, session: Session, text: str) -> dict:
        """Run one question in the session's mode; returns the wire response."""
        if not text or not text.strip():
            raise ValueError("question text must be non-empty")
        text = text.strip()
        gateway = self.gateway_for(session, text)
        gateway.open_session(session.id)
        gateway.start_question(session.id, text[:80])

        with self.session_lock(session.id):
            if session.mode == "agentic":
                outcome = run_agent(
                    text,
                    store=self.store,
                    gateway=gateway,
                    knowledge=self.knowledge,
                    session=session.id,
                    session_dir=session.directory,
                    budget=self.config.budget,
                    max_retries=self.config.max_retries,
                    observation_limit=self.config.observation_limit,
                )
                return {
                    "mode": "agentic",
                    "answer": outcome.answer,
                    "succeeded": outcome.succeeded,
                    "artifacts": [
                        {
                            "id": a.id,
                            "kind": a.kind,
                            "title": a.title,
                            "url": f"/sessions/{session.id}/artifacts/{a.id}",
                        }
                        for a in outcome.artifacts
                    ],
                    "trajectory_id": outcome.trajectory_id,
                    "sql_gen_calls": outcome.sql_gen_calls,
                }

            outcome = run_naive(text, self.store, gateway, session.id)
            preview = "\n".join(str(row) for row in outcome.preview)
            if outcome.succeeded:
                answer = (
                    f"SQL: {outcome.sql}\n"
                    f"rows={outcome.execution.row_count} "
                    f"columns={outcome.execution.columns}\n{preview}"
                )
            else:
                answer = f"SQL: {outcome.sql}\nerror: {outcome.error}"
            return {
                "mode": "naive",
                "answer": answer,
                "succeeded": outcome.succeeded,
                "sql": outcome.sql,
                "error": outcome.error,
                "artifacts": [],
                "trajectory_id": None,
                "sql_gen_calls": 1,
            }
