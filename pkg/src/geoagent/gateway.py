"""Uniform completion interface over the planner and SQL-generator backends.

Two interchangeable backends sit behind one `complete()` call: a live
OpenAI-shaped HTTP endpoint with retry, and a deterministic record/replay
backend for offline runs. The gateway also keeps exact per-session,
per-question call accounting.
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
import time
from dataclasses import dataclass
from pathlib import Path

import requests

logger = logging.getLogger(__name__)

ROLES = ("planner", "sql_generator")
UNASSIGNED = "unassigned"


class GatewayError(Exception):
    pass


class TransportError(GatewayError):
    pass


class ReplayMismatchError(GatewayError):
    def __init__(self, message: str, expected=None, actual=None):
        super().__init__(message)
        self.expected = expected
        self.actual = actual


class ScriptExhaustedError(GatewayError):
    pass


class UnknownSessionError(GatewayError):
    pass


@dataclass
class CompletionRequest:
    role: str
    prompt: str
    temperature: float = 0.0
    max_tokens: int = 4096
    session: str = "default"

    def validate(self) -> None:
        if self.role not in ROLES:
            raise GatewayError(f"unknown role '{self.role}'")
        if not self.prompt:
            raise GatewayError("prompt must be non-empty")


@dataclass
class UsageReport:
    session: str
    role_counts: dict[str, int]
    question_counts: dict[str, dict[str, int]]
    questions: int
    mean_sql_generator_calls: float
    mean_defined: bool

    def to_dict(self) -> dict:
        return {
            "session": self.session,
            "role_counts": self.role_counts,
            "question_counts": self.question_counts,
            "questions": self.questions,
            "mean_sql_generator_calls": f"{self.mean_sql_generator_calls:.2f}",
            "mean_defined": self.mean_defined,
        }


def prompt_hash(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


@dataclass
class ReplayEntry:
    role: str
    completion: str
    match_mode: str = "step-index"
    sha256: str | None = None
    prompt: str | None = None

    @classmethod
    def from_dict(cls, raw: dict) -> "ReplayEntry":
        match = raw.get("match") or {}
        return cls(
            role=raw["role"],
            completion=raw["completion"],
            match_mode=match.get("mode", "step-index"),
            sha256=match.get("sha256"),
            prompt=raw.get("prompt"),
        )

    def to_dict(self) -> dict:
        match: dict = {"mode": self.match_mode}
        if self.sha256:
            match["sha256"] = self.sha256
        out = {"role": self.role, "match": match, "completion": self.completion}
        if self.prompt is not None:
            out["prompt"] = self.prompt
        return out


def load_replay_script(path: str | Path) -> list[ReplayEntry]:
    entries = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                entries.append(ReplayEntry.from_dict(json.loads(line)))
    return entries


class ReplayBackend:
    """Serves scripted completions strictly in order, per session."""

    def __init__(self, entries: list[ReplayEntry] | None = None):
        self._default = list(entries or [])
        self._scripts: dict[str, list[ReplayEntry]] = {}
        self._cursors: dict[str, int] = {}
        self._lock = threading.Lock()

    @classmethod
    def from_jsonl(cls, path: str | Path) -> "ReplayBackend":
        return cls(load_replay_script(path))

    def register(self, session: str, entries: list[ReplayEntry]) -> None:
        with self._lock:
            self._scripts[session] = list(entries)
            self._cursors[session] = 0

    def complete(self, request: CompletionRequest) -> str:
        with self._lock:
            script = self._scripts.get(request.session, self._default)
            cursor = self._cursors.get(request.session, 0)
            if cursor >= len(script):
                raise ScriptExhaustedError(
                    f"replay script exhausted after {cursor} completions "
                    f"(session '{request.session}', requested role '{request.role}')"
                )
            entry = script[cursor]
            self._cursors[request.session] = cursor + 1

        if entry.role != request.role:
            raise ReplayMismatchError(
                f"replay entry {cursor} is for role '{entry.role}' "
                f"but '{request.role}' was requested",
                expected=entry.role,
                actual=request.role,
            )
        if entry.sha256:
            actual = prompt_hash(request.prompt)
            if actual != entry.sha256:
                if entry.match_mode == "exact-hash":
                    raise ReplayMismatchError(
                        f"prompt hash mismatch at replay entry {cursor}: "
                        f"expected {entry.sha256}, got {actual}",
                        expected=entry.prompt if entry.prompt is not None else entry.sha256,
                        actual=request.prompt,
                    )
                logger.warning(
                    "replay entry %d prompt drifted (hash %s != %s)",
                    cursor, actual[:12], entry.sha256[:12],
                )
        return entry.completion


class RecordingBackend:
    """Wraps a live backend; appends every exchange to a JSONL script."""

    def __init__(self, inner, path: str | Path):
        self._inner = inner
        self._path = Path(path)
        self._lock = threading.Lock()

    def complete(self, request: CompletionRequest) -> str:
        completion = self._inner.complete(request)
        entry = ReplayEntry(
            role=request.role,
            completion=completion,
            match_mode="step-index",
            sha256=prompt_hash(request.prompt),
            prompt=request.prompt,
        )
        with self._lock:
            self._path.parent.mkdir(parents=True, exist_ok=True)
            with open(self._path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(entry.to_dict()) + "\n")
        return completion


class HttpChatBackend:
    """OpenAI-compatible chat-completion client with bounded retry."""

    RETRYABLE_STATUS = frozenset({429, 500, 502, 503, 504})

    def __init__(
        self,
        url: str,
        model: str,
        api_key: str | None = None,
        timeout: float = 60.0,
        max_retries: int = 3,
        backoff_base: float = 0.5,
        http=None,
    ):
        self.url = url
        self.model = model
        self.api_key = api_key
        self.timeout = timeout
        self.max_retries = max_retries
        self.backoff_base = backoff_base
        self._http = http or requests

    def complete(self, request: CompletionRequest) -> str:
        payload = {
            "model": self.model,
            "messages": [{"role": "user", "content": request.prompt}],
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        }
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"

        last_error: str = "no attempt made"
        for attempt in range(self.max_retries + 1):
            if attempt:
                time.sleep(self.backoff_base * (2 ** (attempt - 1)))
            try:
                resp = self._http.post(
                    self.url, json=payload, headers=headers, timeout=self.timeout
                )
            except requests.RequestException as exc:
                last_error = f"transport failure: {exc}"
                continue
            if resp.status_code in self.RETRYABLE_STATUS:
                last_error = f"HTTP {resp.status_code}"
                continue
            if resp.status_code != 200:
                raise TransportError(f"HTTP {resp.status_code}: {resp.text[:500]}")
            try:
                data = resp.json()
                return data["choices"][0]["message"]["content"]
            except (ValueError, KeyError, IndexError, TypeError) as exc:
                raise TransportError(f"malformed completion response: {exc}") from exc
        raise TransportError(
            f"giving up after {self.max_retries + 1} attempts ({last_error})"
        )


class LlmGateway:
    """Routes requests to per-role backends and accounts every completion."""

    def __init__(self, backends: dict[str, object]):
        self._backends = dict(backends)
        self._lock = threading.Lock()
        self._role_counts: dict[str, dict[str, int]] = {}
        self._question_counts: dict[str, dict[str, dict[str, int]]] = {}
        self._current_question: dict[str, str] = {}

    def backend_for(self, role: str):
        return self._backends.get(role)

    def open_session(self, session: str) -> None:
        with self._lock:
            self._role_counts.setdefault(session, {})
            self._question_counts.setdefault(session, {})

    def start_question(self, session: str, question_id) -> None:
        with self._lock:
            self._role_counts.setdefault(session, {})
            buckets = self._question_counts.setdefault(session, {})
            buckets.setdefault(str(question_id), {})
            self._current_question[session] = str(question_id)

    def complete(self, request: CompletionRequest) -> str:
        request.validate()
        backend = self._backends.get(request.role)
        if backend is None:
            raise GatewayError(f"no backend configured for role '{request.role}'")
        text = backend.complete(request)
        with self._lock:
            roles = self._role_counts.setdefault(request.session, {})
            roles[request.role] = roles.get(request.role, 0) + 1
            qid = self._current_question.get(request.session, UNASSIGNED)
            buckets = self._question_counts.setdefault(request.session, {})
            bucket = buckets.setdefault(qid, {})
            bucket[request.role] = bucket.get(request.role, 0) + 1
        return text

    def usage_report(self, session: str) -> UsageReport:
        with self._lock:
            if session not in self._role_counts:
                raise UnknownSessionError(f"unknown session '{session}'")
            roles = dict(self._role_counts[session])
            buckets = {
                q: dict(c) for q, c in self._question_counts.get(session, {}).items()
            }
        questions = len(buckets)
        total_sqlgen = roles.get("sql_generator", 0)
        if questions:
            mean = round(total_sqlgen / questions, 2)
            defined = True
        else:
            mean = 0.0
            defined = False
        return UsageReport(
            session=session,
            role_counts=roles,
            question_counts=buckets,
            questions=questions,
            mean_sql_generator_calls=mean,
            mean_defined=defined,
        )
