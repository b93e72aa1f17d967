"""Session lifecycle and isolated per-session artifact access."""

from __future__ import annotations

import json
import re
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

_ID_RE = re.compile(r"^[A-Za-z0-9._-]+$")

MEDIA_TYPES = {
    ".svg": "image/svg+xml",
    ".html": "text/html",
    ".csv": "text/csv",
    ".json": "application/json",
}

MODES = ("naive", "agentic")


class SessionError(Exception):
    pass


class UnknownSessionError(SessionError):
    pass


class AccessDeniedError(SessionError):
    pass


@dataclass(frozen=True)
class Session:
    id: str
    mode: str
    directory: Path
    created_at: str


class SessionManager:
    """Creates sessions under one root; lookups are restart-safe via session.json."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def create(self, mode: str, session_id: str | None = None) -> Session:
        if mode not in MODES:
            raise SessionError(f"mode must be one of {MODES}, got '{mode}'")
        session_id = session_id or f"s-{uuid.uuid4().hex[:12]}"
        if not _ID_RE.match(session_id):
            raise SessionError(f"invalid session id: {session_id!r}")
        directory = self.root / session_id
        if directory.exists():
            raise SessionError(f"session '{session_id}' already exists")
        directory.mkdir(parents=True)
        session = Session(
            id=session_id,
            mode=mode,
            directory=directory,
            created_at=datetime.now(timezone.utc).isoformat(),
        )
        (directory / "session.json").write_text(
            json.dumps(
                {"id": session.id, "mode": session.mode, "created_at": session.created_at}
            )
            + "\n",
            encoding="utf-8",
        )
        return session

    def get(self, session_id: str) -> Session:
        if not _ID_RE.match(session_id or ""):
            raise UnknownSessionError(f"invalid session id: {session_id!r}")
        meta_path = self.root / session_id / "session.json"
        if not meta_path.exists():
            raise UnknownSessionError(f"unknown session '{session_id}'")
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        return Session(
            id=meta["id"],
            mode=meta["mode"],
            directory=self.root / session_id,
            created_at=meta.get("created_at", ""),
        )

    def artifact_file(self, session_id: str, artifact_id: str) -> tuple[Path, str]:
        """Resolve an artifact strictly inside the session directory."""
        session = self.get(session_id)
        if not _ID_RE.match(artifact_id or ""):
            raise AccessDeniedError(f"invalid artifact id: {artifact_id!r}")
        for suffix, media in MEDIA_TYPES.items():
            candidate = (session.directory / f"{artifact_id}{suffix}").resolve()
            if session.directory.resolve() not in candidate.parents:
                raise AccessDeniedError("artifact path escapes the session directory")
            if candidate.exists():
                return candidate, media
        raise UnknownSessionError(
            f"no artifact '{artifact_id}' in session '{session_id}'"
        )

    def trajectory_file(self, session_id: str, trajectory_id: str) -> Path:
        session = self.get(session_id)
        if not _ID_RE.match(trajectory_id or ""):
            raise AccessDeniedError(f"invalid trajectory id: {trajectory_id!r}")
        path = (session.directory / f"{trajectory_id}.json").resolve()
        if session.directory.resolve() not in path.parents:
            raise AccessDeniedError("trajectory path escapes the session directory")
        if not path.exists():
            raise UnknownSessionError(
                f"no trajectory '{trajectory_id}' in session '{session_id}'"
            )
        return path
