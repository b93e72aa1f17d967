"""HTTP service consumed by the browser client and other machine callers."""

from __future__ import annotations

import json

from fastapi import FastAPI, HTTPException, Response
from pydantic import BaseModel

from .app import AppContext
from .gateway import GatewayError
from .sessions import AccessDeniedError, SessionError, UnknownSessionError


class CreateSessionRequest(BaseModel):
    mode: str = "agentic"


class QueryRequest(BaseModel):
    text: str


def create_app(ctx: AppContext) -> FastAPI:
    app = FastAPI(title="geoagent", version="0.1.0")

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/sessions")
    def create_session(body: CreateSessionRequest):
        try:
            session = ctx.sessions.create(body.mode)
        except SessionError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"session_id": session.id, "mode": session.mode, "created_at": session.created_at}

    @app.post("/sessions/{session_id}/query")
    def query(session_id: str, body: QueryRequest):
        try:
            session = ctx.sessions.get(session_id)
        except UnknownSessionError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        if not body.text or not body.text.strip():
            raise HTTPException(status_code=400, detail="question text must be non-empty")
        try:
            return ctx.handle_query(session, body.text)
        except GatewayError as exc:
            # backend unavailable: the session stays usable
            raise HTTPException(status_code=503, detail=str(exc))

    @app.get("/sessions/{session_id}/artifacts/{artifact_id}")
    def artifact(session_id: str, artifact_id: str):
        try:
            path, media = ctx.sessions.artifact_file(session_id, artifact_id)
        except AccessDeniedError as exc:
            raise HTTPException(status_code=403, detail=str(exc))
        except UnknownSessionError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        headers = {}
        if media == "text/csv":
            headers["Content-Disposition"] = f'attachment; filename="{path.name}"'
        return Response(content=path.read_bytes(), media_type=media, headers=headers)

    @app.get("/sessions/{session_id}/trajectory/{trajectory_id}")
    def trajectory(session_id: str, trajectory_id: str):
        try:
            path = ctx.sessions.trajectory_file(session_id, trajectory_id)
        except AccessDeniedError as exc:
            raise HTTPException(status_code=403, detail=str(exc))
        except UnknownSessionError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return json.loads(path.read_text(encoding="utf-8"))

    return app
