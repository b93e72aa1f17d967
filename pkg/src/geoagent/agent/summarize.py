"""Final-answer synthesis from a result digest, via one planner completion."""

from __future__ import annotations

from ..gateway import CompletionRequest, LlmGateway
from .prompts import DAYPART_INSTRUCTION, SUMMARY_PROMPT

_HOURLY_NAMES = ("hour", "hour_of_day", "checkin_hour")


def build_summary_prompt(question: str, digest: dict, artifacts: list) -> str:
    """Digest is {'columns': [...], 'rows': [...], 'notes': optional str}."""
    rows = digest.get("rows") or []
    if not rows:
        raise ValueError("summarize needs at least one executed result row")
    lines = [str(digest.get("columns", []))]
    lines += [str(row) for row in rows[:100]]
    if digest.get("notes"):
        lines.append(f"notes: {digest['notes']}")
    extra = ""
    columns = [str(c).lower() for c in digest.get("columns", [])]
    if any(c in _HOURLY_NAMES for c in columns):
        extra = DAYPART_INSTRUCTION
    return SUMMARY_PROMPT.format(
        question=question,
        digest="\n".join(lines),
        artifacts=", ".join(str(a) for a in artifacts) or "none",
        extra=extra,
    )


def summarize(
    question: str,
    digest: dict,
    artifacts: list,
    gateway: LlmGateway,
    session: str,
) -> str:
    prompt = build_summary_prompt(question, digest, artifacts)
    return gateway.complete(
        CompletionRequest(role="planner", prompt=prompt, session=session)
    )
