"""Planner-output parsing: the ReAct Action / Action Input / Final Answer format."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

FINAL_ANSWER = "final_answer"

# declared parameter names per tool; unknown keys are a parse error
TOOL_PARAMS = {
    "get_database_schema": {"table"},
    "generate_sql_query": {"request", "knowledge"},
    "execute_on_database": {"sql"},
    "read_file": {"result_id", "offset", "limit"},
    "plot_results": {"result_id", "kind", "x", "y", "series", "title"},
    "map_results": {"result_id", "kind", "lat", "lon", "title"},
}

TOOL_NAMES = tuple(TOOL_PARAMS)

_FINAL_RE = re.compile(r"^[ \t]*final answer[ \t]*:", re.IGNORECASE | re.MULTILINE)
_ACTION_RE = re.compile(r"^[ \t]*action[ \t]*:[ \t]*([A-Za-z_][A-Za-z0-9_]*)[ \t]*$", re.IGNORECASE | re.MULTILINE)
_INPUT_RE = re.compile(r"^[ \t]*action input[ \t]*:", re.IGNORECASE | re.MULTILINE)
_THOUGHT_RE = re.compile(r"^[ \t]*thought[ \t]*:(.*)$", re.IGNORECASE | re.MULTILINE)


@dataclass
class Action:
    tool: str
    args: dict = field(default_factory=dict)
    raw_text: str = ""
    thought: str = ""
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def to_dict(self) -> dict:
        return {"tool": self.tool, "args": self.args, "error": self.error}


@dataclass
class AgentStep:
    index: int
    thought: str
    action: Action
    observation: str
    status: str  # ok | tool_error | parse_error

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "thought": self.thought,
            "action": self.action.to_dict(),
            "observation": self.observation,
            "status": self.status,
        }


def _extract_thought(completion: str, before: int) -> str:
    m = _THOUGHT_RE.search(completion, 0, before if before > 0 else len(completion))
    if not m:
        return ""
    start = m.end(0) - len(m.group(1))
    stop = before if before > 0 else len(completion)
    return completion[start:stop].strip()


def parse_action(completion: str) -> Action:
    """Parse one planner completion into an Action; errors are carried, not raised."""
    text = completion or ""
    final_m = _FINAL_RE.search(text)
    action_m = _ACTION_RE.search(text)

    if final_m and (not action_m or final_m.start() < action_m.start()):
        answer = text[final_m.end():].strip()
        return Action(
            tool=FINAL_ANSWER,
            args={"text": answer},
            raw_text=text,
            thought=_extract_thought(text, final_m.start()),
        )

    if not action_m:
        return Action(
            tool="",
            raw_text=text,
            thought=_extract_thought(text, -1),
            error="no 'Action:' or 'Final Answer:' block found",
        )

    tool = action_m.group(1)
    thought = _extract_thought(text, action_m.start())
    if tool == FINAL_ANSWER:
        return Action(tool=FINAL_ANSWER, args={"text": ""}, raw_text=text, thought=thought)
    if tool not in TOOL_NAMES:
        return Action(tool=tool, raw_text=text, thought=thought, error=f"unknown tool '{tool}'")

    args: dict = {}
    input_m = _INPUT_RE.search(text, action_m.end())
    if input_m:
        rest = text[input_m.end():]
        brace = rest.find("{")
        if brace < 0:
            return Action(tool=tool, raw_text=text, thought=thought,
                          error="'Action Input:' is not followed by a JSON object")
        try:
            args, _ = json.JSONDecoder().raw_decode(rest[brace:])
        except json.JSONDecodeError as exc:
            return Action(tool=tool, raw_text=text, thought=thought,
                          error=f"malformed JSON in Action Input: {exc}")
        if not isinstance(args, dict):
            return Action(tool=tool, raw_text=text, thought=thought,
                          error="Action Input must be a JSON object")

    unknown = set(args) - TOOL_PARAMS[tool]
    if unknown:
        return Action(tool=tool, args=args, raw_text=text, thought=thought,
                      error=f"unknown argument(s) for {tool}: {sorted(unknown)}")
    return Action(tool=tool, args=args, raw_text=text, thought=thought)


def strip_code_fences(text: str) -> str:
    """SQL models often wrap statements in ``` fences; unwrap the first block."""
    s = (text or "").strip()
    m = re.search(r"```(?:sql)?\s*(.*?)```", s, re.DOTALL | re.IGNORECASE)
    if m:
        s = m.group(1).strip()
    return s.rstrip(";").strip()
