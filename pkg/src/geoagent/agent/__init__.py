"""Naive and agentic pipelines over the check-in store."""

from .actions import (
    FINAL_ANSWER,
    TOOL_NAMES,
    TOOL_PARAMS,
    Action,
    AgentStep,
    parse_action,
    strip_code_fences,
)
from .naive import NaiveOutcome, run_naive
from .react import (
    DEFAULT_BUDGET,
    AgentOutcome,
    Artifact,
    ReactAgent,
    run_agent,
    truncate_observation,
)
from .sqlbuild import bbox_predicate, build_borough_case
from .summarize import build_summary_prompt, summarize

__all__ = [
    "FINAL_ANSWER",
    "TOOL_NAMES",
    "TOOL_PARAMS",
    "Action",
    "AgentStep",
    "parse_action",
    "strip_code_fences",
    "NaiveOutcome",
    "run_naive",
    "DEFAULT_BUDGET",
    "AgentOutcome",
    "Artifact",
    "ReactAgent",
    "run_agent",
    "truncate_observation",
    "bbox_predicate",
    "build_borough_case",
    "build_summary_prompt",
    "summarize",
]
