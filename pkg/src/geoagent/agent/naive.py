"""The single-pass baseline: question -> one SQL generation -> execute verbatim.

No lint remediation, no retry, no reformulation; failures come back inside the
outcome so callers can display the raw error.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..datastore import CheckinStore, DatastoreError, ExecutionOutcome
from ..gateway import CompletionRequest, GatewayError, LlmGateway
from .actions import strip_code_fences
from .prompts import NAIVE_SQL_PROMPT, SCHEMA_DESCRIPTION


@dataclass
class NaiveOutcome:
    sql: str
    execution: ExecutionOutcome | None = None
    error: str | None = None
    preview: list = field(default_factory=list)

    @property
    def succeeded(self) -> bool:
        return self.error is None and self.execution is not None


def run_naive(
    question: str,
    store: CheckinStore,
    gateway: LlmGateway,
    session: str,
) -> NaiveOutcome:
    """Exactly one sql_generator call; the SQL runs as-is behind the read-only guard."""
    prompt = NAIVE_SQL_PROMPT.format(schema=SCHEMA_DESCRIPTION, question=question)
    try:
        completion = gateway.complete(
            CompletionRequest(role="sql_generator", prompt=prompt, session=session)
        )
    except GatewayError as exc:
        return NaiveOutcome(sql="", error=f"generation failed: {exc}")

    sql = strip_code_fences(completion)
    try:
        execution = store.execute_sql(sql, session)
    except DatastoreError as exc:
        return NaiveOutcome(sql=sql, error=str(exc))
    return NaiveOutcome(sql=sql, execution=execution, preview=execution.preview)
