"""Diagnostic and statement-summary types shared across the SQL guard."""

from __future__ import annotations

from dataclasses import dataclass, field

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class SqlDiagnostic:
    severity: str
    rule_id: str
    message: str
    span: tuple[int, int]
    suggestion: str | None = None

    def to_dict(self) -> dict:
        return {
            "rule_id": self.rule_id,
            "severity": self.severity,
            "message": self.message,
            "span": list(self.span),
            "suggestion": self.suggestion,
        }


@dataclass
class StatementSummary:
    statement_kind: str  # "select" | "other"
    referenced_tables: set[str] = field(default_factory=set)
    referenced_columns: set[tuple[str, str]] = field(default_factory=set)
    called_functions: set[str] = field(default_factory=set)
    has_union: bool = False
    has_cte: bool = False
