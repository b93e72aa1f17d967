"""SQL parsing, linting, and guarded rewriting for candidate queries."""

from .analyzer import analyze, parse_statement
from .diagnostics import ERROR, WARNING, SqlDiagnostic, StatementSummary
from .lint import (
    BBOX_SUGGESTION,
    DIALECT_FUNCTIONS,
    GEODESIC_FUNCTIONS,
    has_errors,
    is_geodesic_function,
    lint,
)
from .rewrite import METERS_PER_DEGREE, RewriteError, radial_bbox, rewrite_radial_to_bbox

__all__ = [
    "analyze",
    "parse_statement",
    "SqlDiagnostic",
    "StatementSummary",
    "ERROR",
    "WARNING",
    "lint",
    "has_errors",
    "is_geodesic_function",
    "DIALECT_FUNCTIONS",
    "GEODESIC_FUNCTIONS",
    "BBOX_SUGGESTION",
    "METERS_PER_DEGREE",
    "RewriteError",
    "radial_bbox",
    "rewrite_radial_to_bbox",
]
