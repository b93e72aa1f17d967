"""Lint rules applied to candidate SQL before execution.

Rule ids R1-R6 are stable public identifiers:

  R1 not-a-select            statement is not a single read-only SELECT
  R2 unknown-table           table missing from the live schema
  R3 unknown-column          column missing from referenced tables
  R4 unsupported-function    function outside the dialect allowlist
  R5 cross-table-union-shape UNION branches with mismatched column counts
  R6 empty-result-risk       category equality literal absent from samples
"""

from __future__ import annotations

from .analyzer import Analysis, analyze
from .diagnostics import ERROR, WARNING, SqlDiagnostic

# the construct set the datastore dialect contract promises
DIALECT_FUNCTIONS = frozenset(
    """
    count sum avg min max abs round floor ceil coalesce nullif cast extract
    date_trunc lower upper length substr substring trim ltrim rtrim replace
    """.split()
)

GEODESIC_FUNCTIONS = frozenset(
    "earth_distance ll_to_earth earth_box cube distance_sphere distance_spheroid".split()
)

BBOX_SUGGESTION = "use axis-aligned bounding box"


def is_geodesic_function(name: str) -> bool:
    return name.lower().startswith("st_") or name.lower() in GEODESIC_FUNCTIONS


def lint(sql: str, schema=None, extra_functions: frozenset | set | None = None) -> list[SqlDiagnostic]:
    """Run all rules; error-severity findings must block execution."""
    analysis = analyze(sql)
    diags: list[SqlDiagnostic] = list(analysis.parse_diagnostics)

    if analysis.summary.statement_kind != "select":
        if not diags:
            diags.append(
                SqlDiagnostic(
                    ERROR,
                    "R1",
                    "statement is not a read-only SELECT",
                    _statement_span(analysis),
                )
            )
        return _ordered(diags)

    allowed = DIALECT_FUNCTIONS | (frozenset(extra_functions) if extra_functions else frozenset())
    diags.extend(_rule_unsupported_function(analysis, allowed))
    diags.extend(_rule_union_shape(analysis))
    if schema is not None:
        known = _schema_columns(schema)
        diags.extend(_rule_unknown_table(analysis, known))
        diags.extend(_rule_unknown_column(analysis, known))
        diags.extend(_rule_empty_result_risk(analysis, schema))
    return _ordered(diags)


def has_errors(diags: list[SqlDiagnostic]) -> bool:
    return any(d.severity == ERROR for d in diags)


def _ordered(diags: list[SqlDiagnostic]) -> list[SqlDiagnostic]:
    return sorted(diags, key=lambda d: (d.span[0], d.rule_id, d.message))


def _statement_span(analysis: Analysis) -> tuple[int, int]:
    if not analysis.tokens:
        return (0, 0)
    return (analysis.tokens[0].start, analysis.tokens[-1].end)


def _schema_columns(schema) -> dict[str, set[str]]:
    return {
        table.lower(): {c.lower() for c, _ in columns}
        for table, columns in schema.tables
    }


def _rule_unknown_table(analysis: Analysis, known: dict[str, set[str]]) -> list[SqlDiagnostic]:
    out = []
    flagged = set()
    for name, start, end in analysis.table_refs:
        if name in analysis.cte_names:
            continue
        base = name.split(".")[-1]
        if base not in known and name not in flagged:
            flagged.add(name)
            out.append(
                SqlDiagnostic(ERROR, "R2", f"unknown table '{name}'", (start, end))
            )
    return out


def _rule_unknown_column(analysis: Analysis, known: dict[str, set[str]]) -> list[SqlDiagnostic]:
    resolvable = {}
    for name, _, _ in analysis.table_refs:
        base = name.split(".")[-1]
        if base in known:
            resolvable[base] = known[base]
    for alias, table in analysis.table_aliases.items():
        if table in known:
            resolvable[alias] = known[table]

    visible = set().union(*resolvable.values()) if resolvable else set()
    visible |= analysis.select_aliases

    out = []
    flagged = set()
    for qual, col, start, end in analysis.column_refs:
        if qual:
            if qual in analysis.cte_names:
                continue
            cols = resolvable.get(qual)
            if cols is None:
                continue  # unresolvable qualifier: tolerate
            if col not in cols and (qual, col) not in flagged:
                flagged.add((qual, col))
                out.append(
                    SqlDiagnostic(
                        ERROR, "R3", f"unknown column '{qual}.{col}'", (start, end)
                    )
                )
        else:
            if analysis.cte_names and not resolvable:
                continue  # columns come from CTEs we do not model
            if col not in visible and col not in flagged:
                flagged.add(col)
                out.append(
                    SqlDiagnostic(ERROR, "R3", f"unknown column '{col}'", (start, end))
                )
    return out


def _rule_unsupported_function(analysis: Analysis, allowed: frozenset) -> list[SqlDiagnostic]:
    out = []
    for name, start, end in analysis.func_refs:
        if name in allowed:
            continue
        if is_geodesic_function(name):
            out.append(
                SqlDiagnostic(
                    ERROR,
                    "R4",
                    f"geodesic function '{name}' is not available in this store",
                    (start, end),
                    suggestion=BBOX_SUGGESTION,
                )
            )
        else:
            out.append(
                SqlDiagnostic(
                    ERROR,
                    "R4",
                    f"function '{name}' is outside the dialect allowlist",
                    (start, end),
                    suggestion="restrict to the supported function set",
                )
            )
    return out


def _rule_union_shape(analysis: Analysis) -> list[SqlDiagnostic]:
    counts = analysis.union_item_counts
    out = []
    for i in range(1, len(counts)):
        a, b = counts[i - 1], counts[i]
        if a is not None and b is not None and a != b:
            out.append(
                SqlDiagnostic(
                    ERROR,
                    "R5",
                    f"UNION branches select {a} vs {b} columns",
                    _statement_span(analysis),
                )
            )
    return out


def _rule_empty_result_risk(analysis: Analysis, schema) -> list[SqlDiagnostic]:
    sample_values = set()
    for table, columns in schema.tables:
        try:
            idx = [c.lower() for c, _ in columns].index("category_name")
        except ValueError:
            continue
        for row in schema.samples.get(table, []):
            if idx < len(row):
                sample_values.add(str(row[idx]))

    out = []
    for col, literal, start, end in analysis.eq_filters:
        if col != "category_name":
            continue
        if literal not in sample_values:
            out.append(
                SqlDiagnostic(
                    WARNING,
                    "R6",
                    f"category_name = '{literal}' matches no sampled value; result may be empty",
                    (start, end),
                    suggestion="run label discovery",
                )
            )
    return out
