"""Tolerant single-pass analysis of the SQL dialect subset.

Extracts the referenced tables/columns/functions and enough structure for
the lint rules. It is not a full grammar: unrecognized input degrades to a
summary with kind="other" plus a parse diagnostic, never an exception.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagnostics import ERROR, SqlDiagnostic, StatementSummary
from .tokens import NUMBER, OP, STRING, WORD, Token, ident_value, string_value, tokenize

KEYWORDS = frozenset(
    """
    select from where group by order having limit offset as on and or not in is
    null between like ilike case when then else end union all distinct with join
    inner left right full outer cross asc desc exists cast true false interval
    """.split()
)

# field names accepted inside EXTRACT(<field> FROM <expr>)
EXTRACT_FIELDS = frozenset(
    "hour minute second dow isodow doy day month year week quarter epoch".split()
)

# any statement containing one of these (as a bare word) is not a read-only SELECT
WRITE_KEYWORDS = frozenset(
    """
    insert update delete drop alter create truncate replace merge grant revoke
    attach detach pragma vacuum copy call exec execute
    """.split()
)

_CONTEXT_BREAKERS = frozenset(
    "where group order having limit offset on union select join inner left right full outer cross".split()
)


@dataclass
class Analysis:
    """Full scan result; StatementSummary is its public projection."""

    summary: StatementSummary
    table_refs: list[tuple[str, int, int]] = field(default_factory=list)
    column_refs: list[tuple[str, str, int, int]] = field(default_factory=list)
    func_refs: list[tuple[str, int, int]] = field(default_factory=list)
    eq_filters: list[tuple[str, str, int, int]] = field(default_factory=list)
    union_item_counts: list[int | None] = field(default_factory=list)
    table_aliases: dict[str, str] = field(default_factory=dict)
    select_aliases: set[str] = field(default_factory=set)
    cte_names: set[str] = field(default_factory=set)
    parse_diagnostics: list[SqlDiagnostic] = field(default_factory=list)
    tokens: list[Token] = field(default_factory=list)


def parse_statement(sql: str) -> StatementSummary:
    """Classify a statement and summarize what it references."""
    return analyze(sql).summary


def analyze(sql: str) -> Analysis:
    tokens = tokenize(sql)
    summary = StatementSummary(statement_kind="other")
    result = Analysis(summary=summary, tokens=tokens)

    meaningful = tokens
    if not meaningful:
        _parse_error(result, "empty statement", (0, 0))
        return result

    _check_balance(result, sql, meaningful)
    _check_single_statement(result, meaningful)

    first = meaningful[0]
    starts_select = first.kind == WORD and first.lower in ("select", "with")
    if starts_select and not result.parse_diagnostics:
        summary.statement_kind = "select"
    summary.has_cte = first.kind == WORD and first.lower == "with"
    if summary.has_cte and not any(
        t.kind == WORD and t.lower == "select" for t in meaningful
    ):
        summary.statement_kind = "other"
        _parse_error(result, "WITH clause without a SELECT body", (first.start, first.end))
    for t in meaningful:
        if t.kind == WORD and t.lower in WRITE_KEYWORDS:
            summary.statement_kind = "other"
            break

    _scan(result)

    summary.referenced_tables = {
        name for name, _, _ in result.table_refs if name not in result.cte_names
    }
    summary.referenced_columns = {(q, c) for q, c, _, _ in result.column_refs}
    summary.called_functions = {name for name, _, _ in result.func_refs}
    summary.has_union = any(
        t.kind == WORD and t.lower == "union" for t in meaningful
    )
    if summary.has_union:
        result.union_item_counts = _union_branch_item_counts(meaningful)
    return result


def _parse_error(result: Analysis, message: str, span: tuple[int, int]) -> None:
    result.summary.statement_kind = "other"
    result.parse_diagnostics.append(
        SqlDiagnostic(ERROR, "R1", f"unparseable statement: {message}", span)
    )


def _check_balance(result: Analysis, sql: str, tokens: list[Token]) -> None:
    depth = 0
    for t in tokens:
        if t.kind == OP and t.text == "(":
            depth += 1
        elif t.kind == OP and t.text == ")":
            depth -= 1
            if depth < 0:
                _parse_error(result, "unbalanced ')'", (t.start, t.end))
                return
        elif t.kind == STRING and (len(t.text) < 2 or not t.text.endswith("'")):
            _parse_error(result, "unterminated string literal", (t.start, t.end))
            return
    if depth != 0:
        last = tokens[-1]
        _parse_error(result, "unbalanced '('", (last.start, last.end))


def _check_single_statement(result: Analysis, tokens: list[Token]) -> None:
    for i, t in enumerate(tokens):
        if t.kind == OP and t.text == ";" and i < len(tokens) - 1:
            _parse_error(result, "multiple statements", (t.start, t.end))
            return


def _scan(result: Analysis) -> None:
    tokens = result.tokens
    n = len(tokens)
    depth = 0
    extract_depths: list[int] = []
    cast_depths: list[int] = []
    select_stack: list[dict] = []
    expecting_table = False
    from_depth: int | None = None
    cte_prologue = tokens and tokens[0].kind == WORD and tokens[0].lower == "with"
    pending_cte_name = cte_prologue

    i = 0
    while i < n:
        tok = tokens[i]

        if tok.kind == OP:
            if tok.text == "(":
                depth += 1
                expecting_table = False
            elif tok.text == ")":
                depth -= 1
                while extract_depths and extract_depths[-1] > depth:
                    extract_depths.pop()
                while cast_depths and cast_depths[-1] > depth:
                    cast_depths.pop()
                while select_stack and select_stack[-1]["depth"] > depth:
                    select_stack.pop()
            elif tok.text == ",":
                if cte_prologue and depth == 0:
                    pending_cte_name = True
                elif from_depth is not None and depth == from_depth and not expecting_table:
                    expecting_table = True
            elif tok.text == "=":
                _record_eq_filter(result, tokens, i)
            i += 1
            continue

        if tok.kind != WORD:
            i += 1
            continue

        word = tok.lower

        if cte_prologue and depth == 0:
            if word == "select":
                cte_prologue = False
            elif pending_cte_name and word not in KEYWORDS:
                result.cte_names.add(ident_value(tok))
                pending_cte_name = False
                i += 1
                continue
            elif word in KEYWORDS:
                i += 1
                continue

        if word in KEYWORDS:
            if word == "select":
                select_stack.append({"depth": depth, "in_list": True})
                expecting_table = False
            elif word == "from":
                if extract_depths and extract_depths[-1] == depth:
                    pass  # the FROM inside EXTRACT(field FROM expr)
                else:
                    if select_stack and select_stack[-1]["depth"] == depth:
                        select_stack[-1]["in_list"] = False
                    expecting_table = True
                    from_depth = depth
            elif word == "join":
                expecting_table = True
                from_depth = depth
            elif word == "union":
                if select_stack and select_stack[-1]["depth"] == depth:
                    select_stack.pop()
                expecting_table = False
                if from_depth == depth:
                    from_depth = None
            elif word == "cast":
                if i + 1 < n and tokens[i + 1].text == "(":
                    cast_depths.append(depth + 1)
            elif word in _CONTEXT_BREAKERS:
                expecting_table = False
                if from_depth == depth and word != "join":
                    from_depth = None
            i += 1
            continue

        # EXTRACT field names are syntax, not columns
        if extract_depths and extract_depths[-1] == depth and word in EXTRACT_FIELDS:
            prev = tokens[i - 1] if i > 0 else None
            if prev is not None and prev.text == "(":
                i += 1
                continue

        if expecting_table:
            i = _consume_table(result, tokens, i)
            expecting_table = False
            continue

        nxt = tokens[i + 1] if i + 1 < n else None

        if nxt is not None and nxt.kind == OP and nxt.text == "(":
            name = ident_value(tok)
            result.func_refs.append((name, tok.start, tok.end))
            if name == "extract":
                extract_depths.append(depth + 1)
            i += 1
            continue

        if nxt is not None and nxt.kind == OP and nxt.text == ".":
            col = tokens[i + 2] if i + 2 < n else None
            if col is not None and col.kind == WORD:
                result.column_refs.append(
                    (ident_value(tok), ident_value(col), tok.start, col.end)
                )
                i += 3
                continue
            i += 3 if col is not None else 2
            continue

        prev = tokens[i - 1] if i > 0 else None
        if prev is not None and prev.kind == WORD and prev.lower == "as":
            # CAST(expr AS type) names a type, everything else names an alias
            if not (cast_depths and cast_depths[-1] == depth):
                result.select_aliases.add(ident_value(tok))
            i += 1
            continue

        in_select_list = bool(select_stack) and select_stack[-1]["in_list"]
        if in_select_list and prev is not None and _ends_expression(prev):
            result.select_aliases.add(ident_value(tok))
            i += 1
            continue

        result.column_refs.append(("", ident_value(tok), tok.start, tok.end))
        i += 1

    del depth  # end of scan


def _ends_expression(prev: Token) -> bool:
    """True when the previous token can end an expression, making a bare alias."""
    if prev.kind in (STRING, NUMBER):
        return True
    if prev.kind == OP and prev.text == ")":
        return True
    if prev.kind == WORD and prev.lower not in KEYWORDS:
        return True
    if prev.kind == WORD and prev.lower in ("end", "null", "true", "false"):
        return True
    return False


def _consume_table(result: Analysis, tokens: list[Token], i: int) -> int:
    """Consume `name[.name] [AS] [alias]` starting at a word token."""
    n = len(tokens)
    parts = [ident_value(tokens[i])]
    start = tokens[i].start
    end = tokens[i].end
    i += 1
    while i + 1 < n and tokens[i].text == "." and tokens[i + 1].kind == WORD:
        parts.append(ident_value(tokens[i + 1]))
        end = tokens[i + 1].end
        i += 2
    name = ".".join(parts)
    result.table_refs.append((name, start, end))

    if i < n and tokens[i].kind == WORD and tokens[i].lower == "as":
        i += 1
    if i < n and tokens[i].kind == WORD and tokens[i].lower not in KEYWORDS:
        result.table_aliases[ident_value(tokens[i])] = parts[-1]
        i += 1
    return i


def _record_eq_filter(result: Analysis, tokens: list[Token], i: int) -> None:
    """Record `column = 'literal'` (either operand order) for lint R6."""
    n = len(tokens)
    left = tokens[i - 1] if i > 0 else None
    right = tokens[i + 1] if i + 1 < n else None
    if left is None or right is None:
        return
    if left.kind == WORD and left.lower not in KEYWORDS and right.kind == STRING:
        result.eq_filters.append(
            (ident_value(left), string_value(right), left.start, right.end)
        )
    elif left.kind == STRING and right.kind == WORD and right.lower not in KEYWORDS:
        result.eq_filters.append(
            (ident_value(right), string_value(left), left.start, right.end)
        )


def _union_branch_item_counts(tokens: list[Token]) -> list[int | None]:
    """Select-list item count per top-level UNION branch; None when unknown (`*`)."""
    branches: list[list[Token]] = []
    current: list[Token] = []
    depth = 0
    for t in tokens:
        if t.kind == OP and t.text == "(":
            depth += 1
        elif t.kind == OP and t.text == ")":
            depth -= 1
        if depth == 0 and t.kind == WORD and t.lower == "union":
            branches.append(current)
            current = []
            continue
        current.append(t)
    branches.append(current)

    counts: list[int | None] = []
    for branch in branches:
        counts.append(_select_item_count(branch))
    return counts


def _select_item_count(branch: list[Token]) -> int | None:
    depth = 0
    sel_depth: int | None = None
    items = 1
    seen_any = False
    start = None
    for idx, t in enumerate(branch):
        if t.kind == OP and t.text == "(":
            depth += 1
        elif t.kind == OP and t.text == ")":
            depth -= 1
        elif t.kind == WORD and t.lower == "select" and sel_depth is None:
            sel_depth = depth
            start = idx
            continue
        if sel_depth is None:
            continue
        if t.kind == WORD and t.lower == "from" and depth == sel_depth:
            break
        if t.kind == WORD and t.lower in ("all", "distinct") and idx == (start or 0) + 1:
            continue
        if depth == sel_depth:
            if t.kind == OP and t.text == ",":
                items += 1
            elif t.kind == OP and t.text == "*":
                return None
            elif t.kind != OP or t.text != ";":
                seen_any = True
    if sel_depth is None or not seen_any:
        return None
    return items
