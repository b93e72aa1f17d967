"""SQLite backing for the store's SQL dialect contract.

The store promises `date_trunc`, `EXTRACT(field FROM ts)`, `ILIKE`, `CASE`,
`BETWEEN`, CTEs and `UNION ALL`, and no geodesic functions. SQLite covers the
last four natively; this module supplies the rest by registering scalar
functions and rewriting the two constructs SQLite cannot parse.
"""

from __future__ import annotations

import sqlite3
from datetime import date

from .sqlguard.tokens import WORD, matching_paren, tokenize


def _parse_ts(value):
    if value is None:
        return None
    s = str(value)
    if len(s) == 10:
        s = s + " 00:00:00"
    return s


def pg_extract(field, value):
    """EXTRACT() over 'YYYY-MM-DD HH:MM:SS' text; DOW is 0=Sunday like Postgres."""
    s = _parse_ts(value)
    if s is None:
        return None
    field = str(field).lower()
    if field == "year":
        return int(s[0:4])
    if field == "month":
        return int(s[5:7])
    if field == "day":
        return int(s[8:10])
    if field == "hour":
        return int(s[11:13])
    if field == "minute":
        return int(s[14:16])
    if field == "second":
        return int(s[17:19])
    if field in ("dow", "isodow", "doy", "week"):
        d = date(int(s[0:4]), int(s[5:7]), int(s[8:10]))
        if field == "dow":
            return (d.weekday() + 1) % 7
        if field == "isodow":
            return d.weekday() + 1
        if field == "doy":
            return d.timetuple().tm_yday
        return d.isocalendar()[1]
    raise ValueError(f"unsupported EXTRACT field: {field}")


def date_trunc(field, value):
    """Postgres-style date_trunc over timestamp text."""
    s = _parse_ts(value)
    if s is None:
        return None
    field = str(field).lower()
    if field == "year":
        return s[0:4] + "-01-01 00:00:00"
    if field == "month":
        return s[0:7] + "-01 00:00:00"
    if field == "day":
        return s[0:10] + " 00:00:00"
    if field == "hour":
        return s[0:13] + ":00:00"
    if field == "minute":
        return s[0:16] + ":00"
    if field == "week":
        d = date(int(s[0:4]), int(s[5:7]), int(s[8:10]))
        monday = d.fromordinal(d.toordinal() - d.weekday())
        return monday.isoformat() + " 00:00:00"
    raise ValueError(f"unsupported date_trunc field: {field}")


def register_functions(conn: sqlite3.Connection) -> None:
    conn.create_function("pg_extract", 2, pg_extract, deterministic=True)
    conn.create_function("date_trunc", 2, date_trunc, deterministic=True)


def to_sqlite(sql: str) -> str:
    """Rewrite EXTRACT(field FROM expr) and ILIKE into SQLite equivalents."""
    out = sql
    for _ in range(32):  # nested EXTRACTs resolve one per pass
        rewritten = _rewrite_one_extract(out)
        if rewritten is None:
            break
        out = rewritten
    return _rewrite_ilike(out)


def _rewrite_one_extract(sql: str) -> str | None:
    tokens = tokenize(sql)
    for i, tok in enumerate(tokens):
        if tok.kind != WORD or tok.lower != "extract":
            continue
        if i + 1 >= len(tokens) or tokens[i + 1].text != "(":
            continue
        close = matching_paren(tokens, i + 1)
        if close < 0 or i + 3 > close:
            continue
        field_tok = tokens[i + 2]
        from_tok = tokens[i + 3] if i + 3 < len(tokens) else None
        if field_tok.kind != WORD or from_tok is None or from_tok.lower != "from":
            continue
        if close <= i + 4:
            continue
        inner = sql[tokens[i + 4].start : tokens[close].start].rstrip()
        replacement = f"pg_extract('{field_tok.lower}', {inner})"
        return sql[: tok.start] + replacement + sql[tokens[close].end :]
    return None


def _rewrite_ilike(sql: str) -> str:
    tokens = tokenize(sql)
    out = []
    pos = 0
    for tok in tokens:
        if tok.kind == WORD and tok.lower == "ilike":
            out.append(sql[pos : tok.start])
            out.append("LIKE")
            pos = tok.end
    out.append(sql[pos:])
    return "".join(out)
