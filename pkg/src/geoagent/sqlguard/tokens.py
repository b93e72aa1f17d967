"""Span-preserving tokenizer for the SQL dialect subset.

Tolerant by design: anything it does not recognize becomes a single-char
operator token instead of an exception, so downstream analysis can always
report a diagnostic with a span.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

WORD = "word"
STRING = "string"
NUMBER = "number"
OP = "op"
COMMENT = "comment"

_WORD_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER_RE = re.compile(r"\d+(?:\.\d+)?(?:[eE][+-]?\d+)?|\.\d+")
# multi-char operators first so "<=" is not split into "<" "="
_MULTI_OPS = ("<=", ">=", "<>", "!=", "||", "@>", "<@", "::")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    start: int
    end: int

    @property
    def lower(self) -> str:
        return self.text.lower()


def tokenize(sql: str, keep_comments: bool = False) -> list[Token]:
    """Split SQL text into tokens with byte spans into the original string."""
    tokens: list[Token] = []
    i, n = 0, len(sql)
    while i < n:
        ch = sql[i]
        if ch.isspace():
            i += 1
            continue
        if sql.startswith("--", i):
            j = sql.find("\n", i)
            j = n if j < 0 else j
            if keep_comments:
                tokens.append(Token(COMMENT, sql[i:j], i, j))
            i = j
            continue
        if sql.startswith("/*", i):
            j = sql.find("*/", i + 2)
            j = n if j < 0 else j + 2
            if keep_comments:
                tokens.append(Token(COMMENT, sql[i:j], i, j))
            i = j
            continue
        if ch == "'":
            j = i + 1
            while j < n:
                if sql[j] == "'":
                    if j + 1 < n and sql[j + 1] == "'":  # escaped quote
                        j += 2
                        continue
                    j += 1
                    break
                j += 1
            else:
                j = n
            tokens.append(Token(STRING, sql[i:j], i, j))
            i = j
            continue
        if ch == '"':
            j = sql.find('"', i + 1)
            j = n if j < 0 else j + 1
            tokens.append(Token(WORD, sql[i:j], i, j))
            i = j
            continue
        m = _NUMBER_RE.match(sql, i)
        if m and (ch.isdigit() or (ch == "." and m.end() > i + 1)):
            tokens.append(Token(NUMBER, m.group(), i, m.end()))
            i = m.end()
            continue
        m = _WORD_RE.match(sql, i)
        if m:
            tokens.append(Token(WORD, m.group(), i, m.end()))
            i = m.end()
            continue
        for op in _MULTI_OPS:
            if sql.startswith(op, i):
                tokens.append(Token(OP, op, i, i + len(op)))
                i += len(op)
                break
        else:
            tokens.append(Token(OP, ch, i, i + 1))
            i += 1
    return tokens


def string_value(tok: Token) -> str:
    """Unquoted value of a string literal token."""
    return tok.text[1:-1].replace("''", "'")


def ident_value(tok: Token) -> str:
    """Identifier name with optional double quotes stripped, lowercased."""
    t = tok.text
    if t.startswith('"') and t.endswith('"') and len(t) >= 2:
        return t[1:-1].lower()
    return t.lower()


def matching_paren(tokens: list[Token], open_index: int) -> int:
    """Index of the ')' matching tokens[open_index] == '('; -1 if unbalanced."""
    depth = 0
    for k in range(open_index, len(tokens)):
        t = tokens[k]
        if t.kind == OP and t.text == "(":
            depth += 1
        elif t.kind == OP and t.text == ")":
            depth -= 1
            if depth == 0:
                return k
    return -1
