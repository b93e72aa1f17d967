"""Result comparison for per-question oracles.

Comparisons are deliberately lenient the way the scoring protocol is: rows
compare as multisets unless ranking is asked for, ranked answers accept ties,
and numeric cells compare after rounding.
"""

from __future__ import annotations

DEFAULT_DIGITS = 6


def canonical_cell(value, digits: int = DEFAULT_DIGITS) -> str:
    if value is None:
        return ""
    s = str(value).strip()
    try:
        return f"{round(float(s), digits):.{digits}f}"
    except (TypeError, ValueError):
        return s


def canonical_rows(rows, digits: int = DEFAULT_DIGITS) -> list[tuple]:
    return sorted(tuple(canonical_cell(v, digits) for v in row) for row in rows)


def multiset_equal(ref_rows, sys_rows, digits: int = DEFAULT_DIGITS) -> tuple[bool, str]:
    ref = canonical_rows(ref_rows, digits)
    sys = canonical_rows(sys_rows, digits)
    if ref == sys:
        return True, f"{len(ref)} rows match"
    missing = [r for r in ref if r not in sys]
    extra = [r for r in sys if r not in ref]
    return False, (
        f"row multisets differ: {len(missing)} missing, {len(extra)} unexpected "
        f"(e.g. missing={missing[:2]}, extra={extra[:2]})"
    )


def _tie_groups(ref_rows, label_col: int, score_col: int, digits: int):
    """Consecutive reference rows with equal scores form interchangeable groups."""
    groups: list[tuple[str, set[str]]] = []
    for row in ref_rows:
        label = str(row[label_col]).strip().casefold()
        score = canonical_cell(row[score_col], digits)
        if groups and groups[-1][0] == score:
            groups[-1][1].add(label)
        else:
            groups.append((score, {label}))
    return groups


def ranked_equal(
    ref_rows,
    sys_rows,
    k: int,
    label_col: int = 0,
    score_col: int = 1,
    digits: int = DEFAULT_DIGITS,
) -> tuple[bool, str]:
    """Top-k comparison; any order inside a tie group is accepted."""
    expected = min(k, len(ref_rows))
    if len(sys_rows) != expected:
        return False, f"expected {expected} ranked rows, got {len(sys_rows)}"
    groups = _tie_groups(ref_rows, label_col, score_col, digits)
    gi = 0
    remaining: set[str] = set()
    for idx, row in enumerate(sys_rows):
        if len(row) <= label_col:
            return False, f"row {idx} too short for label column {label_col}"
        label = str(row[label_col]).strip().casefold()
        if not remaining:
            if gi >= len(groups):
                return False, f"row {idx}: ran out of reference ranking"
            remaining = set(groups[gi][1])
            gi += 1
        if label not in remaining:
            return False, f"rank {idx + 1}: '{row[label_col]}' not among acceptable ties"
        remaining.discard(label)
    return True, f"top-{expected} ranking matches (ties accepted)"


def ranked_per_group_equal(
    ref_rows,
    sys_rows,
    k: int,
    group_col: int = 0,
    label_col: int = 1,
    score_col: int = 2,
    digits: int = DEFAULT_DIGITS,
) -> tuple[bool, str]:
    def split(rows):
        by_group: dict[str, list] = {}
        for row in rows:
            by_group.setdefault(str(row[group_col]).strip().casefold(), []).append(
                [row[label_col], row[score_col]]
            )
        return by_group

    ref_groups = split(ref_rows)
    sys_groups = split(sys_rows)
    if set(sys_groups) != set(ref_groups):
        return False, f"groups differ: {sorted(sys_groups)} vs {sorted(ref_groups)}"
    for name, ref in ref_groups.items():
        ok, reason = ranked_equal(ref, sys_groups[name], k, 0, 1, digits)
        if not ok:
            return False, f"group '{name}': {reason}"
    return True, f"per-group top-{k} rankings match"


def _group_of_label(label: str, candidates: list[list[str]]) -> int | None:
    needle = label.strip().casefold()
    for i, aliases in enumerate(candidates):
        for alias in aliases:
            a = alias.casefold()
            if needle == a or a in needle:
                return i
    return None


def winner_from_rows(rows, candidates, label_col: int = 0, score_col: int = 1) -> int | None:
    """Index of the candidate group holding the max-score row; None if unmappable."""
    best: tuple[float, int] | None = None
    for row in rows:
        if len(row) <= max(label_col, score_col):
            return None
        group = _group_of_label(str(row[label_col]), candidates)
        if group is None:
            return None
        try:
            score = float(str(row[score_col]))
        except (TypeError, ValueError):
            return None
        if best is None or score > best[0]:
            best = (score, group)
    return None if best is None else best[1]


def winner_from_text(text: str, candidates: list[list[str]]) -> int | None:
    """Candidate group mentioned first in the answer text."""
    if not text:
        return None
    lowered = text.casefold()
    first: tuple[int, int] | None = None
    for i, aliases in enumerate(candidates):
        for alias in aliases:
            pos = lowered.find(alias.casefold())
            if pos >= 0 and (first is None or pos < first[0]):
                first = (pos, i)
    return None if first is None else first[1]


def winner_check(
    ref_rows,
    sys_rows,
    answer_text: str | None,
    candidates: list[list[str]],
    label_col: int = 0,
    score_col: int = 1,
) -> tuple[bool, str]:
    expected = winner_from_rows(ref_rows, candidates, label_col, score_col)
    if expected is None:
        return False, "oracle-error: reference winner could not be determined"
    claimed = None
    source = "rows"
    if sys_rows:
        claimed = winner_from_rows(sys_rows, candidates, label_col, score_col)
    if claimed is None and answer_text:
        claimed = winner_from_text(answer_text, candidates)
        source = "answer text"
    if claimed is None:
        return False, "no identifiable winner in system rows or answer"
    if claimed == expected:
        return True, f"winner '{candidates[expected][0]}' confirmed via {source}"
    return False, (
        f"system names '{candidates[claimed][0]}' but reference winner is "
        f"'{candidates[expected][0]}'"
    )
