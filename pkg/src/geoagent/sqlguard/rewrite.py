"""Replace a radial-distance predicate with an axis-aligned bounding box.

The box is an advisory over-approximation of the great-circle disk using the
flat 111,320 m-per-degree constant; callers that need the exact disk must
post-filter rows.
"""

from __future__ import annotations

import math

from .lint import is_geodesic_function
from .tokens import OP, WORD, Token, matching_paren, tokenize

METERS_PER_DEGREE = 111_320.0

_PREDICATE_BOUNDARIES = frozenset(
    "and or where on when then else group order having limit union".split()
)


class RewriteError(ValueError):
    """Raised when the radial rewrite does not apply; .kind names the cause."""

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


def radial_bbox(center_lat: float, center_lon: float, radius_m: float) -> tuple[float, float, float, float]:
    """(lat_min, lat_max, lon_min, lon_max) of the box covering the radius."""
    if abs(center_lat) >= 89.0:
        raise RewriteError(
            "degenerate-longitude",
            f"center latitude {center_lat} too close to a pole for a longitude width",
        )
    dlat = radius_m / METERS_PER_DEGREE
    dlon = radius_m / (METERS_PER_DEGREE * math.cos(math.radians(center_lat)))
    return (center_lat - dlat, center_lat + dlat, center_lon - dlon, center_lon + dlon)


def rewrite_radial_to_bbox(
    sql: str,
    center: tuple[float, float],
    radius_m: float,
    lat_column: str = "latitude",
    lon_column: str = "longitude",
) -> str:
    """Rewrite the single radial predicate in `sql` into a BETWEEN box."""
    tokens = tokenize(sql)
    calls = _top_level_geodesic_calls(tokens)
    if len(calls) != 1:
        raise RewriteError(
            "not-applicable",
            f"expected exactly one radial-distance predicate, found {len(calls)}",
        )
    lat_min, lat_max, lon_min, lon_max = radial_bbox(center[0], center[1], radius_m)

    start_idx, end_idx = _predicate_extent(tokens, *calls[0])
    start, end = tokens[start_idx].start, tokens[end_idx].end
    box = (
        f"{lat_column} BETWEEN {_num(lat_min)} AND {_num(lat_max)} "
        f"AND {lon_column} BETWEEN {_num(lon_min)} AND {_num(lon_max)}"
    )
    return sql[:start] + box + sql[end:]


def _num(v: float) -> str:
    return repr(round(v, 8))


def _top_level_geodesic_calls(tokens: list[Token]) -> list[tuple[int, int]]:
    """(name_index, close_paren_index) of geodesic calls not nested in another."""
    calls = []
    i = 0
    while i < len(tokens):
        t = tokens[i]
        if (
            t.kind == WORD
            and is_geodesic_function(t.lower)
            and i + 1 < len(tokens)
            and tokens[i + 1].kind == OP
            and tokens[i + 1].text == "("
        ):
            close = matching_paren(tokens, i + 1)
            if close < 0:
                close = len(tokens) - 1
            calls.append((i, close))
            i = close + 1
            continue
        i += 1
    return calls


def _predicate_extent(tokens: list[Token], name_idx: int, close_idx: int) -> tuple[int, int]:
    """Expand the call span to the full boolean predicate containing it."""
    depth_at = _depths(tokens)
    base = depth_at[name_idx]

    start = name_idx
    while start > 0:
        prev = tokens[start - 1]
        if prev.kind == WORD and prev.lower in _PREDICATE_BOUNDARIES:
            break
        if prev.kind == OP and prev.text in ("(", ",", ";") and depth_at[start - 1] < base:
            break
        if prev.kind == OP and prev.text == "(" and depth_at[start - 1] == base - 1:
            break
        start -= 1

    end = close_idx
    while end + 1 < len(tokens):
        nxt = tokens[end + 1]
        if nxt.kind == WORD and nxt.lower in _PREDICATE_BOUNDARIES:
            break
        if nxt.kind == OP and nxt.text in (")", ",", ";") and depth_at[end + 1] < base:
            break
        end += 1
    return start, end


def _depths(tokens: list[Token]) -> list[int]:
    depths = []
    d = 0
    for t in tokens:
        if t.kind == OP and t.text == "(":
            depths.append(d)
            d += 1
        elif t.kind == OP and t.text == ")":
            d -= 1
            depths.append(d)
        else:
            depths.append(d)
    return depths
