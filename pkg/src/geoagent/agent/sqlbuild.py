"""SQL fragment builders for knowledge-injected predicates."""

from __future__ import annotations

from ..knowledge import BoundingBox


def _num(v: float) -> str:
    return repr(v)


def bbox_predicate(box: BoundingBox, lat_column: str = "latitude", lon_column: str = "longitude") -> str:
    return (
        f"{lat_column} BETWEEN {_num(box.lat_min)} AND {_num(box.lat_max)} "
        f"AND {lon_column} BETWEEN {_num(box.lon_min)} AND {_num(box.lon_max)}"
    )


def build_borough_case(regions: list[BoundingBox], alias: str = "borough") -> str:
    """CASE expression labeling rows by the first containing region.

    Clause order is the caller's region order; boxes may overlap, so the first
    match wins and reordering changes labels in the overlap.
    """
    if not regions:
        raise ValueError("at least one region is required")
    clauses = [
        f"WHEN latitude BETWEEN {_num(r.lat_min)} AND {_num(r.lat_max)} "
        f"AND longitude BETWEEN {_num(r.lon_min)} AND {_num(r.lon_max)} "
        f"THEN '{r.name}'"
        for r in regions
    ]
    return "CASE " + " ".join(clauses) + f" END AS {alias}"
