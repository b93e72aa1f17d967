"""External knowledge the schema lacks: geography, calendar windows, synonyms,
daypart buckets, and data-driven label discovery.

All of it lives in editable JSON files shipped with the package; nothing here
touches the network.
"""

from __future__ import annotations

import calendar
import json
import re
from dataclasses import dataclass
from datetime import datetime
from importlib import resources
from pathlib import Path

DAYPARTS = [
    (0, 4, "Late Night"),
    (5, 7, "Early Morning"),
    (8, 11, "Morning"),
    (12, 15, "Midday"),
    (16, 18, "Afternoon"),
    (19, 23, "Evening"),
]

DAYPART_NAMES = [name for _, _, name in DAYPARTS]

# hour windows used for "morning vs evening" style comparisons
MORNING_HOURS = (6, 12)   # [06:00, 12:00)
EVENING_HOURS = (18, 24)  # [18:00, 24:00)

EDIT_SIMILARITY_THRESHOLD = 0.6
MIN_TOKEN_LENGTH = 4


class KnowledgeError(Exception):
    pass


class UnknownNameError(KnowledgeError):
    pass


@dataclass(frozen=True)
class BoundingBox:
    name: str
    kind: str
    lat_min: float
    lat_max: float
    lon_min: float
    lon_max: float
    source: str = "configured"

    def validate(self) -> None:
        if not (self.lat_min < self.lat_max):
            raise ValueError(f"{self.name}: lat_min must be < lat_max")
        if not (self.lon_min < self.lon_max):
            raise ValueError(f"{self.name}: lon_min must be < lon_max")
        if not (-90 <= self.lat_min and self.lat_max <= 90):
            raise ValueError(f"{self.name}: latitude out of range")
        if not (-180 <= self.lon_min and self.lon_max <= 180):
            raise ValueError(f"{self.name}: longitude out of range")

    @property
    def center(self) -> tuple[float, float]:
        return ((self.lat_min + self.lat_max) / 2, (self.lon_min + self.lon_max) / 2)

    def contains(self, lat: float, lon: float) -> bool:
        return self.lat_min <= lat <= self.lat_max and self.lon_min <= lon <= self.lon_max


@dataclass(frozen=True)
class DateWindow:
    name: str
    start: datetime  # inclusive
    end: datetime    # exclusive

    def validate(self) -> None:
        if not (self.start < self.end):
            raise ValueError(f"{self.name}: start must precede end")


def normalize_term(term: str) -> str:
    return re.sub(r"\s+", " ", term.strip().lower())


def daypart(hour: int) -> str:
    """Bucket an hour of day into the six summary dayparts."""
    if not isinstance(hour, int) or not (0 <= hour <= 23):
        raise ValueError(f"hour must be an integer in [0, 23], got {hour!r}")
    for lo, hi, name in DAYPARTS:
        if lo <= hour <= hi:
            return name
    raise AssertionError("unreachable: dayparts partition [0, 23]")


def levenshtein(a: str, b: str) -> int:
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def edit_similarity(a: str, b: str) -> float:
    if not a and not b:
        return 1.0
    return 1.0 - levenshtein(a, b) / max(len(a), len(b))


def _data_path(filename: str) -> Path:
    return Path(str(resources.files("geoagent.knowledge").joinpath("data", filename)))


class KnowledgeBase:
    """Loads the geography/holiday/synonym files and answers lookups."""

    def __init__(
        self,
        geography_path: str | Path | None = None,
        holidays_path: str | Path | None = None,
        synonyms_path: str | Path | None = None,
        year_range: tuple[int, int] = (2012, 2013),
    ):
        self.year_range = year_range
        geography_path = geography_path or _data_path("geography.json")
        holidays_path = holidays_path or _data_path("holidays.json")
        synonyms_path = synonyms_path or _data_path("synonyms.json")

        with open(geography_path, encoding="utf-8") as fh:
            raw = json.load(fh)
        self._bounds: dict[str, BoundingBox] = {}
        for entry in raw:
            box = BoundingBox(
                name=entry["name"],
                kind=entry["kind"],
                lat_min=entry["lat_min"],
                lat_max=entry["lat_max"],
                lon_min=entry["lon_min"],
                lon_max=entry["lon_max"],
                source=entry.get("source", "configured"),
            )
            box.validate()
            self._bounds[normalize_term(box.name)] = box

        with open(holidays_path, encoding="utf-8") as fh:
            self._holidays: dict = {
                normalize_term(k): v for k, v in json.load(fh).items()
            }

        with open(synonyms_path, encoding="utf-8") as fh:
            self._synonyms: dict[str, list[str]] = {
                normalize_term(k): list(v) for k, v in json.load(fh).items()
            }

    # -- geography ----------------------------------------------------------

    def lookup_bounds(self, name: str) -> BoundingBox:
        """Case-insensitive exact lookup of a named region's bounding box."""
        key = normalize_term(name)
        if key not in self._bounds:
            raise UnknownNameError(f"no bounds for '{name}'")
        return self._bounds[key]

    # -- calendar -----------------------------------------------------------

    def lookup_window(self, name: str, year: int) -> DateWindow:
        """Calendar window for a named holiday or season in a given year."""
        lo, hi = self.year_range
        if not (lo <= year <= hi):
            raise KnowledgeError(f"year {year} outside configured range {lo}-{hi}")
        key = normalize_term(name)
        rule = self._holidays.get(key)
        if rule is None:
            raise UnknownNameError(f"no calendar rule for '{name}'")

        kind = rule["rule"]
        if kind == "fixed_day":
            start = datetime(year, rule["month"], rule["day"])
            end = _next_day(start)
        elif kind == "nth_weekday":
            day = _nth_weekday(year, rule["month"], rule["weekday"], rule["n"])
            start = datetime(year, rule["month"], day)
            end = _next_day(start)
        elif kind == "span":
            sm, sd = rule["start"]
            em, ed = rule["end"]
            start = datetime(year, sm, sd)
            end_year = year + 1 if em < sm else year
            end = datetime(end_year, em, ed)
        else:
            raise KnowledgeError(f"unsupported calendar rule kind '{kind}'")
        window = DateWindow(name=key, start=start, end=end)
        window.validate()
        return window

    # -- category vocabulary --------------------------------------------------

    def expand_term(self, term: str) -> list[str]:
        """Schema labels the synonym file maps a user term to ([] when absent)."""
        return list(self._synonyms.get(normalize_term(term), []))

    def discover_labels(self, term: str, table: str, store) -> list[tuple[str, float]]:
        """Rank the table's distinct category labels against a user term.

        Matching: (1) a term token (>= 4 chars) contained in the label,
        scored len(token)/len(label); (2) normalized edit-distance similarity
        >= 0.6 between term tokens (or the whole term) and label tokens (or
        the whole label). Returns (label, score) sorted by descending score.
        """
        _, rows = store.query(
            f"SELECT DISTINCT category_name FROM {table} ORDER BY category_name"
        )
        labels = [r[0] for r in rows]
        norm = normalize_term(term)
        tokens = [t for t in re.split(r"[^a-z0-9]+", norm) if len(t) >= MIN_TOKEN_LENGTH]

        scored = []
        for label in labels:
            score = _label_score(norm, tokens, label)
            if score > 0:
                scored.append((label, score))
        scored.sort(key=lambda item: (-item[1], item[0]))
        return scored

    def daypart(self, hour: int) -> str:
        return daypart(hour)


def _label_score(norm_term: str, tokens: list[str], label: str) -> float:
    ll = normalize_term(label)
    label_tokens = [t for t in re.split(r"[^a-z0-9]+", ll) if t]
    best = 0.0
    for tok in tokens:
        if tok in ll:
            best = max(best, len(tok) / len(ll))
        for lt in label_tokens:
            sim = edit_similarity(tok, lt)
            if sim >= EDIT_SIMILARITY_THRESHOLD:
                best = max(best, sim)
    if len(norm_term) >= MIN_TOKEN_LENGTH:
        sim = edit_similarity(norm_term, ll)
        if sim >= EDIT_SIMILARITY_THRESHOLD:
            best = max(best, sim)
    return best


def _next_day(d: datetime) -> datetime:
    return datetime.fromordinal(d.toordinal() + 1)


def _nth_weekday(year: int, month: int, weekday: int, n: int) -> int:
    """Day of month of the nth given weekday (Monday=0)."""
    first = datetime(year, month, 1).weekday()
    offset = (weekday - first) % 7
    day = 1 + offset + (n - 1) * 7
    if day > calendar.monthrange(year, month)[1]:
        raise KnowledgeError(f"no {n}th weekday {weekday} in {year}-{month:02d}")
    return day
