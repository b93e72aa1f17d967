"""Deterministic desk-scale check-in fixtures.

The public dataset is hundreds of thousands of rows; tests and the replay
suite run against a seeded 5,000-row synthetic sample per city written in the
source 8-column TSV layout, so ingestion exercises the real parsing path.
"""

from __future__ import annotations

import random
import zlib
from datetime import datetime, timedelta
from pathlib import Path

SPAN_START = datetime(2012, 4, 12)
SPAN_END = datetime(2013, 2, 16)
DEFAULT_ROWS = 5000
DEFAULT_SEED = 42

# hour-of-day weights shaped like the dataset's activity curve (8am peak,
# evening shoulder, late-night trough)
_HOUR_WEIGHTS = [
    2, 1, 1, 1, 1, 2, 5, 8, 12, 9, 7, 7, 9, 8, 7, 7, 8, 9, 11, 10, 8, 6, 4, 3,
]

_NYC_CATEGORIES = [
    ("Bar", 7),
    ("Nightclub", 3),
    ("Music Venue", 2),
    ("Coffee Shop", 6),
    ("Office", 8),
    ("Home (private)", 8),
    ("Gym / Fitness Center", 5),
    ("Train Station", 4),
    ("Subway", 5),
    ("Park", 4),
    ("American Restaurant", 6),
    ("Chinese Restaurant", 4),
    ("Pizza Place", 4),
    ("Laundry Service", 2),
    ("Department Store", 3),
    ("Food & Drink Shop", 3),
    ("Airport", 1),
    ("Hotel", 3),
    ("Bookstore", 2),
    ("Playground", 1),
]

_TOKYO_CATEGORIES = [
    ("Train Station", 14),
    ("Subway", 6),
    ("Ramen / Noodle House", 8),
    ("Bar", 6),
    ("Convenience Store", 8),
    ("Office", 6),
    ("Home (private)", 5),
    ("Coffee Shop", 4),
    ("Park", 3),
    ("Japanese Restaurant", 7),
    ("Music Venue", 2),
    ("Nightclub", 2),
    ("Gym / Fitness Center", 2),
    ("Hotel", 3),
    ("Department Store", 3),
    ("Airport", 1),
    ("Arcade", 2),
    ("Bookstore", 2),
]

# (zone box, weight); NYC zones mirror the knowledge file's regions so
# borough/park/landmark questions have data to count
_NYC_ZONES = [
    ((40.70, 40.88, -74.02, -73.92), 38),   # manhattan core
    ((40.5707, 40.7395, -74.0423, -73.8334), 20),  # brooklyn
    ((40.5091, 40.8007, -73.9642, -73.7004), 20),  # queens
    ((40.7644, 40.8005, -73.9818, -73.9495), 6),   # central park
    ((40.742, 40.765, -74.002, -73.958), 5),       # midtown
    ((40.70, 40.723, -74.019, -73.972), 5),        # downtown
    ((40.6195, 40.6631, -73.8255, -73.7307), 3),   # jfk
    ((40.56, 40.90, -74.05, -73.70), 3),           # elsewhere
]

_TOKYO_ZONES = [
    ((35.6, 35.75, 139.6, 139.8), 70),
    ((35.5, 35.9, 139.4, 139.95), 30),
]

CITY_TABLES = {"nyc": "checkins_nyc", "tokyo": "checkins_tokyo"}
_CITY_OFFSETS = {"nyc": -240, "tokyo": 540}
_CITY_CATEGORIES = {"nyc": _NYC_CATEGORIES, "tokyo": _TOKYO_CATEGORIES}
_CITY_ZONES = {"nyc": _NYC_ZONES, "tokyo": _TOKYO_ZONES}


def _weighted_choice(rng: random.Random, items: list) -> object:
    total = sum(w for _, w in items)
    pick = rng.random() * total
    acc = 0.0
    for value, weight in items:
        acc += weight
        if pick < acc:
            return value
    return items[-1][0]


def _format_utc(local: datetime, offset_minutes: int) -> str:
    utc = local - timedelta(minutes=offset_minutes)
    return utc.strftime("%a %b %d %H:%M:%S +0000 %Y")


def generate_city_rows(city: str, rows: int = DEFAULT_ROWS, seed: int = DEFAULT_SEED) -> list[str]:
    """TSV lines (8-column source layout) for one synthetic city sample."""
    rng = random.Random(f"{seed}-{city}")
    offset = _CITY_OFFSETS[city]
    categories = _CITY_CATEGORIES[city]
    zones = _CITY_ZONES[city]

    # a fixed venue pool per category so "top places" questions have structure
    venues = {}
    for cat, weight in categories:
        count = max(3, weight * 3)
        pool = []
        for k in range(count):
            zone = _weighted_choice(rng, zones)
            lat = round(rng.uniform(zone[0], zone[1]), 6)
            lon = round(rng.uniform(zone[2], zone[3]), 6)
            pool.append((f"v{city[0]}{len(venues):03d}{k:03d}", lat, lon))
        venues[cat] = pool

    users = [str(u) for u in range(100, 460)]
    span_seconds = int((SPAN_END - SPAN_START).total_seconds())
    hours = list(range(24))

    lines = []
    for _ in range(rows):
        cat = _weighted_choice(rng, categories)
        pool = venues[cat]
        # zipf-ish skew so a few venues dominate per category
        idx = min(int(rng.paretovariate(1.3)) - 1, len(pool) - 1)
        venue_id, lat, lon = pool[idx]
        user = rng.choice(users)
        day_offset = rng.randrange(span_seconds // 86400 + 1)
        hour = rng.choices(hours, weights=_HOUR_WEIGHTS, k=1)[0]
        local = SPAN_START + timedelta(
            days=day_offset, hours=hour, minutes=rng.randrange(60), seconds=rng.randrange(60)
        )
        if local >= SPAN_END:
            local = SPAN_END - timedelta(hours=1)
        cat_id = f"4bf58dd8d48988d1{zlib.crc32(cat.encode()) % 256:02x}941735"
        lines.append(
            "\t".join(
                [
                    user,
                    venue_id,
                    cat_id,
                    cat,
                    f"{lat:.6f}",
                    f"{lon:.6f}",
                    str(offset),
                    _format_utc(local, offset),
                ]
            )
        )
    return lines


def write_fixture_dataset(
    out_dir: str | Path, rows: int = DEFAULT_ROWS, seed: int = DEFAULT_SEED
) -> dict[str, Path]:
    """Write both city TSVs; returns {table_name: path}."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {}
    for city, table in CITY_TABLES.items():
        path = out_dir / f"{city}_fixture.tsv"
        lines = generate_city_rows(city, rows=rows, seed=seed)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        paths[table] = path
    return paths
