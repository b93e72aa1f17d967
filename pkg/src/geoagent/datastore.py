"""Relational store for check-in data.

Ingests the tab-separated check-in dataset into SQLite (behind the dialect
shim), exposes schema snapshots with sample rows, executes read-only SQL with
CSV persistence of full results, and pages persisted results back out.
"""

from __future__ import annotations

import csv
import logging
import os
import re
import sqlite3
import threading
from dataclasses import dataclass
from datetime import datetime, timedelta
from pathlib import Path

from . import dialect
from .sqlguard import analyze

logger = logging.getLogger(__name__)

CHECKIN_COLUMNS = [
    ("user_id", "TEXT"),
    ("place_id", "TEXT"),
    ("latitude", "REAL"),
    ("longitude", "REAL"),
    ("category_name", "TEXT"),
    ("checkin_time", "TIMESTAMP"),
]

DEFAULT_TABLES = ("checkins_nyc", "checkins_tokyo")

_TS_FORMAT = "%Y-%m-%d %H:%M:%S"
_RAW_TS_FORMAT = "%a %b %d %H:%M:%S %z %Y"  # e.g. "Tue Apr 03 18:00:09 +0000 2012"
_SESSION_RE = re.compile(r"^[A-Za-z0-9._-]+$")


class DatastoreError(Exception):
    pass


class UnknownTableError(DatastoreError):
    pass


class IngestError(DatastoreError):
    pass


class WriteStatementError(DatastoreError):
    pass


class SqlExecutionError(DatastoreError):
    """Execution failure; the message is the store's error text verbatim."""


class UnknownResultError(DatastoreError):
    pass


@dataclass
class CheckinRecord:
    user_id: str
    place_id: str
    latitude: float
    longitude: float
    category_name: str
    checkin_time: datetime

    def validate(self) -> None:
        if not (-90.0 <= self.latitude <= 90.0):
            raise ValueError(f"latitude {self.latitude} out of range")
        if not (-180.0 <= self.longitude <= 180.0):
            raise ValueError(f"longitude {self.longitude} out of range")
        if not self.category_name:
            raise ValueError("empty category_name")
        if not isinstance(self.checkin_time, datetime):
            raise ValueError("checkin_time is not a timestamp")


@dataclass(frozen=True)
class SchemaSnapshot:
    tables: list  # [(table_name, [(column, type), ...]), ...]
    samples: dict  # table_name -> list of up-to-3 rows in insertion order

    def table_names(self) -> list[str]:
        return [name for name, _ in self.tables]


@dataclass(frozen=True)
class ExecutionOutcome:
    result_id: str
    row_count: int
    columns: list[str]
    preview: list[list]
    result_path: str


@dataclass(frozen=True)
class ResultPage:
    rows: list[list[str]]
    total: int
    columns: list[str]


@dataclass
class IngestStats:
    inserted: int = 0
    skipped_invalid: int = 0
    unparseable: int = 0
    total_lines: int = 0
    first_bad_line: int | None = None


def serialize_cell(value) -> str:
    """Canonical text form used both for CSV persistence and previews."""
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def parse_checkin_line(line: str, n_columns: int) -> CheckinRecord:
    """Parse one TSV line in either the 8-column source or 6-column layout."""
    parts = line.rstrip("\n").rstrip("\r").split("\t")
    if len(parts) != n_columns:
        raise ValueError(f"expected {n_columns} columns, got {len(parts)}")
    if n_columns == 8:
        user_id, venue_id, _cat_id, category, lat, lon, offset_min, raw_ts = parts
        utc = datetime.strptime(raw_ts.strip(), _RAW_TS_FORMAT)
        local = (utc + timedelta(minutes=int(offset_min))).replace(tzinfo=None)
        record = CheckinRecord(
            user_id=user_id,
            place_id=venue_id,
            latitude=float(lat),
            longitude=float(lon),
            category_name=category,
            checkin_time=local,
        )
    else:
        user_id, place_id, lat, lon, category, ts = parts
        record = CheckinRecord(
            user_id=user_id,
            place_id=place_id,
            latitude=float(lat),
            longitude=float(lon),
            category_name=category,
            checkin_time=datetime.strptime(ts.strip(), _TS_FORMAT),
        )
    return record


class CheckinStore:
    """SQLite-backed store satisfying the dialect contract.

    Reads are safe across threads/sessions (serialized on one connection);
    ingestion holds the write lock for its whole transaction. Result files are
    written once and never modified.
    """

    def __init__(
        self,
        db_path: str = ":memory:",
        artifact_root: str | Path = "artifacts",
        tables: tuple[str, ...] = DEFAULT_TABLES,
        skip_threshold: float = 0.01,
    ):
        self.db_path = db_path
        self.artifact_root = Path(artifact_root)
        self.checkin_tables = tuple(tables)
        self.skip_threshold = skip_threshold
        self._conn = sqlite3.connect(db_path, check_same_thread=False)
        dialect.register_functions(self._conn)
        self._lock = threading.RLock()
        self._result_meta: dict[tuple[str, str], dict] = {}
        self._result_counters: dict[str, int] = {}
        self.last_ingest: IngestStats | None = None
        self._create_tables()

    def close(self) -> None:
        self._conn.close()

    def _create_tables(self) -> None:
        cols = ", ".join(f"{name} {ctype}" for name, ctype in CHECKIN_COLUMNS)
        with self._lock:
            for table in self.checkin_tables:
                self._conn.execute(f"CREATE TABLE IF NOT EXISTS {table} ({cols})")
            self._conn.commit()

    # -- ingestion ---------------------------------------------------------

    def ingest_checkins(self, path: str | Path, table: str, limit: int | None = None) -> int:
        """Load a TSV file into `table`, replacing prior contents."""
        if table not in self.checkin_tables:
            raise UnknownTableError(f"'{table}' is not a configured check-in table")
        path = Path(path)
        if not path.exists():
            raise IngestError(f"file not found: {path}")

        stats = IngestStats()
        n_columns = None
        batch: list[tuple] = []
        with self._lock:
            self._conn.execute("BEGIN")
            try:
                self._conn.execute(f"DELETE FROM {table}")
                with open(path, encoding="utf-8", errors="replace") as fh:
                    for lineno, line in enumerate(fh, start=1):
                        if not line.strip():
                            continue
                        stats.total_lines += 1
                        if n_columns is None:
                            n_columns = len(line.rstrip("\n").rstrip("\r").split("\t"))
                            if n_columns not in (6, 8):
                                raise IngestError(
                                    f"line 1: unrecognized layout with {n_columns} columns"
                                )
                        try:
                            record = parse_checkin_line(line, n_columns)
                        except Exception:
                            stats.unparseable += 1
                            if stats.first_bad_line is None:
                                stats.first_bad_line = lineno
                            continue
                        try:
                            record.validate()
                        except ValueError:
                            stats.skipped_invalid += 1
                            continue
                        batch.append(
                            (
                                record.user_id,
                                record.place_id,
                                record.latitude,
                                record.longitude,
                                record.category_name,
                                record.checkin_time.strftime(_TS_FORMAT),
                            )
                        )
                        stats.inserted += 1
                        if len(batch) >= 5000:
                            self._insert_batch(table, batch)
                            batch = []
                        if limit is not None and stats.inserted >= limit:
                            break
                if batch:
                    self._insert_batch(table, batch)
                if stats.total_lines and stats.unparseable / stats.total_lines > self.skip_threshold:
                    raise IngestError(
                        f"{stats.unparseable}/{stats.total_lines} unparseable lines exceeds "
                        f"threshold {self.skip_threshold:.2%}; first bad line: {stats.first_bad_line}"
                    )
                self._conn.commit()
            except BaseException:
                self._conn.rollback()
                raise
        self.last_ingest = stats
        logger.info(
            "ingested %d rows into %s (%d invalid skipped, %d unparseable)",
            stats.inserted, table, stats.skipped_invalid, stats.unparseable,
        )
        return stats.inserted

    def _insert_batch(self, table: str, batch: list[tuple]) -> None:
        self._conn.executemany(
            f"INSERT INTO {table} VALUES (?, ?, ?, ?, ?, ?)", batch
        )

    # -- schema ------------------------------------------------------------

    def get_schema(self, table: str | None = None) -> SchemaSnapshot:
        """All tables (or one) with columns and up to 3 insertion-order sample rows."""
        with self._lock:
            names = [
                r[0]
                for r in self._conn.execute(
                    "SELECT name FROM sqlite_master WHERE type='table' ORDER BY name"
                )
            ]
            if table is not None:
                if table not in names:
                    raise UnknownTableError(f"no such table: {table}")
                names = [table]
            tables = []
            samples = {}
            for name in names:
                info = self._conn.execute(f"PRAGMA table_info({name})").fetchall()
                tables.append((name, [(row[1], row[2]) for row in info]))
                rows = self._conn.execute(
                    f"SELECT * FROM {name} ORDER BY rowid LIMIT 3"
                ).fetchall()
                samples[name] = [list(r) for r in rows]
        return SchemaSnapshot(tables=tables, samples=samples)

    # -- query execution ---------------------------------------------------

    def _check_read_only(self, sql: str) -> None:
        summary = analyze(sql).summary
        if summary.statement_kind != "select":
            raise WriteStatementError(
                "only single read-only SELECT statements are executable"
            )

    def query(self, sql: str) -> tuple[list[str], list[list]]:
        """Read-only query without persistence; for oracles and discovery."""
        self._check_read_only(sql)
        translated = dialect.to_sqlite(sql)
        with self._lock:
            try:
                cur = self._conn.execute(translated)
            except sqlite3.Error as exc:
                raise SqlExecutionError(str(exc)) from exc
            columns = [d[0] for d in cur.description] if cur.description else []
            rows = [list(r) for r in cur.fetchall()]
        return columns, rows

    def execute_sql(self, sql: str, session: str) -> ExecutionOutcome:
        """Execute read-only SQL; persist the full result as CSV for the session."""
        self._validate_session(session)
        self._check_read_only(sql)
        translated = dialect.to_sqlite(sql)

        session_dir = self.artifact_root / session
        session_dir.mkdir(parents=True, exist_ok=True)

        with self._lock:
            counter = self._result_counters.get(session, 0) + 1
            self._result_counters[session] = counter
            result_id = f"res-{counter:04d}"
            try:
                cur = self._conn.execute(translated)
            except sqlite3.Error as exc:
                self._result_counters[session] = counter - 1
                raise SqlExecutionError(str(exc)) from exc

            columns = [d[0] for d in cur.description] if cur.description else []
            path = session_dir / f"{result_id}.csv"
            tmp = session_dir / f".{result_id}.csv.tmp"
            row_count = 0
            preview: list[list] = []
            with open(tmp, "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(columns)
                while True:
                    chunk = cur.fetchmany(2000)
                    if not chunk:
                        break
                    for row in chunk:
                        writer.writerow([serialize_cell(v) for v in row])
                        if row_count < 3:
                            preview.append(list(row))
                        row_count += 1
            os.replace(tmp, path)
            self._result_meta[(session, result_id)] = {
                "path": str(path),
                "row_count": row_count,
                "columns": columns,
            }
        return ExecutionOutcome(
            result_id=result_id,
            row_count=row_count,
            columns=columns,
            preview=preview,
            result_path=str(path),
        )

    def read_result_file(
        self, session: str, result_id: str, offset: int = 0, limit: int = 100
    ) -> ResultPage:
        """Rows [offset, offset+limit) of a persisted result, plus the total."""
        meta = self._result_meta.get((session, result_id))
        if meta is None:
            meta = self._recover_result(session, result_id)
        if meta is None:
            raise UnknownResultError(f"no result '{result_id}' in session '{session}'")
        rows = []
        total = 0
        with open(meta["path"], encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            columns = next(reader, [])
            for i, row in enumerate(reader):
                if offset <= i < offset + limit:
                    rows.append(row)
                total += 1
        return ResultPage(rows=rows, total=total, columns=columns)

    def _recover_result(self, session: str, result_id: str) -> dict | None:
        """Rebuild index entries from disk so restarts keep results readable."""
        if not _SESSION_RE.match(session or "") or not _SESSION_RE.match(result_id or ""):
            return None
        path = self.artifact_root / session / f"{result_id}.csv"
        if not path.exists():
            return None
        meta = {"path": str(path), "row_count": None, "columns": None}
        self._result_meta[(session, result_id)] = meta
        return meta

    def _validate_session(self, session: str) -> None:
        if not _SESSION_RE.match(session or ""):
            raise DatastoreError(f"invalid session id: {session!r}")
