"""
SQLite ledger of estimation runs.
"""

import json
import sqlite3
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Optional

from hybridmc.adaptive.controller import EstimateReport


@dataclass
class RunRecord:
    """One ledger row."""
    id: Optional[int] = None
    created_at: str = ""
    mode: str = ""
    seed: int = 0
    epsilon: Optional[float] = None
    estimate: float = 0.0
    converged: bool = False
    report: str = ""


class RunStore:
    """Appends estimate reports to a `runs` table and lists them back."""

    def __init__(self, db_path: str = "hybridmc.db"):
        self.db_path = db_path
        self._init_tables()

    def _get_connection(self) -> sqlite3.Connection:
        conn = sqlite3.connect(self.db_path)
        conn.row_factory = sqlite3.Row
        return conn

    def _init_tables(self):
        conn = self._get_connection()
        conn.execute("""
            CREATE TABLE IF NOT EXISTS runs (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                created_at TEXT NOT NULL,
                mode TEXT NOT NULL,
                seed INTEGER NOT NULL,
                epsilon REAL,
                estimate REAL NOT NULL,
                converged INTEGER NOT NULL,
                report TEXT NOT NULL
            )
        """)
        conn.commit()
        conn.close()

    def record(self, report: EstimateReport) -> int:
        """Store a report; returns the new row id."""
        conn = self._get_connection()
        now = datetime.now(timezone.utc).isoformat()
        try:
            cursor = conn.execute("""
                INSERT INTO runs (created_at, mode, seed, epsilon, estimate, converged, report)
                VALUES (?, ?, ?, ?, ?, ?, ?)
            """, (now, report.mode, report.seed, report.epsilon, report.estimate,
                  int(report.converged), report.model_dump_json()))
            conn.commit()
            return int(cursor.lastrowid)
        finally:
            conn.close()

    def list_runs(self, limit: int = 50) -> list[RunRecord]:
        """Most recent runs first."""
        conn = self._get_connection()
        try:
            rows = conn.execute(
                "SELECT * FROM runs ORDER BY id DESC LIMIT ?", (limit,)
            ).fetchall()
        finally:
            conn.close()
        return [
            RunRecord(
                id=row["id"],
                created_at=row["created_at"],
                mode=row["mode"],
                seed=row["seed"],
                epsilon=row["epsilon"],
                estimate=row["estimate"],
                converged=bool(row["converged"]),
                report=row["report"],
            )
            for row in rows
        ]

    def get_report(self, run_id: int) -> Optional[EstimateReport]:
        conn = self._get_connection()
        try:
            row = conn.execute("SELECT report FROM runs WHERE id = ?", (run_id,)).fetchone()
        finally:
            conn.close()
        return None if row is None else EstimateReport.model_validate(json.loads(row["report"]))


# Global store instance
_store: Optional[RunStore] = None


def get_store() -> RunStore:
    """Get the run store, opening the configured database on first use."""
    global _store
    if _store is None:
        from hybridmc.config import get_settings
        _store = RunStore(get_settings().database_path)
    return _store


def init_store(db_path: str) -> RunStore:
    """Open (and create if needed) the run ledger at db_path."""
    global _store
    _store = RunStore(db_path)
    return _store
