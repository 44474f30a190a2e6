"""
Result files.

JSON and CSV floats are written with Python's shortest round-trip repr, so
every value reads back bit for bit. Files are UTF-8 with LF line endings
and contain nothing run-dependent besides the results, so identical runs
produce identical bytes.
"""

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence

from hybridmc.adaptive.controller import EstimateReport

LEVELS_HEADER = ("level", "N", "b_hat", "v_hat", "cost")
DECAY_HEADER = ("level", "payoff", "b_hat", "v_hat", "N")
COST_HEADER = (
    "epsilon", "smc_cost", "mlmc_cost", "mlmc_cost_std", "estimate", "estimate_std",
    "gain", "runs", "converged_runs", "converged",
)


def write_json(path: Path, data) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(data, indent=2, allow_nan=False) + "\n"
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    return path


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
    return path


def _cell(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return value


def write_report(report: EstimateReport, out_dir: str | Path) -> list[Path]:
    """report.json plus levels.csv."""
    out = Path(out_dir)
    rows = [(r.level, r.N, r.b_hat, r.v_hat, r.cost) for r in report.levels]
    return [
        write_json(out / "report.json", report.model_dump()),
        write_csv(out / "levels.csv", LEVELS_HEADER, rows),
    ]
