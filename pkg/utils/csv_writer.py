import csv
import sys
from pathlib import Path
from typing import Dict, List, Optional

from core.logger import get_logger

logger = get_logger("csv")

HEADER = [
    "param", "e_london", "e_na1", "e_na2", "e_na_total", "ratio",
    "fx_na", "fy_na", "fz_na", "terms_used", "converged",
]


def format_row(row: Dict, precision: int = 12) -> List[str]:
    """One CSV record; missing or None values become empty cells."""
    cells = []
    for key in HEADER:
        value = row.get(key)
        if value is None:
            cells.append("")
        elif key == "converged":
            cells.append("true" if value else "false")
        elif key == "terms_used":
            cells.append(str(int(value)))
        else:
            # + 0.0 maps -0.0 to 0.0
            cells.append(f"{float(value) + 0.0:.{precision}e}")
    return cells


def write_rows(rows: List[Dict], stream, precision: int = 12) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(HEADER)
    for row in rows:
        writer.writerow(format_row(row, precision))


def companion_path(path: Path, series: str) -> Path:
    """out.csv -> out.<series>.csv"""
    path = Path(path)
    return path.with_name(f"{path.stem}.{series}.csv")


def write_csv(rows: List[Dict], path: Optional[Path], precision: int = 12) -> None:
    if path is None:
        write_rows(rows, sys.stdout, precision)
        return
    with open(path, "w", encoding="utf-8", newline="") as f:
        write_rows(rows, f, precision)
    logger.info(f"✅ Wrote {len(rows)} rows to {path}")


def write_result(result: Dict, path: Optional[Path], precision: int = 12) -> List[Path]:
    """
    Primary rows to `path` (stdout when None), each companion series next
    to it. Returns the paths written.
    """
    write_csv(result["rows"], path, precision)
    series = result.get("series", {})
    if path is None:
        if series:
            logger.warning(f"⚠️ Companion series {sorted(series)} need --out; skipped")
        return []
    written = [Path(path)]
    for name, rows in series.items():
        target = companion_path(path, name)
        write_csv(rows, target, precision)
        written.append(target)
    return written
