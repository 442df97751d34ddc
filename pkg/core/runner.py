from typing import Any, Callable, Dict, List, Sequence, TypedDict
from concurrent.futures import ThreadPoolExecutor

from core.errors import ConvergenceError
from core.logger import get_logger
from core.settings import scan_threads

logger = get_logger("runner")


class SweepState(TypedDict):
    name: str
    rows: List[Dict[str, Any]]
    logs: List[str]
    status: str


def run_sweep(
    name: str,
    evaluate: Callable[[Any], Dict[str, Any]],
    samples: Sequence[Any],
    max_workers: int = None,
) -> SweepState:
    """
    Evaluate every sample on a thread pool and return the rows in sweep order.
    Any row that reports converged=False aborts the sweep.
    """
    workers = max_workers or scan_threads()
    workers = max(1, min(workers, len(samples)))
    logs = [f"{name}: {len(samples)} samples on {workers} threads"]
    logger.info(f"→ {name}: evaluating {len(samples)} samples on {workers} threads")

    with ThreadPoolExecutor(max_workers=workers) as executor:
        rows = list(executor.map(evaluate, samples))

    for value, row in zip(samples, rows):
        if not row.get("converged", True):
            raise ConvergenceError(f"{name}: sample {value!r} did not converge")

    logs.append(f"{name}: {len(rows)} rows")
    logger.info(f"✅ {name}: {len(rows)} rows ready")
    return {"name": name, "rows": rows, "logs": logs, "status": "complete"}
