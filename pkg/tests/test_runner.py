import time

import pytest

from core.errors import ConfigError, ConvergenceError
from core.runner import run_sweep
from core.settings import DEFAULT_MAX_THREADS, scan_threads


def test_rows_keep_sweep_order():
    def evaluate(x):
        time.sleep(0.01 * (5 - x))
        return {"param": x}

    state = run_sweep("order", evaluate, list(range(5)), max_workers=4)
    assert [row["param"] for row in state["rows"]] == list(range(5))
    assert state["status"] == "complete"
    assert state["name"] == "order"
    assert len(state["logs"]) == 2


def test_unconverged_row_aborts():
    with pytest.raises(ConvergenceError, match="0.5"):
        run_sweep("bad", lambda x: {"param": x, "converged": x != 0.5}, [0.0, 0.5, 1.0])


def test_errors_propagate():
    def evaluate(x):
        raise ConfigError("boom")

    with pytest.raises(ConfigError):
        run_sweep("raise", evaluate, [1, 2])


def test_thread_setting(monkeypatch):
    monkeypatch.delenv("DISPERSIA_THREADS", raising=False)
    assert 1 <= scan_threads() <= DEFAULT_MAX_THREADS
    monkeypatch.setenv("DISPERSIA_THREADS", "7")
    assert scan_threads() == 7
    for bad in ("0", "two"):
        monkeypatch.setenv("DISPERSIA_THREADS", bad)
        with pytest.raises(ConfigError):
            scan_threads()
