from typing import Dict

import numpy as np

from core.energies import pair_energies
from core.errors import ConfigError
from core.model import Plane
from core.runner import run_sweep
from scans.rows import breakdown_row, require_geometry


class PlaneScan:
    """
    Two atoms above a grounded plane. Sweeps either the separation R_AB at
    fixed heights (h_a, h_b) or a common height h at fixed R_AB.
    """

    def __init__(self, config):
        self.name = "plane-scan"
        self.config = config
        self.spec = config.scan
        require_geometry(self.spec, (Plane,), self.name)
        if self.spec.sweep.parameter not in ("R_AB", "h"):
            raise ConfigError(f"[scan] parameter: {self.name} sweeps R_AB or h, got {self.spec.sweep.parameter}")

    def positions(self, value: float):
        spec = self.spec
        if spec.sweep.parameter == "R_AB":
            h_a, h_b = spec.place("h_a", 1.0), spec.place("h_b", 1.0)
            return np.array([0.0, 0.0, h_a]), np.array([value, 0.0, h_b])
        R = spec.place("R_AB", 1.0)
        return np.array([0.0, 0.0, value]), np.array([R, 0.0, value])

    def evaluate(self, value: float) -> Dict:
        rA, rB = self.positions(value)
        b = pair_energies(self.spec.coupling, self.spec.geometry, rA, rB, self.config.series)
        return breakdown_row(value, b)

    def run(self) -> Dict:
        state = run_sweep(self.name, self.evaluate, self.spec.sweep.values())
        return {"rows": state["rows"], "series": {}, "logs": state["logs"], "status": state["status"]}
