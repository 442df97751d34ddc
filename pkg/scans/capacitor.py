"""
Capacitor scans: atoms in the gap, in-plane separation swept in units of D.

Each scan writes the full-series curve as the primary series and the
curve of the asymptotic Green function as the "asymptotic" companion.
"""
from typing import Dict

import numpy as np

from core.energies import asymptotic_breakdown, pair_energies
from core.errors import ConfigError
from core.forces import capacitor_asymptotic_force, force_on_atom
from core.model import AtomPair, Capacitor, FreeSpace
from core.runner import run_sweep
from scans.rows import breakdown_row, require_geometry

SWEEP_PARAMETER = "R_AB/D"


class CapacitorRatioScan:
    def __init__(self, config):
        self.name = "capacitor-ratio"
        self.config = config
        self.spec = config.scan
        self.geometry = require_geometry(self.spec, (Capacitor,), self.name)
        if self.spec.sweep.parameter != SWEEP_PARAMETER:
            raise ConfigError(f"[scan] parameter: {self.name} sweeps {SWEEP_PARAMETER}, got {self.spec.sweep.parameter}")

    def positions(self, x: float):
        z_a, z_b = self.spec.place("z_a", 0.0), self.spec.place("z_b", 0.0)
        return np.array([0.0, 0.0, z_a]), np.array([x * self.geometry.D, 0.0, z_b])

    def evaluate(self, x: float) -> Dict:
        rA, rB = self.positions(x)
        b = pair_energies(self.spec.coupling, self.geometry, rA, rB, self.config.series)
        return breakdown_row(x, b)

    def evaluate_asymptotic(self, x: float) -> Dict:
        rA, rB = self.positions(x)
        return breakdown_row(x, asymptotic_breakdown(self.spec.coupling, rA, rB, self.geometry.D))

    def run(self) -> Dict:
        samples = self.spec.sweep.values()
        full = run_sweep(self.name, self.evaluate, samples)
        asymptotic = run_sweep(f"{self.name} (asymptotic)", self.evaluate_asymptotic, samples)
        return {
            "rows": full["rows"],
            "series": {"asymptotic": asymptotic["rows"]},
            "logs": full["logs"] + asymptotic["logs"],
            "status": full["status"],
        }


class CapacitorForceScan(CapacitorRatioScan):
    """
    Non-additive force on B along the in-plane separation, divided by the
    London force along the same direction. fx_na..fz_na carry the full
    non-additive force vector.
    """

    def __init__(self, config):
        super().__init__(config)
        self.name = "capacitor-force"

    def atoms(self, x: float) -> AtomPair:
        rA, rB = self.positions(x)
        pol = self.spec.polarization
        return AtomPair(r_a=tuple(rA), r_b=tuple(rB), polarization_a=pol, polarization_b=pol)

    def evaluate(self, x: float) -> Dict:
        cfg = self.config
        atoms = self.atoms(x)
        rA, rB = atoms.positions
        forces = force_on_atom("B", self.spec.coupling, atoms, self.geometry, cfg.fd, cfg.series)
        b = pair_energies(self.spec.coupling, self.geometry, rA, rB, cfg.series)
        ratio = forces.f_na[0] / forces.f_london[0]
        return breakdown_row(x, b, ratio=float(ratio), force=forces.f_na)

    def evaluate_asymptotic(self, x: float) -> Dict:
        cfg = self.config
        atoms = self.atoms(x)
        rA, rB = atoms.positions
        london = force_on_atom("B", self.spec.coupling, atoms, FreeSpace(), cfg.fd).f_london
        f_na = capacitor_asymptotic_force("B", self.spec.coupling, atoms, self.geometry.D, cfg.fd)
        b = asymptotic_breakdown(self.spec.coupling, rA, rB, self.geometry.D)
        return breakdown_row(x, b, ratio=float(f_na[0] / london[0]), force=f_na)
