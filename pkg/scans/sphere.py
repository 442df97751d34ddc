"""
Sphere scans: transverse force, isolated-vs-grounded suppression, the
small-radius triple-dipole limit and the angular dependence.
"""
from typing import Dict

import numpy as np

from core.energies import pair_energies, sphere_colinear_closed_form, sphere_pair_positions
from core.errors import ConfigError
from core.forces import sphere_transverse_forces, sphere_transverse_pair
from core.model import SPHERES, SphereGrounded, SphereIsolated
from core.runner import run_sweep
from scans.rows import breakdown_row, require_geometry, require_placement


def _sweeps(spec, name: str, parameter: str) -> None:
    if spec.sweep.parameter != parameter:
        raise ConfigError(f"[scan] parameter: {name} sweeps {parameter}, got {spec.sweep.parameter}")


class SphereForceScan:
    """
    B at r_B (swept in units of a), A at distance R_AB perpendicular to r_B.
    One series per configured separation; the first is the primary.
    """

    def __init__(self, config):
        self.name = "sphere-force"
        self.config = config
        self.spec = config.scan
        self.geometry = require_geometry(self.spec, SPHERES, self.name)
        _sweeps(self.spec, self.name, "r_B/a")
        if not self.spec.separations:
            raise ConfigError(f"[scan] separations: missing key, required by {self.name}")

    def evaluator(self, R_AB: float):
        cfg = self.config
        a = self.geometry.a
        grounded = isinstance(self.geometry, SphereGrounded)

        def evaluate(x: float) -> Dict:
            f_na, f_london = sphere_transverse_forces(x * a, R_AB, a, grounded, self.spec.coupling, cfg.fd, cfg.series)
            rA, rB = sphere_transverse_pair(x * a, R_AB).positions
            b = pair_energies(self.spec.coupling, self.geometry, rA, rB, cfg.series)
            return breakdown_row(x, b, ratio=f_na / f_london, force=(0.0, f_na, 0.0))

        return evaluate

    def run(self) -> Dict:
        samples = self.spec.sweep.values()
        states = [run_sweep(f"{self.name} R_AB={R:g}", self.evaluator(R), samples)
                  for R in self.spec.separations]
        first, rest = states[0], states[1:]
        series = {f"sep_{R:g}": s["rows"] for R, s in zip(self.spec.separations[1:], rest)}
        logs = [line for s in states for line in s["logs"]]
        return {"rows": first["rows"], "series": series, "logs": logs, "status": first["status"]}


class SphereIsoVsGroundedScan:
    """
    Colinear pair on one side of the sphere: A at r_A (swept in units of a),
    B further out at r_A + R_AB. The ratio column is E_NA(isolated) / E_NA(grounded).
    Companions: the grounded breakdown, and the same ratio from the closed forms.
    """

    def __init__(self, config):
        self.name = "sphere-iso-vs-grounded"
        self.config = config
        self.spec = config.scan
        sphere = require_geometry(self.spec, SPHERES, self.name)
        _sweeps(self.spec, self.name, "r_A/a")
        self.a = sphere.a
        self.R_AB = self.spec.place("R_AB", 0.002 * self.a)
        self.grounded = SphereGrounded(a=self.a)
        self.isolated = SphereIsolated(a=self.a)

    def positions(self, x: float):
        r_a = x * self.a
        return np.array([0.0, 0.0, r_a]), np.array([0.0, 0.0, r_a + self.R_AB])

    def evaluate(self, x: float) -> Dict:
        cfg = self.config
        rA, rB = self.positions(x)
        iso = pair_energies(self.spec.coupling, self.isolated, rA, rB, cfg.series)
        grd = pair_energies(self.spec.coupling, self.grounded, rA, rB, cfg.series)
        return breakdown_row(x, iso, ratio=iso.e_na_total / grd.e_na_total)

    def evaluate_grounded(self, x: float) -> Dict:
        rA, rB = self.positions(x)
        return breakdown_row(x, pair_energies(self.spec.coupling, self.grounded, rA, rB, self.config.series))

    def evaluate_closed_form(self, x: float) -> Dict:
        r_a, r_b = x * self.a, x * self.a + self.R_AB
        iso1, iso2 = sphere_colinear_closed_form(self.spec.coupling, r_a, r_b, self.a, opposite=False, grounded=False)
        grd1, grd2 = sphere_colinear_closed_form(self.spec.coupling, r_a, r_b, self.a, opposite=False, grounded=True)
        return {
            "param": x,
            "e_na1": iso1,
            "e_na2": iso2,
            "e_na_total": iso1 + iso2,
            "ratio": (iso1 + iso2) / (grd1 + grd2),
            "converged": True,
        }

    def run(self) -> Dict:
        samples = self.spec.sweep.values()
        main = run_sweep(self.name, self.evaluate, samples)
        grounded = run_sweep(f"{self.name} (grounded)", self.evaluate_grounded, samples)
        closed = run_sweep(f"{self.name} (closed form)", self.evaluate_closed_form, samples)
        return {
            "rows": main["rows"],
            "series": {"grounded": grounded["rows"], "closed_form": closed["rows"]},
            "logs": main["logs"] + grounded["logs"] + closed["logs"],
            "status": main["status"],
        }


def triple_dipole_scale(rA, rB, a: float) -> float:
    """R^3 r_A^3 r_B^3 / a^3, which turns E_NA into its small-radius constant."""
    R = np.linalg.norm(rA - rB)
    return float(R ** 3 * np.linalg.norm(rA) ** 3 * np.linalg.norm(rB) ** 3 / a ** 3)


class AxilrodLimitScan:
    """
    Fixed atoms, sphere radius a swept (usually downward, log spacing).
    The primary series is the isolated sphere; "grounded" is the control.
    The ratio column holds E_NA R^3 r_A^3 r_B^3 / a^3. The configured radius
    is replaced by the swept one.
    """

    def __init__(self, config):
        self.name = "axilrod-limit"
        self.config = config
        self.spec = config.scan
        require_geometry(self.spec, (SphereIsolated,), self.name)
        _sweeps(self.spec, self.name, "a")
        self.rA, self.rB = sphere_pair_positions(
            require_placement(self.spec, "r_a", self.name),
            require_placement(self.spec, "r_b", self.name),
            self.spec.place("theta", np.pi),
        )

    def evaluator(self, sphere_cls):
        cfg = self.config

        def evaluate(a: float) -> Dict:
            b = pair_energies(self.spec.coupling, sphere_cls(a=a), self.rA, self.rB, cfg.series)
            return breakdown_row(a, b, ratio=b.e_na_total * triple_dipole_scale(self.rA, self.rB, a))

        return evaluate

    def run(self) -> Dict:
        samples = self.spec.sweep.values()
        iso = run_sweep(self.name, self.evaluator(SphereIsolated), samples)
        grd = run_sweep(f"{self.name} (grounded)", self.evaluator(SphereGrounded), samples)
        return {"rows": iso["rows"], "series": {"grounded": grd["rows"]},
                "logs": iso["logs"] + grd["logs"], "status": iso["status"]}


class SphereAngleScan:
    """A on the polar axis at r_a, B at r_b and polar angle theta (swept, radians)."""

    def __init__(self, config):
        self.name = "sphere-angle"
        self.config = config
        self.spec = config.scan
        self.geometry = require_geometry(self.spec, SPHERES, self.name)
        _sweeps(self.spec, self.name, "theta")
        self.r_a = require_placement(self.spec, "r_a", self.name)
        self.r_b = require_placement(self.spec, "r_b", self.name)

    def evaluate(self, theta: float) -> Dict:
        rA, rB = sphere_pair_positions(self.r_a, self.r_b, theta)
        b = pair_energies(self.spec.coupling, self.geometry, rA, rB, self.config.series)
        return breakdown_row(theta, b)

    def run(self) -> Dict:
        state = run_sweep(self.name, self.evaluate, self.spec.sweep.values())
        return {"rows": state["rows"], "series": {}, "logs": state["logs"], "status": state["status"]}
