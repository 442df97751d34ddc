"""
Oracle cross-checks behind `dispersia verify`.

Every check compares a pipeline quantity with an independent reference
and reports the measured residual next to its tolerance.
"""
from typing import Callable, Dict, List, NamedTuple

import numpy as np

from core.energies import crossed_energy_capacitor_direct, ena2, london_energy, pair_energies
from core.forces import free_space_london_check
from core.greens import (
    MIRROR_Z,
    boundary_distance,
    free_kernel,
    g_capacitor,
    gh_capacitor,
    gh_plane,
    gh_sphere_grounded,
    gh_sphere_isolated,
)
from core.model import AtomPair, Capacitor, FdCtrl, PairCoupling, Plane, SeriesCtrl, SphereGrounded
from core.oracle import (
    bessel_k_reference,
    capacitor_image_ladder,
    fd_mixed_hessian_estimate,
    harmonic_residual,
    high_cutoff_reference,
)
from core.runner import run_sweep
from core.specfun import bessel_k0, bessel_k1
from core.tensor import (
    g_tensor_capacitor,
    gh_tensor_plane,
    gh_tensor_sphere_grounded,
    gh_tensor_sphere_isolated,
)

# tight truncation so the FD oracle is not limited by series noise
FINE_SERIES = SeriesCtrl(rel_tol=1e-15)


class CheckResult(NamedTuple):
    name: str
    residual: float
    tolerance: float
    # the reference is trusted only when its own error is 10x below tolerance
    reference_ok: bool = True

    @property
    def passed(self) -> bool:
        return bool(self.reference_ok and np.isfinite(self.residual) and self.residual <= self.tolerance)


def relative_residual(value, reference) -> float:
    value, reference = np.asarray(value, dtype=float), np.asarray(reference, dtype=float)
    return float(np.max(np.abs(value - reference)) / np.max(np.abs(reference)))


def tensor_fd_check(name: str, field: Callable, tensor: Callable, rA, rB, geometry,
                    tolerance: float = 1e-6, fd: FdCtrl = FdCtrl()) -> CheckResult:
    """Analytic tensor(rA, rB) against the FD mixed Hessian of field(r, r')."""
    rA, rB = np.asarray(rA, dtype=float), np.asarray(rB, dtype=float)
    length = min(boundary_distance(geometry, rA), boundary_distance(geometry, rB),
                 float(np.linalg.norm(rA - rB)))
    reference = fd_mixed_hessian_estimate(field, rA, rB, fd, length=length)
    residual = relative_residual(tensor(rA, rB), reference.value)
    return CheckResult(name, residual, tolerance, reference.supports(tolerance))


# --- Checks ---

def check_plane_tensor() -> CheckResult:
    return tensor_fd_check("plane tensor vs FD", gh_plane, gh_tensor_plane,
                           [0.3, -0.2, 1.0], [1.1, 0.4, 0.7], Plane())


def check_sphere_tensors() -> List[CheckResult]:
    a = 1.0
    rA, rB = [0.4, 1.2, 0.9], [-1.0, 0.5, 1.3]
    sphere = SphereGrounded(a=a)
    return [
        tensor_fd_check("grounded sphere tensor vs FD",
                        lambda p, q: gh_sphere_grounded(p, q, a),
                        lambda p, q: gh_tensor_sphere_grounded(p, q, a), rA, rB, sphere),
        tensor_fd_check("isolated sphere tensor vs FD",
                        lambda p, q: gh_sphere_isolated(p, q, a),
                        lambda p, q: gh_tensor_sphere_isolated(p, q, a), rA, rB, sphere),
    ]


def check_capacitor_tensor() -> CheckResult:
    D = 1.0
    return tensor_fd_check("capacitor tensor vs FD",
                           lambda p, q: g_capacitor(p, q, D, FINE_SERIES).value,
                           lambda p, q: g_capacitor_full(p, q, D),
                           [0.0, 0.0, 0.1], [0.6, 0.3, -0.2], Capacitor(D=D))


def g_capacitor_full(rA, rB, D):
    return g_tensor_capacitor(rA, rB, D, FINE_SERIES).t


def check_capacitor_ladder() -> CheckResult:
    r, rp, D = np.zeros(3), np.array([0.5, 0.0, 0.0]), 1.0
    ladder, tolerance = capacitor_image_ladder(r, rp, D), 1e-8
    return CheckResult("capacitor series vs image ladder",
                       relative_residual(g_capacitor(r, rp, D).value, ladder.value), tolerance,
                       ladder.supports(tolerance))


def check_capacitor_cutoff() -> CheckResult:
    r, rp, D = np.array([0.0, 0.0, 0.2]), np.array([0.3, 0.0, -0.1]), 1.0
    adaptive = g_capacitor(r, rp, D)
    reference = high_cutoff_reference(r, rp, D, 10 * adaptive.terms_used)
    return CheckResult("capacitor series vs high cutoff", relative_residual(adaptive.value, reference), 1e-10)


def check_dirichlet() -> CheckResult:
    rp = np.array([0.1, -0.2, 0.3])
    residuals = []
    on_plane = np.array([0.4, 0.1, 0.0])
    residuals.append(abs(gh_plane(on_plane, rp + [0, 0, 0.7]) + free_kernel(on_plane, rp + [0, 0, 0.7]))
                     / free_kernel(on_plane, rp + [0, 0, 0.7]))
    on_sphere = np.array([0.6, 0.0, 0.8])
    far = np.array([0.5, 1.5, -0.4])
    residuals.append(abs(gh_sphere_grounded(on_sphere, far, 1.0) + free_kernel(on_sphere, far))
                     / free_kernel(on_sphere, far))
    on_plate = np.array([0.5, 0.2, 0.5])
    residuals.append(abs(g_capacitor(on_plate, rp, 1.0).value) / free_kernel(on_plate, rp))
    return CheckResult("Dirichlet condition", float(max(residuals)), 1e-9)


def check_symmetry() -> CheckResult:
    r, rp = np.array([0.1, 0.2, -0.3]), np.array([0.9, -0.4, 0.25])
    forward = gh_capacitor(r, rp, 1.0).value
    backward = gh_capacitor(rp, r, 1.0).value
    s1, s2 = np.array([1.2, 0.3, -0.5]), np.array([-0.4, 1.6, 0.9])
    residuals = [
        abs(forward - backward) / abs(forward),
        abs(gh_sphere_grounded(s1, s2, 1.0) - gh_sphere_grounded(s2, s1, 1.0)) / abs(gh_sphere_grounded(s1, s2, 1.0)),
    ]
    return CheckResult("Green symmetry", float(max(residuals)), 1e-12)


def check_harmonicity() -> CheckResult:
    h = 1e-3
    rp = np.array([0.2, -0.3, 0.25])
    r = np.array([-0.5, 0.6, -0.1])
    outside = np.array([0.0, 0.0, 1.2])
    fields = (
        lambda p: gh_plane(p + outside, rp + outside),
        lambda p: gh_capacitor(p, rp, 1.0, FINE_SERIES).value,
        lambda p: gh_sphere_grounded(p + outside, rp + outside, 1.0),
        lambda p: gh_sphere_isolated(p + outside, rp + outside, 1.0),
    )
    residuals = [harmonic_residual(field, r, h) for field in fields]
    return CheckResult("harmonicity of G_H", float(max(residuals)), 1e-4)


def check_plane_image_identity() -> CheckResult:
    coupling = PairCoupling()
    rA, rB = np.array([0.2, 0.1, 0.7]), np.array([1.3, -0.6, 1.9])
    image = london_energy(coupling, rA, rB * MIRROR_Z)
    return CheckResult("plane E_NA2 = London at image distance",
                       relative_residual(ena2(coupling, gh_tensor_plane(rA, rB)), image), 1e-12)


def check_capacitor_routes() -> CheckResult:
    coupling = PairCoupling()
    rA, rB, D = np.array([0.0, 0.0, 0.1]), np.array([0.8, 0.5, -0.15]), 1.0
    b = pair_energies(coupling, Capacitor(D=D), rA, rB)
    direct = crossed_energy_capacitor_direct(coupling, rA, rB, D)
    return CheckResult("capacitor direct vs decomposed energy",
                       relative_residual(direct, b.e_london + b.e_na_total), 1e-9)


def check_bessel() -> CheckResult:
    grid = np.geomspace(1e-6, 600.0, 60)
    residuals = []
    for x in grid:
        residuals.append(relative_residual(bessel_k0(x), bessel_k_reference(0, x)))
        residuals.append(relative_residual(bessel_k1(x), bessel_k_reference(1, x)))
    return CheckResult("K0, K1 vs extended precision", float(max(residuals)), 1e-13)


def check_london_force() -> CheckResult:
    atoms = AtomPair(r_a=(0.1, 0.2, 0.3), r_b=(1.0, -0.5, 1.2))
    return CheckResult("London force power law", free_space_london_check(PairCoupling(), atoms), 1e-8)


def default_checks() -> List[Callable]:
    return [
        check_plane_tensor,
        check_sphere_tensors,
        check_capacitor_tensor,
        check_capacitor_ladder,
        check_capacitor_cutoff,
        check_dirichlet,
        check_symmetry,
        check_harmonicity,
        check_plane_image_identity,
        check_capacitor_routes,
        check_bessel,
        check_london_force,
    ]


class Verifier:
    def __init__(self, checks: List[Callable] = None):
        self.name = "verify"
        self.checks = checks if checks is not None else default_checks()

    def evaluate(self, check: Callable) -> Dict:
        outcome = check()
        results = outcome if isinstance(outcome, list) else [outcome]
        return {"results": results}

    def run(self) -> Dict:
        state = run_sweep(self.name, self.evaluate, self.checks)
        results = [r for row in state["rows"] for r in row["results"]]
        failed = [r for r in results if not r.passed]
        return {
            "results": results,
            "failed": failed,
            "logs": state["logs"],
            "status": "failed" if failed else "passed",
        }
