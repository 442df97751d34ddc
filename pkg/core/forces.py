"""
Forces on the atoms as minus the energy gradients.

Gradients are central differences refined by a Richardson tableau: the
step is halved at each level and the O(h^2) error terms are eliminated
one order per column, Neville style. The last two diagonal entries give
the error estimate.
"""
from typing import Callable, NamedTuple, Tuple

import numpy as np

from core.energies import asymptotic_breakdown, atom_surface_energy, london_energy, pair_energies
from core.errors import ConvergenceError, GeometryError, StencilDomainError
from core.greens import boundary_distance, require_distinct, validate_point
from core.logger import get_logger
from core.model import (
    AtomPair,
    Capacitor,
    FdCtrl,
    FreeSpace,
    PairCoupling,
    SeriesCtrl,
    SphereGrounded,
    SphereIsolated,
    Vec3,
)

logger = get_logger("forces")

DEFAULT_RELATIVE_STEP = 1e-5
RICHARDSON_RTOL = 1e-4
# round-off allowance, in units of eps * |E| / h
ROUNDOFF_FACTOR = 1e3


class ForceBreakdown(NamedTuple):
    f_london: Vec3
    f_na: Vec3
    f_surface_first_order: Vec3
    error_estimate: float = 0.0

    @property
    def total(self) -> Vec3:
        return self.f_london + self.f_na + self.f_surface_first_order


# --- Richardson-refined central differences ---

def richardson_gradient(
    energy: Callable[[Vec3], np.ndarray],
    r: Vec3,
    step: float,
    levels: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Gradient of `energy` at r, one column per coordinate. `energy` may return
    several energies at once (shape (m,)); the result then has shape (m, 3).
    Returns (gradient, error) where error holds, per energy, the norm of the
    difference between the two last diagonal entries of the tableau.
    """
    r = np.asarray(r, dtype=float)
    eye = np.eye(3)
    scale = 0.0

    def central(h):
        nonlocal scale
        columns = []
        for i in range(3):
            up = np.atleast_1d(energy(r + h * eye[i]))
            down = np.atleast_1d(energy(r - h * eye[i]))
            scale = np.maximum(scale, np.maximum(np.abs(up), np.abs(down)))
            columns.append((up - down) / (2.0 * h))
        return np.stack(columns, axis=-1)

    tableau = [[central(step)]]
    h = step
    for k in range(1, levels + 1):
        h /= 2.0
        row = [central(h)]
        for m in range(1, k + 1):
            prev = row[m - 1]
            row.append(prev + (prev - tableau[k - 1][m - 1]) / (4.0 ** m - 1.0))
        tableau.append(row)

    best = tableau[-1][-1]
    if levels == 0:
        return best, np.zeros(best.shape[0])
    diff = best - tableau[-2][-1]
    error = np.linalg.norm(diff, axis=-1)
    floor = ROUNDOFF_FACTOR * np.finfo(float).eps * scale / h
    bound = RICHARDSON_RTOL * np.linalg.norm(best, axis=-1) + floor
    if np.any(error > bound):
        raise ConvergenceError(
            f"Richardson levels disagree at r={r}: error {error} exceeds {bound} (step {step:.3e})"
        )
    return best, error


def default_step(geometry, r: Vec3, partner: Vec3) -> float:
    """1e-5 of the smaller of the boundary distance and the pair separation."""
    length = min(boundary_distance(geometry, r), float(np.linalg.norm(r - partner)))
    return DEFAULT_RELATIVE_STEP * length


def _check_stencil(geometry, r: Vec3, partner: Vec3, step: float) -> None:
    for i in range(3):
        for sign in (1.0, -1.0):
            p = r.copy()
            p[i] += sign * step
            try:
                validate_point(geometry, p)
                require_distinct(p, partner)
            except GeometryError as e:
                raise StencilDomainError(
                    f"Finite-difference step {step:.3e} at {r} leaves the valid region: {e.detail}"
                ) from e


def _resolve_step(geometry, r: Vec3, partner: Vec3, fd: FdCtrl) -> float:
    if fd.base_step is not None:
        step = fd.base_step
    else:
        step = default_step(geometry, r, partner)
        limit = 0.5 * min(boundary_distance(geometry, r), float(np.linalg.norm(r - partner)))
        step = min(step, limit)
    _check_stencil(geometry, r, partner, step)
    return step


# --- Forces ---

def force_on_atom(
    which: str,
    coupling: PairCoupling,
    atoms: AtomPair,
    geometry,
    fd: FdCtrl = FdCtrl(),
    ctrl: SeriesCtrl = SeriesCtrl(),
) -> ForceBreakdown:
    """
    London, non-additive and first-order surface force on atom `which`
    ("A" or "B"), each minus the gradient of its own energy.
    """
    if which not in ("A", "B"):
        raise ValueError(f"which must be 'A' or 'B', got {which!r}")
    rA, rB = atoms.positions
    rA = validate_point(geometry, rA)
    rB = validate_point(geometry, rB)
    require_distinct(rA, rB)
    moving, partner = (rA, rB) if which == "A" else (rB, rA)
    polarization = atoms.polarization_a if which == "A" else atoms.polarization_b

    def energies(r):
        pair = (r, partner) if which == "A" else (partner, r)
        na = pair_energies(coupling, geometry, pair[0], pair[1], ctrl).e_na_total
        surface = atom_surface_energy(polarization, geometry, r, ctrl, coupling.unit_mode)
        return np.array([london_energy(coupling, *pair), na, surface])

    step = _resolve_step(geometry, moving, partner, fd)
    grad, error = richardson_gradient(energies, moving, step, fd.richardson_levels)
    logger.debug(f"force on {which}: step={step:.3e}, richardson error={error}")
    return ForceBreakdown(-grad[0], -grad[1], -grad[2], float(np.max(error)))


def capacitor_asymptotic_force(
    which: str,
    coupling: PairCoupling,
    atoms: AtomPair,
    D: float,
    fd: FdCtrl = FdCtrl(),
) -> Vec3:
    """Non-additive force on `which` with G replaced by its asymptotic form."""
    geometry = Capacitor(D=D)
    rA, rB = atoms.positions
    moving, partner = (rA, rB) if which == "A" else (rB, rA)

    def na(r):
        pair = (r, partner) if which == "A" else (partner, r)
        return asymptotic_breakdown(coupling, pair[0], pair[1], D).e_na_total

    step = _resolve_step(geometry, moving, partner, fd)
    grad, _ = richardson_gradient(na, moving, step, fd.richardson_levels)
    return -grad[0]


# --- Sphere transverse force ---

def sphere_transverse_pair(rB_dist: float, R_AB: float) -> AtomPair:
    """B on the polar axis at rB_dist, A displaced by R_AB along y, so R_AB is perpendicular to r_B."""
    return AtomPair(r_a=(0.0, R_AB, rB_dist), r_b=(0.0, 0.0, rB_dist))


def sphere_transverse_forces(
    rB_dist: float,
    R_AB: float,
    a: float,
    grounded: bool,
    coupling: PairCoupling = PairCoupling(),
    fd: FdCtrl = FdCtrl(),
    ctrl: SeriesCtrl = SeriesCtrl(),
) -> Tuple[float, float]:
    """
    (non-additive, London) force components on B along the unit vector from
    B to A. London is positive (attraction); the ratio of the two is the
    signed transverse observable.
    """
    if R_AB <= 0:
        raise GeometryError(f"R_AB must be positive, got {R_AB}")
    geometry = SphereGrounded(a=a) if grounded else SphereIsolated(a=a)
    forces = force_on_atom("B", coupling, sphere_transverse_pair(rB_dist, R_AB), geometry, fd, ctrl)
    return float(forces.f_na[1]), float(forces.f_london[1])


def sphere_transverse_force_ratio(
    rB_dist: float,
    R_AB: float,
    a: float,
    grounded: bool = True,
    coupling: PairCoupling = PairCoupling(),
    fd: FdCtrl = FdCtrl(),
    ctrl: SeriesCtrl = SeriesCtrl(),
) -> float:
    """|transverse non-additive force on B| / |London force along R_AB|."""
    f_na, f_london = sphere_transverse_forces(rB_dist, R_AB, a, grounded, coupling, fd, ctrl)
    return abs(f_na) / abs(f_london)


def free_space_london_check(coupling: PairCoupling, atoms: AtomPair, fd: FdCtrl = FdCtrl()) -> float:
    """Relative deviation of |f_london| from the power-law value 6|E_Lon|/R."""
    forces = force_on_atom("B", coupling, atoms, FreeSpace(), fd)
    rA, rB = atoms.positions
    R = float(np.linalg.norm(rA - rB))
    expected = 6.0 * abs(london_energy(coupling, rA, rB)) / R
    return abs(float(np.linalg.norm(forces.f_london)) - expected) / expected
