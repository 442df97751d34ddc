"""
Interaction energies of two ground-state atoms near a conductor.

Pair energy to second order: E_Lon + E_NA1 + E_NA2, where the non-additive
terms are built from the image tensor t = grad grad' G_H alone. First-order
atom-surface energies come from the coincident image tensor.
"""
from itertools import combinations
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from core.errors import CoincidentPointError
from core.greens import MIRROR_Z, require_distinct, validate_point
from core.model import (
    EPSILON_0,
    AtomPolarization,
    Capacitor,
    FreeSpace,
    PairCoupling,
    SeriesCtrl,
    Tensor3,
    UnitMode,
    Vec3,
    as_vec3,
    reduced_prefactors,
)
from core.tensor import (
    g_tensor_capacitor,
    g_tensor_capacitor_asymptotic,
    gh_coincident_diag,
    gh_tensor,
)


class EnergyBreakdown(NamedTuple):
    e_london: float
    e_na1: float
    e_na2: float
    e_na_total: float
    ratio: float
    terms_used: int = 0
    converged: bool = True


def _separation(rA: Vec3, rB: Vec3) -> Tuple[float, Vec3]:
    rA, rB = as_vec3(rA), as_vec3(rB)
    R = require_distinct(rA, rB)
    return R, (rA - rB) / R


def _projection(t: Tensor3, u: Vec3) -> float:
    """Tr t - 3 u.t.u"""
    return float(np.trace(t) - 3.0 * u @ t @ u)


# --- Pair energies ---

def london_energy(coupling: PairCoupling, rA: Vec3, rB: Vec3) -> float:
    R, _ = _separation(rA, rB)
    return -reduced_prefactors(coupling).london_coeff / R ** 6


def ena1(coupling: PairCoupling, rA: Vec3, rB: Vec3, t: Tensor3) -> float:
    R, u = _separation(rA, rB)
    return -reduced_prefactors(coupling).na1_coeff / R ** 3 * _projection(t, u)


def ena2(coupling: PairCoupling, t: Tensor3) -> float:
    return -reduced_prefactors(coupling).na2_coeff * float(np.sum(np.asarray(t) ** 2))


def na_ratio(rA: Vec3, rB: Vec3, t: Tensor3) -> float:
    """E_NA / E_Lon; the coupling cancels."""
    R, u = _separation(rA, rB)
    t = np.asarray(t)
    return (4.0 * np.pi * R ** 3 / 3.0) * _projection(t, u) \
        + (8.0 * np.pi ** 2 * R ** 6 / 3.0) * float(np.sum(t ** 2))


def breakdown_from_tensor(coupling: PairCoupling, rA: Vec3, rB: Vec3, t: Tensor3,
                          terms_used: int = 0, converged: bool = True) -> EnergyBreakdown:
    e_lon = london_energy(coupling, rA, rB)
    e1 = ena1(coupling, rA, rB, t)
    e2 = ena2(coupling, t)
    return EnergyBreakdown(e_lon, e1, e2, e1 + e2, (e1 + e2) / e_lon, terms_used, converged)


def pair_energies(coupling: PairCoupling, geometry, rA: Vec3, rB: Vec3,
                  ctrl: SeriesCtrl = SeriesCtrl()) -> EnergyBreakdown:
    """London and non-additive energies of the pair in `geometry`."""
    ev = gh_tensor(geometry, rA, rB, ctrl)
    return breakdown_from_tensor(coupling, rA, rB, ev.t, ev.terms_used, ev.converged)


# --- Capacitor, full-G route ---

def crossed_energy_capacitor_direct(coupling: PairCoupling, rA: Vec3, rB: Vec3, D: float,
                                    ctrl: SeriesCtrl = SeriesCtrl()) -> float:
    """E_Lon + E_NA as one sum of squares of the full Green tensor."""
    full = g_tensor_capacitor(rA, rB, D, ctrl)
    return ena2(coupling, full.t)


def crossed_energy_capacitor_asymptotic(coupling: PairCoupling, rA: Vec3, rB: Vec3, D: float) -> float:
    return ena2(coupling, g_tensor_capacitor_asymptotic(rA, rB, D))


def asymptotic_breakdown(coupling: PairCoupling, rA: Vec3, rB: Vec3, D: float) -> EnergyBreakdown:
    """
    Breakdown with G replaced by its asymptotic form. Only the total is
    meaningful there, so e_na1 carries the whole non-additive part.
    """
    e_lon = london_energy(coupling, rA, rB)
    e_na = crossed_energy_capacitor_asymptotic(coupling, rA, rB, D) - e_lon
    return EnergyBreakdown(e_lon, e_na, 0.0, e_na, e_na / e_lon)


# --- First order ---

def atom_surface_energy(atom: AtomPolarization, geometry, r: Vec3,
                        ctrl: SeriesCtrl = SeriesCtrl(),
                        unit_mode: UnitMode = UnitMode.REDUCED) -> float:
    """(1/2 eps0) sum_m <d_m^2> t_mm(r, r)."""
    if isinstance(geometry, FreeSpace):
        as_vec3(r)
        return 0.0
    t = gh_coincident_diag(geometry, r, ctrl)
    eps0 = EPSILON_0 if unit_mode == UnitMode.SI else 1.0
    return float(np.dot(atom.d2, np.diag(t))) / (2.0 * eps0)


# --- Closed forms ---

def plane_ena1_closed_form(coupling: PairCoupling, rA: Vec3, rB: Vec3) -> float:
    """
    -Lambda (2 - 3 sin^2 theta - 3 sin^2 theta_img) / (72 pi^2 eps0^2 R^3 R_img^3),
    angles measured from the plane normal.
    """
    rA, rB = as_vec3(rA), as_vec3(rB)
    R = require_distinct(rA, rB)
    R_img = float(np.linalg.norm(rA - rB * MIRROR_Z))
    rho2 = float((rA[0] - rB[0]) ** 2 + (rA[1] - rB[1]) ** 2)
    shape = 2.0 - 3.0 * rho2 / R ** 2 - 3.0 * rho2 / R_img ** 2
    return -coupling.strength * shape / (72.0 * np.pi ** 2 * R ** 3 * R_img ** 3)


def sphere_pair_positions(r_a: float, r_b: float, theta: float) -> Tuple[Vec3, Vec3]:
    """A on the polar axis, B at polar angle theta (0: same side, pi: opposite)."""
    rA = np.array([0.0, 0.0, r_a])
    rB = np.array([0.0, r_b * np.sin(theta), r_b * np.cos(theta)])
    return rA, rB


def sphere_colinear_closed_form(coupling: PairCoupling, r_a: float, r_b: float, a: float,
                                opposite: bool, grounded: bool = True) -> Tuple[float, float]:
    """
    (E_NA1, E_NA2) for atoms on one line through the sphere centre, on
    opposite sides (theta = pi) or on the same side (theta = 0).
    """
    s = 1.0 if opposite else -1.0
    R = r_a + r_b if opposite else abs(r_a - r_b)
    if R == 0.0:
        raise CoincidentPointError(f"Atoms coincide at radius {r_a}")
    p = r_a * r_b
    den = p + s * a * a
    lam = coupling.strength
    if grounded:
        e1 = s * lam * a * p / (36.0 * np.pi ** 2 * R ** 3 * den ** 3)
        e2 = -lam * (3 * a ** 6 - s * 2 * a ** 4 * p + a ** 2 * p ** 2) / (144.0 * np.pi ** 2 * den ** 6)
        return e1, e2
    monopole = a / p ** 2
    e1 = s * lam / (36.0 * np.pi ** 2 * R ** 3) * (a * p / den ** 3 - monopole)
    axial = (a * p - s * a ** 3) / den ** 3 - monopole
    e2 = -lam / (144.0 * np.pi ** 2) * (axial ** 2 + 2 * a ** 6 / den ** 6)
    return e1, e2


# --- Several atoms ---

class ClusterEnergy(NamedTuple):
    pair_total: float
    surface_total: float
    total: float
    pairs: List[EnergyBreakdown]


def cluster_energy(coupling: PairCoupling, positions: Sequence[Vec3], geometry,
                   ctrl: SeriesCtrl = SeriesCtrl(),
                   polarizations: Optional[Sequence[AtomPolarization]] = None) -> ClusterEnergy:
    """
    Energy of N atoms to second order: pair terms add, each pair carrying its
    own non-additive correction, plus every atom's first-order surface energy.
    One coupling is used for all pairs.
    """
    points = [validate_point(geometry, p) for p in positions]
    if len(points) < 2:
        raise ValueError("cluster_energy needs at least two atoms")
    pairs = [pair_energies(coupling, geometry, points[i], points[j], ctrl)
             for i, j in combinations(range(len(points)), 2)]
    pair_total = sum(p.e_london + p.e_na_total for p in pairs)
    surface_total = 0.0
    if polarizations is not None:
        if len(polarizations) != len(points):
            raise ValueError("one polarization per atom is required")
        surface_total = sum(
            atom_surface_energy(pol, geometry, p, ctrl, coupling.unit_mode)
            for pol, p in zip(polarizations, points)
        )
    return ClusterEnergy(pair_total, surface_total, pair_total + surface_total, pairs)
