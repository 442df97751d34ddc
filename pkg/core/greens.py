"""
Scalar Green functions: the free kernel 1/(4 pi |r - r'|) and the
homogeneous (image) part G_H for each conductor geometry.

Capacitor: plates at z = -D/2 and z = +D/2. Far from coincidence the
Bessel series in the plate-anchored coordinate zeta = z + D/2 is summed;
for in-plane separations below LADDER_SWITCH * D the mirror-image ladder
is summed instead, with its far tail in closed form.
"""
from typing import Callable, NamedTuple, Tuple

import numpy as np
from scipy import special

from core.errors import (
    CoincidentPointError,
    ConvergenceError,
    InsideSphereError,
    NonPositiveHeightError,
    OutOfGapError,
)
from core.logger import get_logger
from core.model import (
    SPHERES,
    Capacitor,
    FreeSpace,
    Plane,
    SeriesCtrl,
    SphereGrounded,
    SphereIsolated,
    Vec3,
    as_vec3,
)

logger = get_logger("greens")

FOUR_PI = 4.0 * np.pi
LADDER_SWITCH = 0.05
LADDER_SHELLS = 64
MIRROR_Z = np.array([1.0, 1.0, -1.0])


class GreensEval(NamedTuple):
    value: float
    terms_used: int = 0  # Bessel terms; 0 on the image-ladder branch
    converged: bool = True


# --- Geometry preconditions ---

def boundary_distance(geometry, r: Vec3) -> float:
    """Distance from r to the nearest conductor surface."""
    r = as_vec3(r)
    if isinstance(geometry, Plane):
        return float(r[2])
    if isinstance(geometry, Capacitor):
        return float(geometry.D / 2 - abs(r[2]))
    if isinstance(geometry, SPHERES):
        return float(np.linalg.norm(r) - geometry.a)
    return float("inf")


def validate_point(geometry, r: Vec3, strict: bool = True) -> Vec3:
    """
    Check that r lies in the physical region of the geometry.
    strict=False admits points on the conductor itself.
    """
    r = as_vec3(r)
    if isinstance(geometry, FreeSpace):
        return r
    d = boundary_distance(geometry, r)
    if d > 0 or (d == 0 and not strict):
        return r
    if isinstance(geometry, Plane):
        raise NonPositiveHeightError(f"Point {r} must satisfy z > 0 above the plane")
    if isinstance(geometry, Capacitor):
        raise OutOfGapError(f"Point {r} must satisfy |z| < D/2 = {geometry.D / 2}")
    raise InsideSphereError(f"Point {r} must satisfy |r| > a = {geometry.a}")


def require_distinct(r: Vec3, rp: Vec3) -> float:
    dist = float(np.linalg.norm(r - rp))
    if dist == 0.0:
        raise CoincidentPointError(f"Coincident points {r}")
    return dist


# --- Free space ---

def free_kernel(r: Vec3, rp: Vec3) -> float:
    r, rp = as_vec3(r), as_vec3(rp)
    return 1.0 / (FOUR_PI * require_distinct(r, rp))


# --- Plane ---

def gh_plane(r: Vec3, rp: Vec3) -> float:
    """Image of unit charge at rp in the plane z = 0."""
    geometry = Plane()
    r = validate_point(geometry, r, strict=False)
    rp = validate_point(geometry, rp, strict=False)
    return -1.0 / (FOUR_PI * np.linalg.norm(r - rp * MIRROR_Z))


# --- Spheres ---

def sphere_image_distance(r: Vec3, rp: Vec3, a: float) -> float:
    """
    |rp| * |r - a^2 rp/|rp|^2|, which equals sqrt(r^2 r'^2 - 2 r.r' a^2 + a^4)
    without the cancellation of the expanded form near the surface.
    """
    rp2 = float(rp @ rp)
    return float(np.sqrt(rp2) * np.linalg.norm(r - (a * a / rp2) * rp))


def gh_sphere_grounded(r: Vec3, rp: Vec3, a: float) -> float:
    geometry = SphereGrounded(a=a)
    r = validate_point(geometry, r, strict=False)
    rp = validate_point(geometry, rp, strict=False)
    return -a / (FOUR_PI * sphere_image_distance(r, rp, a))


def gh_sphere_isolated(r: Vec3, rp: Vec3, a: float) -> float:
    """Grounded image plus the central charge that restores neutrality."""
    geometry = SphereIsolated(a=a)
    r = validate_point(geometry, r, strict=False)
    rp = validate_point(geometry, rp, strict=False)
    monopole = a / (FOUR_PI * np.linalg.norm(r) * np.linalg.norm(rp))
    return -a / (FOUR_PI * sphere_image_distance(r, rp, a)) + monopole


# --- Capacitor: Bessel series ---

def in_plane_separation(r: Vec3, rp: Vec3) -> float:
    return float(np.hypot(r[0] - rp[0], r[1] - rp[1]))


def sum_series(
    block: Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]],
    ctrl: SeriesCtrl,
    first_block: int = 64,
) -> Tuple[np.ndarray, int]:
    """
    Sum terms n = 1, 2, ... produced block-wise by `block(n)`, which returns
    (terms, envelope); envelope[k] bounds |terms[k]| independently of the
    oscillating phase factors. Stops once min_terms consecutive envelopes
    fall below rel_tol times the accumulated envelope.
    """
    total = None
    env_total = 0.0
    run = 0
    n_done = 0
    size = max(first_block, ctrl.min_terms)
    while n_done < ctrl.n_max:
        n = np.arange(n_done + 1, min(n_done + size, ctrl.n_max) + 1, dtype=float)
        terms, env = block(n)
        cum = env_total + np.cumsum(env)
        small = env <= ctrl.rel_tol * cum
        for k, is_small in enumerate(small):
            run = run + 1 if is_small else 0
            if run >= ctrl.min_terms:
                used = k + 1
                chunk = terms[:used].sum(axis=0)
                total = chunk if total is None else total + chunk
                return total, n_done + used
        chunk = terms.sum(axis=0)
        total = chunk if total is None else total + chunk
        env_total = float(cum[-1])
        n_done += len(n)
        size *= 2
    raise ConvergenceError(
        f"Capacitor series did not reach rel_tol={ctrl.rel_tol} within n_max={ctrl.n_max} terms"
    )


def series_first_block(rho: float, D: float, ctrl: SeriesCtrl) -> int:
    # K0 decays like exp(-n pi rho / D)
    estimate = np.log(1.0 / ctrl.rel_tol) * D / (np.pi * rho)
    return int(min(max(estimate, 16), ctrl.n_max)) + ctrl.min_terms


def capacitor_series(r: Vec3, rp: Vec3, D: float, ctrl: SeriesCtrl) -> GreensEval:
    """
    G = (1/(pi D)) sum_n sin(k_n zeta) sin(k_n zeta') K0(k_n rho), k_n = n pi / D,
    the full Dirichlet Green function of the gap.
    """
    rho = in_plane_separation(r, rp)
    zeta, zeta_p = r[2] + D / 2, rp[2] + D / 2

    def block(n):
        k = n * np.pi / D
        env = special.k0(k * rho)
        return np.sin(k * zeta) * np.sin(k * zeta_p) * env, env

    total, used = sum_series(block, ctrl, series_first_block(rho, D, ctrl))
    logger.debug(f"capacitor series: rho/D={rho / D:.3g}, {used} terms")
    return GreensEval(float(total) / (np.pi * D), used, True)


# --- Capacitor: image ladder ---

def ladder_images(rp: Vec3, D: float, shells: int):
    """
    Images of a unit charge at rp (plate coordinate zeta') across both plates,
    source excluded: positive ones at zeta' + 2kD (k != 0, |k| <= shells),
    negative mirrored ones at -zeta' + 2kD (-shells < k <= shells).
    Returns positions in midplane coordinates and charges; a charge of -1
    also marks the image as mirrored in z.
    """
    zeta_p = rp[2] + D / 2
    k_pos = np.concatenate([np.arange(-shells, 0), np.arange(1, shells + 1)])
    k_neg = np.arange(-shells + 1, shells + 1)
    z = np.concatenate([zeta_p + 2 * k_pos * D, -zeta_p + 2 * k_neg * D]) - D / 2
    positions = np.empty((len(z), 3))
    positions[:, 0] = rp[0]
    positions[:, 1] = rp[1]
    positions[:, 2] = z
    charges = np.concatenate([np.ones(len(k_pos)), -np.ones(len(k_neg))])
    return positions, charges


def ladder_offsets(r: Vec3, rp: Vec3, D: float) -> Tuple[float, float]:
    zeta, zeta_p = r[2] + D / 2, rp[2] + D / 2
    return (zeta - zeta_p) / (2 * D), (zeta + zeta_p) / (2 * D)


def capacitor_ladder(r: Vec3, rp: Vec3, D: float, shells: int = LADDER_SHELLS) -> float:
    """
    G_H as the image sum. Images beyond `shells` are at vertical distance
    >= 2 shells D, where the in-plane offset is dropped and the remaining
    sums are digamma differences.
    """
    positions, charges = ladder_images(rp, D, shells)
    dist = np.linalg.norm(r - positions, axis=1)
    near = float(np.sum(charges / dist))

    alpha, beta = ladder_offsets(r, rp, D)
    K = shells
    psi = special.digamma
    tail = (psi(K + 1 - beta) - psi(K + 1 - alpha)) \
        + (psi(K + 1 + beta) - psi(K + 1 + alpha) - 1.0 / (K + beta))
    return (near + float(tail) / (2 * D)) / FOUR_PI


def g_capacitor(r: Vec3, rp: Vec3, D: float, ctrl: SeriesCtrl = SeriesCtrl()) -> GreensEval:
    geometry = Capacitor(D=D)
    r = validate_point(geometry, r, strict=False)
    rp = validate_point(geometry, rp, strict=False)
    if in_plane_separation(r, rp) < LADDER_SWITCH * D:
        value = capacitor_ladder(r, rp, D) + free_kernel(r, rp)
        return GreensEval(value, 0, True)
    return capacitor_series(r, rp, D, ctrl)


def gh_capacitor(r: Vec3, rp: Vec3, D: float, ctrl: SeriesCtrl = SeriesCtrl()) -> GreensEval:
    geometry = Capacitor(D=D)
    r = validate_point(geometry, r, strict=False)
    rp = validate_point(geometry, rp, strict=False)
    if in_plane_separation(r, rp) < LADDER_SWITCH * D:
        return GreensEval(capacitor_ladder(r, rp, D), 0, True)
    full = capacitor_series(r, rp, D, ctrl)
    return GreensEval(full.value - free_kernel(r, rp), full.terms_used, full.converged)


def g_capacitor_asymptotic(r: Vec3, rp: Vec3, D: float) -> float:
    """Leading n = 1 term with K0 replaced by its large-argument form."""
    geometry = Capacitor(D=D)
    r = validate_point(geometry, r, strict=False)
    rp = validate_point(geometry, rp, strict=False)
    rho = in_plane_separation(r, rp)
    if rho == 0.0:
        raise CoincidentPointError("Asymptotic capacitor kernel needs a nonzero in-plane separation")
    kappa = np.pi / D
    return float(
        np.sqrt(8.0 / (rho * D)) / FOUR_PI
        * np.cos(kappa * r[2]) * np.cos(kappa * rp[2]) * np.exp(-kappa * rho)
    )


# --- Dispatch ---

def gh(geometry, r: Vec3, rp: Vec3, ctrl: SeriesCtrl = SeriesCtrl()) -> float:
    """G_H for any geometry (0 in free space)."""
    if isinstance(geometry, FreeSpace):
        return 0.0
    if isinstance(geometry, Plane):
        return gh_plane(r, rp)
    if isinstance(geometry, Capacitor):
        return gh_capacitor(r, rp, geometry.D, ctrl).value
    if isinstance(geometry, SphereGrounded):
        return gh_sphere_grounded(r, rp, geometry.a)
    return gh_sphere_isolated(r, rp, geometry.a)
