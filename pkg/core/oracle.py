"""
Brute-force references for cross-checking the analytic pipeline.

Nothing in the energy or force pipeline imports this module; it is used by
the test suite and by `dispersia verify`. Each routine is written
independently of the code it checks: its own image enumeration, its own
Neville extrapolation, and mpmath for the Bessel functions.
"""
from typing import Callable, List, NamedTuple, Optional

import mpmath
import numpy as np
from scipy import special

from core.errors import GeometryError, OutOfGapError, StencilDomainError
from core.model import FdCtrl, Tensor3, Vec3, as_vec3

DEFAULT_HESSIAN_STEP = 1e-2
DEFAULT_LADDER_KMAX = 1024
BESSEL_DPS = 40


class OracleEstimate(NamedTuple):
    value: object
    error: float

    def supports(self, tolerance: float) -> bool:
        """True when the estimate is ten times tighter than `tolerance` (relative)."""
        magnitude = float(np.max(np.abs(self.value)))
        return 10.0 * self.error <= tolerance * magnitude


def neville_at_zero(xs: List[float], ys: List[np.ndarray]) -> OracleEstimate:
    """
    Polynomial extrapolation of ys(x) to x = 0 through all the points.
    The error is the change contributed by the last point.
    """
    table = [np.asarray(y, dtype=float) for y in ys]
    previous = table[-1]
    n = len(xs)
    for m in range(1, n):
        for i in range(n - m):
            table[i] = (xs[i + m] * table[i] - xs[i] * table[i + 1]) / (xs[i + m] - xs[i])
        if m == n - 2:
            previous = table[0].copy()
    best = table[0]
    return OracleEstimate(best, float(np.max(np.abs(best - previous))))


# --- Finite-difference mixed Hessian ---

def fd_mixed_hessian_estimate(
    field: Callable[[Vec3, Vec3], float],
    rA: Vec3,
    rB: Vec3,
    fd: FdCtrl = FdCtrl(),
    length: Optional[float] = None,
) -> OracleEstimate:
    """
    d/drA_i d/drB_j field(rA, rB) from the 4-point stencil
    [f(+,+) - f(+,-) - f(-,+) + f(-,-)] / 4h^2, extrapolated in h^2.
    The default step is 1e-2 of `length` (|rA - rB| unless given).
    """
    rA, rB = as_vec3(rA), as_vec3(rB)
    if length is None:
        length = float(np.linalg.norm(rA - rB)) or 1.0
    step = fd.base_step if fd.base_step is not None else DEFAULT_HESSIAN_STEP * length
    eye = np.eye(3)

    def evaluate(p, q):
        try:
            return field(p, q)
        except GeometryError as e:
            raise StencilDomainError(f"Hessian stencil at step {step:.3e} leaves the region: {e.detail}") from e

    def stencil(h):
        t = np.empty((3, 3))
        for i in range(3):
            for j in range(3):
                pp = evaluate(rA + h * eye[i], rB + h * eye[j])
                pm = evaluate(rA + h * eye[i], rB - h * eye[j])
                mp = evaluate(rA - h * eye[i], rB + h * eye[j])
                mm = evaluate(rA - h * eye[i], rB - h * eye[j])
                t[i, j] = (pp - pm - mp + mm) / (4.0 * h * h)
        return t

    steps = [step / 2 ** k for k in range(fd.richardson_levels + 1)]
    samples = [stencil(h) for h in steps]
    if len(samples) == 1:
        return OracleEstimate(samples[0], float("inf"))
    return neville_at_zero([h * h for h in steps], samples)


def fd_mixed_hessian(
    field: Callable[[Vec3, Vec3], float],
    rA: Vec3,
    rB: Vec3,
    fd: FdCtrl = FdCtrl(),
    length: Optional[float] = None,
) -> Tensor3:
    return fd_mixed_hessian_estimate(field, rA, rB, fd, length).value


def fd_laplacian(field: Callable[[Vec3], float], r: Vec3, h: float) -> float:
    """7-point Laplacian."""
    r = as_vec3(r)
    eye = np.eye(3)
    total = -6.0 * field(r)
    for i in range(3):
        total += field(r + h * eye[i]) + field(r - h * eye[i])
    return total / (h * h)


def harmonic_residual(field: Callable[[Vec3], float], r: Vec3, h: float) -> float:
    """
    |Laplacian| relative to the summed |Hessian entries| at r. Near zero
    for a harmonic field; the Hessian sum never vanishes for 1/|r - s| fields.
    """
    r = as_vec3(r)
    steps = h * np.eye(3)
    scale = 0.0
    for a in steps:
        for b in steps:
            scale += abs(field(r + a + b) - field(r + a - b) - field(r - a + b) + field(r - a - b))
    return abs(fd_laplacian(field, r, h)) / (scale / (4.0 * h * h))


# --- Capacitor references ---

def _check_gap(r: Vec3, D: float) -> None:
    if abs(r[2]) > D / 2:
        raise OutOfGapError(f"Point {r} must satisfy |z| <= D/2 = {D / 2}")


def _shell_partial_sums(r: Vec3, rp: Vec3, D: float, k_max: int) -> np.ndarray:
    """Partial sums over |k| <= K, K = 0..k_max, of the full image series times 4 pi."""
    zeta, zeta_p = r[2] + D / 2, rp[2] + D / 2
    rho2 = (r[0] - rp[0]) ** 2 + (r[1] - rp[1]) ** 2
    k = np.arange(-k_max, k_max + 1, dtype=float)
    # all images of the family: +1 at zeta' + 2kD, -1 at -zeta' + 2kD
    direct = 1.0 / np.sqrt(rho2 + (zeta - zeta_p - 2 * k * D) ** 2)
    mirrored = 1.0 / np.sqrt(rho2 + (zeta + zeta_p - 2 * k * D) ** 2)
    per_k = direct - mirrored
    centre = k_max
    shells = np.empty(k_max + 1)
    shells[0] = per_k[centre]
    shells[1:] = per_k[centre + 1:] + per_k[centre - 1::-1][:k_max]
    return np.cumsum(shells)


def capacitor_image_ladder(r: Vec3, rp: Vec3, D: float, k_max: int = DEFAULT_LADDER_KMAX) -> OracleEstimate:
    """
    Full Dirichlet G of the gap from the alternating image ladder, summed
    over reflections |k| <= K and extrapolated in 1/K from the partial sums
    at K = k_max/16, ..., k_max.
    """
    r, rp = as_vec3(r), as_vec3(rp)
    _check_gap(r, D)
    _check_gap(rp, D)
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    partial = _shell_partial_sums(r, rp, D, k_max) / (4.0 * np.pi)
    ks = sorted({max(1, k_max // 2 ** p) for p in range(5)})
    if len(ks) < 2:
        return OracleEstimate(float(partial[k_max]), float("inf"))
    estimate = neville_at_zero([1.0 / K for K in ks], [partial[K] for K in ks])
    return OracleEstimate(float(estimate.value), estimate.error)


def high_cutoff_reference(r: Vec3, rp: Vec3, D: float, n_fixed: int) -> float:
    """The Bessel series of the full gap G summed to a fixed n_fixed terms."""
    r, rp = as_vec3(r), as_vec3(rp)
    _check_gap(r, D)
    _check_gap(rp, D)
    rho = float(np.hypot(r[0] - rp[0], r[1] - rp[1]))
    k = np.arange(1, n_fixed + 1, dtype=float) * np.pi / D
    zeta, zeta_p = r[2] + D / 2, rp[2] + D / 2
    terms = np.sin(k * zeta) * np.sin(k * zeta_p) * special.k0(k * rho)
    return float(np.sum(terms) / (np.pi * D))


# --- Extended-precision Bessel functions ---

def bessel_k_reference(order: int, x: float, dps: int = BESSEL_DPS) -> float:
    with mpmath.workdps(dps):
        return float(mpmath.besselk(order, mpmath.mpf(x)))
