"""
Mixed second-derivative tensors t_ij = d/dr_i d/dr'_j of the Green functions,
evaluated at the two atom positions, and the free dipole kernel.
"""
from typing import NamedTuple

import numpy as np
from scipy import special

from core.errors import GeometryError
from core.greens import (
    FOUR_PI,
    LADDER_SHELLS,
    LADDER_SWITCH,
    MIRROR_Z,
    require_distinct,
    series_first_block,
    ladder_images,
    ladder_offsets,
    in_plane_separation,
    sum_series,
    validate_point,
)
from core.logger import get_logger
from core.model import (
    Capacitor,
    FreeSpace,
    Plane,
    SeriesCtrl,
    SphereGrounded,
    SphereIsolated,
    Tensor3,
    Vec3,
    as_vec3,
)

logger = get_logger("tensor")

EYE = np.eye(3)
AXIAL_POSITIVE = np.diag([1.0, 1.0, -2.0])
AXIAL_NEGATIVE = np.diag([1.0, 1.0, 2.0])


class TensorEval(NamedTuple):
    t: Tensor3
    terms_used: int = 0
    converged: bool = True


def _kernel(d: Vec3) -> Tensor3:
    dist = np.linalg.norm(d)
    u = d / dist
    return (EYE - 3.0 * np.outer(u, u)) / (FOUR_PI * dist ** 3)


def dipole_kernel_tensor(rA: Vec3, rB: Vec3) -> Tensor3:
    """(delta_ij - 3 R_i R_j / R^2) / (4 pi R^3) with R = rA - rB."""
    rA, rB = as_vec3(rA), as_vec3(rB)
    require_distinct(rA, rB)
    return _kernel(rA - rB)


# --- Plane ---

def gh_tensor_plane(rA: Vec3, rB: Vec3) -> Tensor3:
    """
    Minus the dipole kernel at S = rA - mirror(rB), with the z column
    flipped by the mirror. Not symmetric: t_xz = -t_zx.
    """
    geometry = Plane()
    rA = validate_point(geometry, rA)
    rB = validate_point(geometry, rB)
    return -_kernel(rA - rB * MIRROR_Z) * MIRROR_Z


# --- Spheres ---

def gh_tensor_sphere_grounded(rA: Vec3, rB: Vec3, a: float) -> Tensor3:
    geometry = SphereGrounded(a=a)
    rA = validate_point(geometry, rA)
    rB = validate_point(geometry, rB)
    rA2, rB2 = float(rA @ rA), float(rB @ rB)
    # x_A r_B^2 - x_B a^2 = r_B^2 (rA - image of rB), likewise for B
    to_image_b = rA - (a * a / rB2) * rB
    to_image_a = rB - (a * a / rA2) * rA
    q = np.sqrt(rB2) * np.linalg.norm(to_image_b)
    first = -3.0 * a * rB2 * rA2 * np.outer(to_image_b, to_image_a) / q ** 5
    second = a * (2.0 * np.outer(rA, rB) - a * a * EYE) / q ** 3
    return (first + second) / FOUR_PI


def gh_tensor_sphere_isolated(rA: Vec3, rB: Vec3, a: float) -> Tensor3:
    grounded = gh_tensor_sphere_grounded(rA, rB, a)
    rA, rB = as_vec3(rA), as_vec3(rB)
    nA, nB = np.linalg.norm(rA), np.linalg.norm(rB)
    return grounded + a * np.outer(rA, rB) / (FOUR_PI * nA ** 3 * nB ** 3)


def axilrod_teller_tensor(rA: Vec3, rB: Vec3, a: float) -> Tensor3:
    """
    Leading O(a^3) part of the isolated-sphere tensor: the field of the dipole
    induced in a small neutral sphere, -a^3 (I - 3uu)(I - 3vv) / (4 pi rA^3 rB^3).
    """
    rA, rB = as_vec3(rA), as_vec3(rB)
    nA, nB = np.linalg.norm(rA), np.linalg.norm(rB)
    u, v = rA / nA, rB / nB
    left = EYE - 3.0 * np.outer(u, u)
    right = EYE - 3.0 * np.outer(v, v)
    return -(a ** 3) * (left @ right) / (FOUR_PI * nA ** 3 * nB ** 3)


# --- Capacitor ---

def _series_tensor(rA: Vec3, rB: Vec3, D: float, ctrl: SeriesCtrl) -> TensorEval:
    """Term-wise mixed Hessian of the Bessel series (full G)."""
    rho = in_plane_separation(rA, rB)
    e = np.array([rA[0] - rB[0], rA[1] - rB[1]]) / rho
    ee = np.outer(e, e)
    zeta_a, zeta_b = rA[2] + D / 2, rB[2] + D / 2

    def block(n):
        k = n * np.pi / D
        x = k * rho
        k0, k1 = special.k0(x), special.k1(x)
        sa, ca = np.sin(k * zeta_a), np.cos(k * zeta_a)
        sb, cb = np.sin(k * zeta_b), np.cos(k * zeta_b)
        terms = np.zeros((len(n), 3, 3))
        radial = (k * k * k0)[:, None, None] * ee
        angular = (k * k1 / rho)[:, None, None] * (2.0 * ee - np.eye(2))
        terms[:, :2, :2] = -(sa * sb)[:, None, None] * (radial + angular)
        terms[:, :2, 2] = -(sa * cb * k * k * k1)[:, None] * e
        terms[:, 2, :2] = (ca * sb * k * k * k1)[:, None] * e
        terms[:, 2, 2] = ca * cb * k * k * k0
        env = k * k * (k0 + k1 + 2.0 * k1 / x)
        return terms, env

    total, used = sum_series(block, ctrl, series_first_block(rho, D, ctrl))
    logger.debug(f"capacitor tensor series: rho/D={rho / D:.3g}, {used} terms")
    return TensorEval(total / (np.pi * D), used, True)


def capacitor_ladder_tensor(rA: Vec3, rB: Vec3, D: float, shells: int = LADDER_SHELLS) -> Tensor3:
    """
    G_H tensor from the image ladder. Each image contributes
    q (I - 3 dd)/|d|^3 with its z column flipped when mirrored; images past
    `shells` are summed on the axis with Hurwitz zeta functions.
    """
    positions, charges = ladder_images(rB, D, shells)
    d = rA - positions
    dist = np.linalg.norm(d, axis=1)
    u = d / dist[:, None]
    kernels = (EYE - 3.0 * np.einsum("ni,nj->nij", u, u)) / dist[:, None, None] ** 3
    kernels[:, :, 2] *= charges[:, None]
    near = np.einsum("n,nij->ij", charges, kernels)

    alpha, beta = ladder_offsets(rA, rB, D)
    K = shells
    zeta = special.zeta
    upper = (zeta(3, K + 1 - alpha) + zeta(3, K + 1 + alpha)) / (8 * D ** 3)
    lower = (zeta(3, K + 1 - beta) + zeta(3, K + beta)) / (8 * D ** 3)
    tail = upper * AXIAL_POSITIVE - lower * AXIAL_NEGATIVE
    return (near + tail) / FOUR_PI


def capacitor_coincident_tensor(z: float, D: float) -> Tensor3:
    """
    Exact coincident-point image tensor at height z:
    [2 zeta(3) diag(1,1,-2) - (zeta(3,u) + zeta(3,1-u)) diag(1,1,2)] / (32 pi D^3),
    u = (z + D/2)/D.
    """
    u = (z + D / 2) / D
    zeta = special.zeta
    images = 2.0 * zeta(3, 1.0) * AXIAL_POSITIVE - (zeta(3, u) + zeta(3, 1.0 - u)) * AXIAL_NEGATIVE
    return images / (32.0 * np.pi * D ** 3)


def g_tensor_capacitor(rA: Vec3, rB: Vec3, D: float, ctrl: SeriesCtrl = SeriesCtrl()) -> TensorEval:
    geometry = Capacitor(D=D)
    rA = validate_point(geometry, rA)
    rB = validate_point(geometry, rB)
    if in_plane_separation(rA, rB) < LADDER_SWITCH * D:
        t = capacitor_ladder_tensor(rA, rB, D) + dipole_kernel_tensor(rA, rB)
        return TensorEval(t, 0, True)
    return _series_tensor(rA, rB, D, ctrl)


def gh_tensor_capacitor(rA: Vec3, rB: Vec3, D: float, ctrl: SeriesCtrl = SeriesCtrl()) -> TensorEval:
    geometry = Capacitor(D=D)
    rA = validate_point(geometry, rA)
    rB = validate_point(geometry, rB)
    require_distinct(rA, rB)
    if in_plane_separation(rA, rB) < LADDER_SWITCH * D:
        return TensorEval(capacitor_ladder_tensor(rA, rB, D), 0, True)
    full = _series_tensor(rA, rB, D, ctrl)
    return TensorEval(full.t - _kernel(rA - rB), full.terms_used, full.converged)


def g_tensor_capacitor_asymptotic(rA: Vec3, rB: Vec3, D: float) -> Tensor3:
    """Mixed Hessian of the asymptotic kernel A rho^(-1/2) e^(-kappa rho) cos(kappa z) cos(kappa z')."""
    geometry = Capacitor(D=D)
    rA = validate_point(geometry, rA)
    rB = validate_point(geometry, rB)
    rho = in_plane_separation(rA, rB)
    if rho == 0.0:
        raise GeometryError("Asymptotic capacitor tensor needs a nonzero in-plane separation")
    kappa = np.pi / D
    e = np.array([rA[0] - rB[0], rA[1] - rB[1]]) / rho
    f = np.sqrt(8.0 / (rho * D)) / FOUR_PI * np.exp(-kappa * rho)
    slope = -0.5 / rho - kappa
    f1 = f * slope
    f2 = f * (slope ** 2 + 0.5 / rho ** 2)
    ca, sa = np.cos(kappa * rA[2]), np.sin(kappa * rA[2])
    cb, sb = np.cos(kappa * rB[2]), np.sin(kappa * rB[2])
    ee = np.outer(e, e)
    t = np.zeros((3, 3))
    t[:2, :2] = -(f2 * ee + f1 * (np.eye(2) - ee) / rho) * ca * cb
    t[:2, 2] = -kappa * f1 * ca * sb * e
    t[2, :2] = kappa * f1 * sa * cb * e
    t[2, 2] = kappa ** 2 * sa * sb * f
    return t


# --- Dispatch ---

def gh_tensor(geometry, rA: Vec3, rB: Vec3, ctrl: SeriesCtrl = SeriesCtrl()) -> TensorEval:
    """G_H tensor for the pair (rA, rB) in any geometry."""
    if isinstance(geometry, FreeSpace):
        rA, rB = as_vec3(rA), as_vec3(rB)
        require_distinct(rA, rB)
        return TensorEval(np.zeros((3, 3)))
    if isinstance(geometry, Plane):
        return TensorEval(gh_tensor_plane(rA, rB))
    if isinstance(geometry, Capacitor):
        return gh_tensor_capacitor(rA, rB, geometry.D, ctrl)
    if isinstance(geometry, SphereGrounded):
        return TensorEval(gh_tensor_sphere_grounded(rA, rB, geometry.a))
    return TensorEval(gh_tensor_sphere_isolated(rA, rB, geometry.a))


def gh_coincident_diag(geometry, r: Vec3, ctrl: SeriesCtrl = SeriesCtrl()) -> Tensor3:
    """
    Image tensor at r = r' (finite: G_H is regular at coincidence).
    The first-order atom-surface energy reads its diagonal.
    """
    if isinstance(geometry, FreeSpace):
        raise GeometryError("No image tensor in free space")
    r = validate_point(geometry, r)
    if isinstance(geometry, Plane):
        return gh_tensor_plane(r, r)
    if isinstance(geometry, Capacitor):
        return capacitor_coincident_tensor(float(r[2]), geometry.D)
    if isinstance(geometry, SphereGrounded):
        return gh_tensor_sphere_grounded(r, r, geometry.a)
    return gh_tensor_sphere_isolated(r, r, geometry.a)
