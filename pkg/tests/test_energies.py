import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from core.errors import CoincidentPointError, GeometryError
from core.energies import (
    asymptotic_breakdown,
    atom_surface_energy,
    cluster_energy,
    crossed_energy_capacitor_direct,
    ena1,
    ena2,
    london_energy,
    na_ratio,
    pair_energies,
    plane_ena1_closed_form,
    sphere_colinear_closed_form,
    sphere_pair_positions,
)
from core.model import (
    EPSILON_0,
    AtomPolarization,
    Capacitor,
    FreeSpace,
    PairCoupling,
    Plane,
    SphereGrounded,
    SphereIsolated,
    UnitMode,
)
from core.oracle import fd_mixed_hessian_estimate
from core.greens import gh_sphere_grounded
from core.tensor import gh_tensor_plane

tensors = arrays(np.float64, (3, 3), elements=st.floats(-10.0, 10.0))


# --- Pair formulas ---

def test_london_energy(coupling):
    rA = np.array([0.2, -0.1, 0.4])
    assert london_energy(coupling, rA, rA + [1, 0, 0]) == pytest.approx(-1 / (24 * np.pi ** 2))
    assert london_energy(coupling, rA, rA + [0, 2, 0]) == pytest.approx(-1 / (24 * np.pi ** 2) / 64)
    with pytest.raises(CoincidentPointError):
        london_energy(coupling, rA, rA)


@given(tensors)
def test_ena2_is_never_positive(t):
    assert ena2(PairCoupling(), t) <= 0.0


def test_ena1_is_linear(coupling):
    rA, rB = np.zeros(3), np.array([0.3, 0.4, 1.2])
    t = np.arange(9.0).reshape(3, 3) - 4.0
    assert ena1(coupling, rA, rB, np.zeros((3, 3))) == 0.0
    assert ena1(coupling, rA, rB, -t) == pytest.approx(-ena1(coupling, rA, rB, t))


def test_ratio_is_coupling_free():
    rA, rB = np.array([0, 0, 0.8]), np.array([1.1, 0.3, 0.5])
    weak = pair_energies(PairCoupling(lambda_ab=1.0), Plane(), rA, rB)
    strong = pair_energies(PairCoupling(lambda_ab=3.7), Plane(), rA, rB)
    si = pair_energies(PairCoupling(lambda_ab=3.7, unit_mode="si"), Plane(), rA, rB)
    assert strong.ratio == pytest.approx(weak.ratio, rel=1e-14)
    assert si.ratio == pytest.approx(weak.ratio, rel=1e-12)
    assert weak.ratio == pytest.approx(na_ratio(rA, rB, gh_tensor_plane(rA, rB)), rel=1e-10)


def test_free_space_has_no_correction(coupling):
    b = pair_energies(coupling, FreeSpace(), [0, 0, 0], [1, 2, 3])
    assert b.e_na1 == 0.0 and b.e_na2 == 0.0 and b.ratio == 0.0


# --- Plane ---

def _plane_configs(rng, n):
    for _ in range(n):
        rA = np.array([*rng.uniform(-3, 3, 2), rng.uniform(0.1, 3.0)])
        rB = np.array([*rng.uniform(-3, 3, 2), rng.uniform(0.1, 3.0)])
        yield rA, rB


def test_plane_second_order_equals_london_at_image(coupling, rng):
    for rA, rB in _plane_configs(rng, 200):
        image = london_energy(coupling, rA, rB * [1, 1, -1])
        assert pair_energies(coupling, Plane(), rA, rB).e_na2 == pytest.approx(image, rel=1e-12)


def test_plane_first_order_closed_form(coupling, rng):
    for rA, rB in _plane_configs(rng, 200):
        expected = plane_ena1_closed_form(coupling, rA, rB)
        R, R_img = np.linalg.norm(rA - rB), np.linalg.norm(rA - rB * [1, 1, -1])
        scale = 8.0 / (72 * np.pi ** 2 * R ** 3 * R_img ** 3)
        assert pair_energies(coupling, Plane(), rA, rB).e_na1 == pytest.approx(expected, rel=1e-10, abs=1e-12 * scale)


def test_plane_ratio_vanishes_far_from_surface(coupling):
    ratios = [abs(pair_energies(coupling, Plane(), [0, 0, h], [1.0, 0, h]).ratio) for h in (1.0, 10.0, 100.0)]
    assert ratios[0] > ratios[1] > ratios[2]
    assert ratios[2] < 1e-5


# --- Capacitor ---

def test_capacitor_direct_route_matches_decomposition(coupling, rng):
    D = 1.0
    for _ in range(100):
        rho = rng.uniform(0.01, 1.5)
        rA = np.array([0.0, 0.0, rng.uniform(-0.45, 0.45)])
        rB = np.array([rho, 0.0, rng.uniform(-0.45, 0.45)])
        b = pair_energies(coupling, Capacitor(D=D), rA, rB)
        direct = crossed_energy_capacitor_direct(coupling, rA, rB, D)
        assert direct == pytest.approx(b.e_london + b.e_na_total, rel=1e-9)


def test_capacitor_shielding(coupling):
    D = 1.0
    near = pair_energies(coupling, Capacitor(D=D), [0, 0, 0.0], [0.3 * D, 0, 0.0])
    far = pair_energies(coupling, Capacitor(D=D), [0, 0, 0.0], [4.0 * D, 0, 0.0])
    assert abs(near.ratio) < 0.1
    assert -1.0 <= far.ratio <= -0.95


def test_capacitor_total_energy_decay_rate(coupling):
    D = 1.0
    rho = np.linspace(2.0, 5.0, 30) * D
    totals = np.array([crossed_energy_capacitor_direct(coupling, [0, 0, 0.0], [r, 0, 0.0], D) for r in rho])
    slope = np.polyfit(rho, np.log(np.abs(totals) * rho), 1)[0]
    assert -slope == pytest.approx(2 * np.pi / D, rel=0.02)


def test_capacitor_asymptotic_breakdown(coupling):
    D = 1.0
    for x in (1.5, 2.5, 4.0):
        rA, rB = np.zeros(3), np.array([x * D, 0.0, 0.0])
        full = pair_energies(coupling, Capacitor(D=D), rA, rB)
        approx = asymptotic_breakdown(coupling, rA, rB, D)
        assert approx.e_na2 == 0.0
        assert approx.ratio == pytest.approx(full.ratio, rel=0.05)


# --- Spheres ---

RADII = np.geomspace(1.001, 10.0, 12)


@pytest.mark.parametrize("grounded", [True, False])
@pytest.mark.parametrize("opposite", [True, False])
def test_sphere_colinear_closed_forms(coupling, grounded, opposite):
    a = 1.0
    sphere = SphereGrounded(a=a) if grounded else SphereIsolated(a=a)
    for r_a in RADII:
        r_b = 1.3 * r_a
        rA, rB = sphere_pair_positions(r_a, r_b, np.pi if opposite else 0.0)
        b = pair_energies(coupling, sphere, rA, rB)
        e1, e2 = sphere_colinear_closed_form(coupling, r_a, r_b, a, opposite, grounded)
        assert b.e_na1 == pytest.approx(e1, rel=1e-10)
        assert b.e_na2 == pytest.approx(e2, rel=1e-10)


def test_isolated_sphere_suppresses_correction(coupling):
    a = 1.0
    for x in np.linspace(1.001, 1.1, 8):
        rA, rB = np.array([0, 0, x * a]), np.array([0, 0, x * a + 0.002 * a])
        iso = pair_energies(coupling, SphereIsolated(a=a), rA, rB).e_na_total
        grd = pair_energies(coupling, SphereGrounded(a=a), rA, rB).e_na_total
        assert 0.0 < iso / grd < 1.0


def test_small_isolated_sphere_scales_as_radius_cubed(coupling):
    rA, rB = sphere_pair_positions(1.0, 2.0, np.pi)
    radii = np.geomspace(1e-4, 1e-2, 9)
    iso = np.array([pair_energies(coupling, SphereIsolated(a=a), rA, rB).e_na_total for a in radii])
    grd = np.array([pair_energies(coupling, SphereGrounded(a=a), rA, rB).e_na_total for a in radii])
    assert np.all(iso < 0)
    assert np.polyfit(np.log(radii), np.log(np.abs(iso)), 1)[0] == pytest.approx(3.0, abs=0.05)
    assert abs(np.polyfit(np.log(radii), np.log(np.abs(grd)), 1)[0] - 3.0) > 0.5


def test_sphere_pair_positions():
    rA, rB = sphere_pair_positions(1.0, 2.0, np.pi)
    np.testing.assert_allclose(rA, [0, 0, 1.0])
    np.testing.assert_allclose(rB, [0, 0, -2.0], atol=1e-15)
    with pytest.raises(CoincidentPointError):
        sphere_colinear_closed_form(PairCoupling(), 1.5, 1.5, 1.0, opposite=False)


# --- First order ---

def test_plane_surface_energy():
    atom = AtomPolarization()
    e = atom_surface_energy(atom, Plane(), [0, 0, 0.5])
    assert e == pytest.approx(-1 / (16 * np.pi * 0.5 ** 3))
    assert atom_surface_energy(atom, Plane(), [0, 0, 1.0]) == pytest.approx(e / 8)
    si = atom_surface_energy(atom, Plane(), [0, 0, 0.5], unit_mode=UnitMode.SI)
    assert si == pytest.approx(e / EPSILON_0)


def test_capacitor_surface_energy_is_even_in_z():
    atom, D = AtomPolarization(d2=(0.5, 1.0, 2.0)), 1.0
    up = atom_surface_energy(atom, Capacitor(D=D), [0, 0, 0.17])
    down = atom_surface_energy(atom, Capacitor(D=D), [0.3, 0, -0.17])
    assert up == pytest.approx(down, rel=1e-12)
    assert up < atom_surface_energy(atom, Capacitor(D=D), [0, 0, 0.0]) < 0


def test_sphere_surface_energy_against_fd():
    atom, a = AtomPolarization(d2=(0.2, 0.3, 0.5)), 1.0
    r = np.array([0.4, -0.3, 1.3])
    t = fd_mixed_hessian_estimate(lambda p, q: gh_sphere_grounded(p, q, a), r, r, length=0.1)
    assert t.supports(1e-6)
    expected = float(np.dot(atom.d2, np.diag(t.value))) / 2
    assert atom_surface_energy(atom, SphereGrounded(a=a), r) == pytest.approx(expected, rel=1e-6)


def test_free_space_surface_energy():
    assert atom_surface_energy(AtomPolarization(), FreeSpace(), [0, 0, 0]) == 0.0


# --- Several atoms ---

def test_cluster_energy(coupling):
    points = [np.array([0, 0, 1.0]), np.array([1.0, 0, 1.2]), np.array([0.3, 0.8, 0.7])]
    cluster = cluster_energy(coupling, points, Plane(), polarizations=[AtomPolarization()] * 3)
    pairs = [pair_energies(coupling, Plane(), points[i], points[j]) for i, j in ((0, 1), (0, 2), (1, 2))]
    assert len(cluster.pairs) == 3
    assert cluster.pair_total == pytest.approx(sum(p.e_london + p.e_na_total for p in pairs))
    surface = sum(atom_surface_energy(AtomPolarization(), Plane(), p) for p in points)
    assert cluster.surface_total == pytest.approx(surface)
    assert cluster.total == pytest.approx(cluster.pair_total + surface)


def test_cluster_energy_rejects_bad_input(coupling):
    with pytest.raises(ValueError):
        cluster_energy(coupling, [[0, 0, 1.0]], Plane())
    with pytest.raises(ValueError):
        cluster_energy(coupling, [[0, 0, 1.0], [1, 0, 1.0]], Plane(), polarizations=[AtomPolarization()])
    with pytest.raises(GeometryError):
        cluster_energy(coupling, [[0, 0, 1.0], [1, 0, -1.0]], Plane())
