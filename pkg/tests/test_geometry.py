"""Geometry kernel tests: closed-form examples, roundtrips, metric axioms."""

import numpy as np
import pytest

import radialstats as rs
from radialstats.errors import CutLocusError, DomainError, UsageError
from radialstats.geometry import base_point, unit_sphere_area


def all_manifolds():
    return [
        rs.Euclidean(3),
        rs.Sphere(2),
        rs.Sphere(4),
        rs.Hyperbolic(2),
        rs.SPD(3),
        rs.Product([rs.Sphere(2), rs.Hyperbolic(2)]),
    ]


def random_point(man, rng):
    x = base_point(man)
    u = rs.random_unit_tangent(x, rng)
    r = rng.uniform(0.0, min(man.inj - 0.1, 3.0) if np.isfinite(man.inj) else 3.0)
    return rs.exp_map(x, rs.Tangent(x, r * u.coords))


# -- closed-form examples ----------------------------------------------------


def test_exp_quarter_great_circle():
    S2 = rs.Sphere(2)
    x = rs.Point(S2, [1, 0, 0])
    y = rs.exp_map(x, rs.Tangent(x, [0, np.pi / 2, 0]))
    assert np.allclose(y.coords, [0, 1, 0], atol=1e-12)


def test_exp_euclidean_line():
    E3 = rs.Euclidean(3)
    x = rs.Point(E3, [1, 2, 3])
    y = rs.exp_map(x, rs.Tangent(x, [1, 0, 0]))
    assert np.allclose(y.coords, [2, 2, 3])


def test_exp_spd_scalar_geodesic():
    # scalar affine-invariant geodesic: a * exp(v / a)
    P1 = rs.SPD(1)
    x = rs.Point(P1, [[2.0]])
    y = rs.exp_map(x, rs.Tangent(x, [[2.0]]))
    assert abs(y.coords[0, 0] - 2.0 * np.e) < 1e-12


def test_log_inverts_exp_example():
    S2 = rs.Sphere(2)
    x = rs.Point(S2, [1, 0, 0])
    v = rs.log_map(x, rs.Point(S2, [0, 1, 0]))
    assert np.allclose(v.coords, [0, np.pi / 2, 0], atol=1e-12)


def test_log_euclidean():
    E2 = rs.Euclidean(2)
    v = rs.log_map(rs.Point(E2, [0, 0]), rs.Point(E2, [3, 4]))
    assert np.allclose(v.coords, [3, 4])


def test_log_hyperbolic_unit_speed():
    H2 = rs.Hyperbolic(2)
    x = rs.Point(H2, [1, 0, 0])
    y = rs.Point(H2, [np.cosh(1), np.sinh(1), 0])
    v = rs.log_map(x, y)
    assert abs(v.norm() - 1.0) < 1e-12
    assert np.allclose(v.coords, [0, 1, 0], atol=1e-12)


def test_distance_examples():
    S2 = rs.Sphere(2)
    e1 = rs.Point(S2, [1, 0, 0])
    e2 = rs.Point(S2, [0, 1, 0])
    assert abs(rs.distance(e1, e2) - np.pi / 2) < 1e-14
    assert abs(rs.distance(e1, rs.Point(S2, [-1, 0, 0])) - np.pi) < 1e-14
    P1 = rs.SPD(1)
    assert abs(rs.distance(rs.Point(P1, [[1.0]]), rs.Point(P1, [[np.e]])) - 1.0) < 1e-12


def test_tangent_inner_examples():
    E2 = rs.Euclidean(2)
    x = rs.Point(E2, [0, 0])
    assert rs.tangent_inner(rs.Tangent(x, [1, 0]), rs.Tangent(x, [0, 1])) == 0.0
    S2 = rs.Sphere(2)
    p = rs.Point(S2, [1, 0, 0])
    t = rs.Tangent(p, [0, 2, 0])
    assert abs(rs.tangent_inner(t, t) - 4.0) < 1e-14
    P1 = rs.SPD(1)
    q = rs.Point(P1, [[2.0]])
    u = rs.Tangent(q, [[2.0]])
    assert abs(rs.tangent_inner(u, u) - 1.0) < 1e-14


@pytest.mark.parametrize(
    "kappa,r,expected",
    [(0.0, 2.0, 2.0), (1.0, np.pi / 2, 1.0), (-1.0, 1.0, np.sinh(1.0))],
)
def test_sn_values(kappa, r, expected):
    assert abs(rs.sn(kappa, r) - expected) < 1e-12


def test_sn_vanishes_past_conjugate_radius():
    assert rs.sn(1.0, np.pi + 0.1) == 0.0
    assert rs.sn(4.0, np.pi / 2 + 0.01) == 0.0


def test_sn_continuous_in_curvature_at_zero():
    for r in (0.5, 2.0):
        assert abs(rs.sn(1e-12, r) - r) < 1e-9
        assert abs(rs.sn(-1e-12, r) - r) < 1e-9


def test_sn_negative_radius_rejected():
    with pytest.raises(DomainError):
        rs.sn(1.0, -0.5)


# -- random unit tangents ------------------------------------------------------


def test_random_unit_tangent_norm_and_orthogonality():
    rng = np.random.default_rng(7)
    E2 = rs.Euclidean(2)
    u = rs.random_unit_tangent(base_point(E2), rng)
    assert abs(u.norm() - 1.0) < 1e-12

    S2 = rs.Sphere(2)
    p = rs.Point(S2, [1, 0, 0])
    v = rs.random_unit_tangent(p, rng)
    assert abs(v.coords[0]) < 1e-10
    assert abs(v.norm() - 1.0) < 1e-12


def test_random_unit_tangent_isotropic_mean():
    # CLT bound: mean of 1e5 unit vectors has norm O(3/sqrt(n))
    rng = np.random.default_rng(123)
    man = rs.Sphere(2)
    p = rs.exp_map(
        base_point(man), rs.Tangent(base_point(man), [0.0, 0.4, -0.8])
    )
    total = np.zeros(3)
    n = 10**5
    basis = man.tangent_basis(p.coords)
    g = rng.standard_normal((n, 2))
    g /= np.linalg.norm(g, axis=1)[:, None]
    total = (g @ basis).mean(axis=0)
    assert np.linalg.norm(total) < 0.02


@pytest.mark.parametrize("man", all_manifolds(), ids=lambda m: m.spec_string())
def test_tangent_basis_orthonormal(man):
    rng = np.random.default_rng(5)
    for _ in range(5):
        x = random_point(man, rng)
        basis = man.tangent_basis(x.coords)
        assert basis.shape[0] == man.dim
        for i in range(man.dim):
            man.check_tangent(x.coords, basis[i])
            for j in range(i, man.dim):
                g = man.inner(x.coords, basis[i], basis[j])
                assert abs(g - (1.0 if i == j else 0.0)) < 1e-9


# -- invariants ---------------------------------------------------------------


@pytest.mark.parametrize("man", all_manifolds(), ids=lambda m: m.spec_string())
def test_exp_log_roundtrip(man):
    rng = np.random.default_rng(42)
    for _ in range(1000):
        x = random_point(man, rng)
        u = rs.random_unit_tangent(x, rng)
        r = rng.uniform(0.0, min(man.inj - 0.1, 3.0) if np.isfinite(man.inj) else 3.0)
        v = rs.Tangent(x, r * u.coords)
        y = rs.exp_map(x, v)
        w = rs.log_map(x, y)
        err = man.norm(x.coords, w.coords - v.coords)
        assert err < 1e-9 * (1.0 + r)
        assert abs(w.norm() - rs.distance(x, y)) < 1e-10 * (1.0 + r)


@pytest.mark.parametrize("man", all_manifolds(), ids=lambda m: m.spec_string())
def test_geodesic_speed(man):
    rng = np.random.default_rng(3)
    for _ in range(50):
        x = random_point(man, rng)
        u = rs.random_unit_tangent(x, rng)
        speed = rng.uniform(0.1, 2.0)
        for t in (0.25, 0.5, 1.0):
            if t * speed >= man.inj:
                continue
            y = rs.exp_map(x, rs.Tangent(x, (t * speed) * u.coords))
            assert abs(rs.distance(x, y) - t * speed) < 1e-9


@pytest.mark.parametrize("man", all_manifolds(), ids=lambda m: m.spec_string())
def test_triangle_inequality(man):
    rng = np.random.default_rng(11)
    for _ in range(1000):
        x, y, z = (random_point(man, rng) for _ in range(3))
        assert rs.distance(x, z) <= rs.distance(x, y) + rs.distance(y, z) + 1e-9


@pytest.mark.parametrize("man", all_manifolds(), ids=lambda m: m.spec_string())
def test_distance_symmetry_and_identity(man):
    rng = np.random.default_rng(19)
    for _ in range(100):
        x, y = random_point(man, rng), random_point(man, rng)
        assert abs(rs.distance(x, y) - rs.distance(y, x)) < 1e-10
        assert rs.distance(x, x) < 1e-12


def test_sphere_rotation_isometry():
    rng = np.random.default_rng(23)
    man = rs.Sphere(2)
    q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    for _ in range(200):
        x, y = random_point(man, rng), random_point(man, rng)
        rx = rs.Point(man, q @ x.coords)
        ry = rs.Point(man, q @ y.coords)
        assert abs(rs.distance(x, y) - rs.distance(rx, ry)) < 1e-10


def test_constant_curvature_ball_area_matches_sn_profile():
    # On S^2 the area of a geodesic ball is 2*pi*(1 - cos r); the radial
    # density sn_1^{m-1} integrates to exactly that.
    from scipy.integrate import quad

    for r in (0.3, 1.0, 2.5):
        val, _ = quad(lambda s: rs.sn(1.0, s), 0.0, r)
        assert abs(unit_sphere_area(2) * val - 2 * np.pi * (1 - np.cos(r))) < 1e-10
    # On H^2 the area is 2*pi*(cosh r - 1).
    for r in (0.3, 1.0, 2.5):
        val, _ = quad(lambda s: rs.sn(-1.0, s), 0.0, r)
        assert abs(unit_sphere_area(2) * val - 2 * np.pi * (np.cosh(r) - 1)) < 1e-10


# -- error paths ---------------------------------------------------------------


def test_antipodal_log_rejected():
    S2 = rs.Sphere(2)
    x = rs.Point(S2, [1, 0, 0])
    with pytest.raises(CutLocusError):
        rs.log_map(x, rs.Point(S2, [-1, 0, 0]))


def test_log_at_same_point_is_zero():
    S2 = rs.Sphere(2)
    x = rs.Point(S2, [1, 0, 0])
    assert np.allclose(rs.log_map(x, x).coords, 0.0)


def test_mismatched_manifolds_rejected():
    with pytest.raises(UsageError):
        rs.distance(
            rs.Point(rs.Euclidean(2), [0, 0]), rs.Point(rs.Euclidean(3), [0, 0, 0])
        )


def test_tangent_base_mismatch_rejected():
    S2 = rs.Sphere(2)
    x = rs.Point(S2, [1, 0, 0])
    y = rs.Point(S2, [0, 1, 0])
    v = rs.Tangent(y, [1, 0, 0])
    with pytest.raises(UsageError):
        rs.exp_map(x, v)


def test_nonfinite_coords_rejected():
    with pytest.raises(DomainError):
        rs.Point(rs.Euclidean(2), [np.nan, 0.0])


def test_off_manifold_point_rejected():
    with pytest.raises(DomainError):
        rs.Point(rs.Sphere(2), [1.1, 0, 0])
    with pytest.raises(DomainError):
        rs.Point(rs.SPD(2), [[1.0, 2.0], [2.0, 1.0]])  # not positive definite
    with pytest.raises(DomainError):
        rs.Point(rs.Hyperbolic(2), [-1.0, 0.0, 0.0])  # lower sheet


def test_sphere_requires_dim_at_least_two():
    with pytest.raises(ValueError):
        rs.Sphere(1)


def test_manifold_descriptor_constants():
    s = rs.Sphere(4)
    assert (s.kappa_min, s.kappa_max, s.r_max, s.inj) == (1.0, 1.0, np.pi, np.pi)
    e = rs.Euclidean(3)
    assert (e.kappa_min, e.kappa_max) == (0.0, 0.0) and np.isinf(e.r_max)
    h = rs.Hyperbolic(2)
    assert (h.kappa_min, h.kappa_max) == (-1.0, -1.0)
    p = rs.SPD(3)
    assert p.dim == 6 and (p.kappa_min, p.kappa_max) == (-0.5, 0.0)
    prod = rs.Product([rs.Sphere(2), rs.Hyperbolic(2)])
    assert prod.dim == 4
    assert (prod.kappa_min, prod.kappa_max) == (-1.0, 1.0)
    assert np.isinf(prod.r_max)


def test_batch_kernels_match_pointwise():
    rng = np.random.default_rng(77)
    for man in all_manifolds():
        x = random_point(man, rng)
        pts = [random_point(man, rng) for _ in range(8)]
        Y = np.stack([p.coords for p in pts])
        V, d = man.log_dist_batch(x.coords, Y)
        for i, p in enumerate(pts):
            assert abs(d[i] - rs.distance(x, p)) < 1e-10
            assert man.norm(x.coords, V[i] - rs.log_map(x, p).coords) < 1e-9
        back = man.exp_batch(x.coords, V)
        for i, p in enumerate(pts):
            assert man.dist(back[i], p.coords) < 1e-8
