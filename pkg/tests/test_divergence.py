"""KL divergence and Hellinger distance calculators."""

import numpy as np
import pytest

import radialstats as rs
from radialstats.errors import UsageError

#: exact closed form beta*(1-cos r0)*(coth beta - 1/beta) at beta=1, m=2, r0=0.5
VMF_KL_1_2_HALF = (1.0 - np.cos(0.5)) * (1.0 / np.tanh(1.0) - 1.0)


def sphere_pair(beta, t, m=2):
    man = rs.Sphere(m)
    prof = rs.make_profile("vmf", beta)
    d1 = rs.make_distribution(man, prof)
    step = np.zeros(m + 1)
    step[1] = t
    c2 = rs.exp_map(d1.center, rs.Tangent(d1.center, step))
    return d1, rs.RadialDistribution(man, c2, prof)


def hyperbolic_pair(beta, t):
    man = rs.Hyperbolic(2)
    prof = rs.make_profile("gaussian", beta)
    d1 = rs.make_distribution(man, prof)
    c2 = rs.exp_map(d1.center, rs.Tangent(d1.center, np.array([0.0, t, 0.0])))
    return d1, rs.RadialDistribution(man, c2, prof)


# -- closed-form oracle -------------------------------------------------------------


def test_vmf_closed_form_zero_separation():
    assert rs.vmf_kl_closed_form(2.0, 3, 0.0) == 0.0


def test_vmf_closed_form_reference_value():
    val = rs.vmf_kl_closed_form(1.0, 2, 0.5)
    assert abs(val - VMF_KL_1_2_HALF) < 1e-10
    assert abs(val - 0.0383209776887439) < 1e-12


def test_vmf_closed_form_langevin_mean_factor():
    # for m=2 the angular mean reduces to coth(beta) - 1/beta
    for beta in (0.5, 1.0, 3.0):
        val = rs.vmf_kl_closed_form(beta, 2, 1.0)
        mean = 1.0 / np.tanh(beta) - 1.0 / beta
        assert abs(val - beta * (1.0 - np.cos(1.0)) * mean) < 1e-10


def test_vmf_closed_form_dimension_bound():
    # KL <= beta^2 r0^2 / (2m) on a parameter grid
    for beta in (0.5, 1.0, 2.0, 4.0, 8.0):
        for m in (2, 3, 5, 9):
            for r0 in np.linspace(0.1, np.pi, 6):
                val = rs.vmf_kl_closed_form(beta, m, r0)
                assert val <= beta**2 * r0**2 / (2 * m) + 1e-12
                assert val >= 0.0


def test_vmf_closed_form_validation():
    with pytest.raises(UsageError):
        rs.vmf_kl_closed_form(-1.0, 2, 0.5)
    with pytest.raises(UsageError):
        rs.vmf_kl_closed_form(1.0, 1, 0.5)
    with pytest.raises(UsageError):
        rs.vmf_kl_closed_form(1.0, 2, 4.0)


# -- quadrature path ------------------------------------------------------------------


def test_kl_quadrature_matches_closed_form():
    d1, d2 = sphere_pair(1.0, 0.5)
    q = rs.kl_divergence(d1, d2, "quadrature2d")
    assert q.converged
    assert abs(q.value - VMF_KL_1_2_HALF) / VMF_KL_1_2_HALF < 1e-8
    assert q.value <= 1.0 * 0.5**2 / 4.0  # beta^2 r0^2 / (2m) = 0.0625


def test_kl_quadrature_identical_distributions():
    d1, _ = sphere_pair(1.0, 0.5)
    assert abs(rs.kl_divergence(d1, d1).value) < 1e-10


def test_kl_quadrature_hyperbolic_nonnegative():
    e1, e2 = hyperbolic_pair(1.0, 0.3)
    q = rs.kl_divergence(e1, e2)
    assert q.converged and q.value > 0.0


def test_kl_monte_carlo_consistent():
    d1, d2 = sphere_pair(1.0, 0.5)
    mc = rs.kl_divergence(d1, d2, "monte_carlo", n=200_000, seed=77)
    assert mc.standard_error is not None
    assert abs(mc.value - VMF_KL_1_2_HALF) < 3.0 * mc.standard_error
    self_mc = rs.kl_divergence(d1, d1, "monte_carlo", n=50_000, seed=78)
    assert abs(self_mc.value) <= 3.0 * max(self_mc.standard_error, 1e-12)


def test_kl_monte_carlo_unnormalized_spd():
    # identical profiles let the unknown normalizer cancel
    man = rs.SPD(2)
    prof = rs.make_profile("gaussian", 2.0)
    d1 = rs.make_distribution(man, prof, unnormalized=True)
    c2 = rs.exp_map(d1.center, rs.Tangent(d1.center, 0.3 * np.eye(2)))
    d2 = rs.RadialDistribution(man, c2, prof, unnormalized=True)
    mc = rs.kl_divergence(d1, d2, "monte_carlo", n=400, seed=5)
    assert np.isfinite(mc.value) and mc.value > 0.0


def test_kl_preconditions():
    d1, _ = sphere_pair(1.0, 0.5)
    e1, _ = hyperbolic_pair(1.0, 0.3)
    with pytest.raises(UsageError):
        rs.kl_divergence(d1, e1)
    hot = rs.make_distribution(rs.Sphere(2), rs.make_profile("vmf", 2.0))
    with pytest.raises(UsageError):
        rs.kl_divergence(d1, hot, "quadrature2d")  # different temperature
    gau = rs.make_distribution(rs.Sphere(2), rs.make_profile("gaussian", 1.0))
    with pytest.raises(UsageError):
        rs.kl_divergence(d1, gau)  # different family
    with pytest.raises(UsageError):
        rs.kl_divergence(d1, d1, "monte_carlo")  # n and seed missing
    spd = rs.make_distribution(
        rs.SPD(2), rs.make_profile("gaussian", 1.0), unnormalized=True
    )
    with pytest.raises(UsageError):
        rs.kl_divergence(spd, spd, "quadrature2d")


# -- hellinger -------------------------------------------------------------------------


def test_hellinger_self_and_symmetry():
    d1, d2 = sphere_pair(1.0, 0.5)
    assert abs(rs.hellinger_distance(d1, d1).value) < 1e-9
    h12 = rs.hellinger_distance(d1, d2).value
    h21 = rs.hellinger_distance(d2, d1).value
    assert abs(h12 - h21) < 1e-10
    assert 0.0 < h12 < np.sqrt(2.0)


def test_hellinger_near_disjoint_supports():
    d1, d2 = sphere_pair(200.0, np.pi - 1e-6)
    h = rs.hellinger_distance(d1, d2).value
    assert abs(h - np.sqrt(2.0)) < 1e-3


def test_hellinger_l1_relation():
    # total variation style bound: d1 <= 2 * sqrt(2) * hellinger
    from radialstats.divergence import pair_reduction_integral

    d1, d2 = sphere_pair(1.5, 0.8)
    phi = d1.profile.phi
    z = np.exp(d1.log_z)

    def l1_integrand(r1, r2):
        return np.abs(np.exp(-np.asarray(phi(r1))) - np.exp(-np.asarray(phi(r2)))) / z

    l1 = pair_reduction_integral(d1.manifold, l1_integrand, 0.8, epsrel=1e-8).value
    h = rs.hellinger_distance(d1, d2).value
    assert l1 <= 2.0 * np.sqrt(2.0) * h + 1e-9
    assert l1 <= 2.0 * h + 1e-9  # the sharper standard relation


def test_hellinger_monte_carlo_consistent():
    d1, d2 = sphere_pair(1.0, 0.7)
    exact = rs.hellinger_distance(d1, d2).value
    mc = rs.hellinger_distance(d1, d2, "monte_carlo", n=200_000, seed=9)
    assert abs(mc.value - exact) < 0.01


def test_kl_hellinger_nonnegative_across_grid():
    for beta in (0.5, 2.0):
        for t in (0.1, 0.6, 1.5):
            d1, d2 = sphere_pair(beta, t)
            assert rs.kl_divergence(d1, d2).value >= 0.0
            h = rs.hellinger_distance(d1, d2).value
            assert 0.0 <= h <= np.sqrt(2.0) + 1e-12
