"""Profile family construction, integrability, and regularity checks."""

import numpy as np
import pytest

import radialstats as rs
from radialstats.errors import IndeterminateError, ParameterError
from radialstats.profiles import (
    check_integrability,
    check_regularity,
    load_profile_table,
    make_profile,
)


def test_builtin_values():
    assert make_profile("gaussian", 1.0).phi(2.0) == 4.0
    assert abs(make_profile("vmf", 3.0).phi(np.pi) - 6.0) < 1e-12
    assert make_profile("laplacian", 2.0).dphi(1.0) == 2.0
    assert abs(make_profile("power", 2.0, p=1.5).phi(4.0) - 16.0) < 1e-12


def test_parameter_validation():
    with pytest.raises(ParameterError):
        make_profile("gaussian", -1.0)
    with pytest.raises(ParameterError):
        make_profile("gaussian", 0.0)
    with pytest.raises(ParameterError):
        make_profile("power", 1.0, p=1.0)
    with pytest.raises(ParameterError):
        make_profile("power", 1.0)
    with pytest.raises(ParameterError):
        make_profile("florp", 1.0)
    with pytest.raises(ParameterError):
        make_profile("gaussian", 1.0, p=2.0)


def test_temperature_rescaling_is_multiplicative():
    base = make_profile("vmf", 1.0)
    hot = base.with_beta(3.5)
    r = np.linspace(0, np.pi, 11)
    assert np.allclose(hot.phi(r), 3.5 * base.phi(r))
    assert hot.family_base().beta == 1.0


@pytest.mark.parametrize("kind,beta,p", [
    ("gaussian", 1.0, None),
    ("laplacian", 2.0, None),
    ("power", 0.7, 2.5),
    ("vmf", 2.0, None),
])
def test_derivative_matches_central_difference(kind, beta, p):
    prof = make_profile(kind, beta, p=p)
    hi = np.pi if kind == "vmf" else 5.0
    grid = np.linspace(0.1, hi - 0.1, 200)
    h = 1e-6
    numeric = (prof.phi(grid + h) - prof.phi(grid - h)) / (2 * h)
    analytic = prof.dphi(grid)
    rel = np.abs(numeric - analytic) / (1.0 + np.abs(analytic))
    assert np.max(rel) < 1e-6


def test_make_profile_deterministic():
    a = make_profile("gaussian", 2.0)
    b = make_profile("gaussian", 2.0)
    r = np.linspace(0, 3, 7)
    assert np.array_equal(a.phi(r), b.phi(r))


# -- integrability -------------------------------------------------------------


def test_laplacian_threshold_on_hyperbolic_plane():
    H2 = rs.Hyperbolic(2)
    assert not check_integrability(make_profile("laplacian", 0.5), H2).passed
    assert check_integrability(make_profile("laplacian", 2.0), H2).passed
    # the threshold sqrt(-kappa_min) * (m - 1) = 1 is strict
    assert not check_integrability(make_profile("laplacian", 1.0), H2).passed


def test_gaussian_always_integrable():
    assert check_integrability(make_profile("gaussian", 1.0), rs.Euclidean(5)).passed
    assert check_integrability(make_profile("gaussian", 0.2), rs.Hyperbolic(2)).passed
    assert check_integrability(make_profile("gaussian", 0.5), rs.SPD(3)).passed


def test_compact_always_integrable():
    prof = make_profile("vmf", 1.0)
    res = check_integrability(prof, rs.Sphere(2))
    assert res.passed and "compact" in res.reason


def test_vmf_on_noncompact_rejected():
    with pytest.raises(ParameterError):
        check_integrability(make_profile("vmf", 1.0), rs.Hyperbolic(2))


def test_custom_tail_verdicts():
    r = np.linspace(0.0, 300.0, 400)
    steep = make_profile("custom", 1.0, table=(r, 3.0 * r))
    assert check_integrability(steep, rs.Hyperbolic(2)).passed
    shallow = make_profile("custom", 1.0, table=(r, 0.5 * r))
    assert not check_integrability(shallow, rs.Hyperbolic(2)).passed
    flat = make_profile("custom", 1.0, table=(r, np.ones_like(r)))
    # constant envelope on a line: neither decay nor growth detectable
    with pytest.raises(IndeterminateError):
        check_integrability(flat, rs.Euclidean(1))
    # polynomial volume growth against a flat profile is a clear fail
    assert not check_integrability(flat, rs.Euclidean(2)).passed
    # on flat space the same shallow linear profile is fine
    assert check_integrability(shallow, rs.Euclidean(2)).passed


# -- regularity ------------------------------------------------------------------


def test_regularity_builtin_families():
    rep = check_regularity(make_profile("gaussian", 1.0), rs.Euclidean(2))
    assert rep.lipschitz_ok and rep.strictly_increasing_ok and rep.differentiable_ok

    rep = check_regularity(make_profile("vmf", 2.0), rs.Sphere(3))
    assert rep.lipschitz_ok and rep.strictly_increasing_ok and rep.differentiable_ok
    assert any("endpoint" in n for n in rep.notes)


def test_regularity_flat_profile_not_strict():
    r = np.linspace(0.0, 5.0, 50)
    flat = make_profile("custom", 1.0, table=(r, np.zeros_like(r)))
    rep = check_regularity(flat, rs.Sphere(2))
    assert not rep.strictly_increasing_ok


# -- custom table ingestion ------------------------------------------------------


def test_custom_profile_interpolation_and_extension():
    r = np.linspace(0.0, 2.0, 21)
    prof = make_profile("custom", 2.0, table=(r, r**2))
    assert abs(prof.phi(1.0) - 2.0) < 1e-8
    # beyond the last knot the profile continues linearly
    slope_end = prof.dphi(2.0)
    assert abs(prof.phi(3.0) - (prof.phi(2.0) + slope_end * 1.0)) < 1e-10


def test_custom_table_validation():
    r = np.linspace(0.0, 1.0, 5)
    with pytest.raises(ParameterError):
        make_profile("custom", 1.0, table=(r, -np.ones_like(r)))
    with pytest.raises(ParameterError):
        make_profile("custom", 1.0, table=(r[::-1], r))
    with pytest.raises(ParameterError):
        make_profile("custom", 1.0, table=(r + 1.0, r))  # does not start at zero
    with pytest.raises(ParameterError):
        make_profile("custom", 1.0, table=(r, np.array([0, 1, 0.5, 2, 3.0])))
    with pytest.raises(ParameterError):
        make_profile("custom", 1.0)


def test_load_profile_table_roundtrip(tmp_path):
    path = tmp_path / "prof.csv"
    path.write_text("r,phi\n0.0,0.0\n0.5,0.3\n1.0,1.1\n")
    r, vals = load_profile_table(path)
    assert np.allclose(r, [0.0, 0.5, 1.0])
    assert np.allclose(vals, [0.0, 0.3, 1.1])
    prof = make_profile("custom", 1.0, table=(r, vals))
    assert abs(prof.phi(0.5) - 0.3) < 1e-12


def test_load_profile_table_bad_rows(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("0.0,0.0\n0.5\n")
    with pytest.raises(ParameterError):
        load_profile_table(path)
