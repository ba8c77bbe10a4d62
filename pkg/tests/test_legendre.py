import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nkcp3.algebra import rdot
from nkcp3.legendre import (
    Curvature,
    LegendreCurveSpec,
    constant_curvature_s3,
    constraint_drift,
    legendre_integrate,
    random_s7_initial,
    standard_s3_spec,
)


@pytest.mark.parametrize("c", [0.0, 0.5, -1.3, 2.0])
def test_s3_constant_curvature_closed_form(c):
    t = np.linspace(-2, 3, 11)
    res = legendre_integrate(standard_s3_spec(Curvature.constant(c)), t, dt=1e-3)
    g, dg = constant_curvature_s3(c, t)
    np.testing.assert_allclose(res.gamma, g, atol=1e-10)
    np.testing.assert_allclose(res.derivs[1], dg, atol=1e-10)


def test_closed_form_solves_ode():
    c = 0.8
    t = np.linspace(0, 2, 5)
    g, dg = constant_curvature_s3(c, t)
    h = 1e-5
    g2 = (constant_curvature_s3(c, t + h)[1] - constant_curvature_s3(c, t - h)[1]) / (2 * h)
    np.testing.assert_allclose(g2, -g + c * 1j * dg, atol=1e-8)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1), st.lists(st.floats(-2, 2), min_size=3, max_size=3))
def test_s7_constraints_preserved(s, ks):
    g0, v0 = random_s7_initial(np.random.default_rng(s))
    spec = LegendreCurveSpec("S7", tuple(Curvature.constant(k) for k in ks), g0, v0)
    res = legendre_integrate(spec, np.linspace(0, 3, 4), dt=2e-3)
    assert res.max_drift <= 1e-10
    for g, v in zip(res.gamma, res.derivs[1]):
        assert constraint_drift("S7", g, v) <= 1e-10


def test_third_derivative_consistent():
    spec = standard_s3_spec(Curvature.polynomial([0.2, 0.5, -0.1]))
    h = 1e-4
    res = legendre_integrate(spec, np.array([0.9 - h, 0.9, 0.9 + h]), dt=1e-4)
    fd = (res.derivs[2][2] - res.derivs[2][0]) / (2 * h)
    np.testing.assert_allclose(res.derivs[3][1], fd, atol=1e-6)


def test_curvature_kinds():
    p = Curvature.polynomial([1.0, 2.0])
    assert p(0.5) == pytest.approx(2.0)
    assert p.deriv(1)(3.0) == pytest.approx(2.0)
    assert p.integral(1.0) == pytest.approx(2.0)
    t = np.linspace(0, 1, 6)
    s = Curvature.samples(t, t**2)
    assert s(0.4) == pytest.approx(0.16, abs=1e-3)
    with pytest.raises(ValueError):
        p.deriv(7)


@pytest.mark.parametrize(
    "space, g0, v0",
    [
        ("S3", [1, 0], [1, 0]),
        ("S3", [1, 0], [1j, 0]),
        ("S7", [1, 0, 0, 0], [0, 0, 1, 0]),
        ("S4", [1, 0], [0, 1]),
        ("S3", [1, 0, 0], [0, 1, 0]),
    ],
)
def test_spec_rejects_bad_initial_data(space, g0, v0):
    n = 1 if space == "S3" else 3
    with pytest.raises(ValueError):
        LegendreCurveSpec(space, (Curvature.constant(0.0),) * n, np.array(g0, complex), np.array(v0, complex))


def test_negative_times():
    res = legendre_integrate(standard_s3_spec(Curvature.constant(1.0)), [-1.0, 1.0])
    assert all(abs(rdot(g, g) - 1) < 1e-12 for g in res.gamma)
