import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nkcp3 import catalog, lie
from nkcp3.legendre import legendre_integrate
from nkcp3.suites import MEAN_CURVATURE_CASES, TYPE_CLAIMS, claim_residual, classify_grid
from nkcp3.surface import GeometryError, analyze, predicate_report, totally_real_defect


@pytest.mark.parametrize(
    "family, scalars, needle",
    [
        ("F3", {"mu": 0.0, "nu": 0.4}, "F3 requires mu != 0"),
        ("F4", {"nu": 0.1}, "F4 requires sigma != 0"),
        ("ParallelKappa", {}, "kappa != 0"),
        ("F4", {"nu": 0.1, "rho": 0.2, "sigma": 0.3, "mu": 5.0}, "commutation constraint"),
        ("F9", {}, "unknown family"),
    ],
)
def test_parameter_errors(family, scalars, needle):
    with pytest.raises(catalog.ParameterError, match=needle):
        catalog.FamilyParams(family, scalars)


def test_clifford_is_family1_origin():
    u, v = catalog.clifford_torus().grid(5)
    np.testing.assert_allclose(catalog.clifford_torus()(u, v), catalog.family1(0, 0)(u, v), atol=1e-15)


@settings(max_examples=15, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2))
def test_family1_totally_real(mu, nu):
    imm = catalog.family1(mu, nu)
    u, v = imm.grid(3)
    np.testing.assert_allclose(np.linalg.norm(imm(u, v), axis=-1), 1, atol=1e-13)
    assert totally_real_defect(imm, u, v).max() < 1e-9


@settings(max_examples=10, deadline=None)
@given(st.floats(0.1, 2), st.floats(0.1, 2))
def test_family3_totally_real(mu, nu):
    imm = catalog.family3(mu, nu)
    u, v = imm.grid(3)
    assert totally_real_defect(imm, u, v).max() < 1e-9


@pytest.mark.parametrize("family, params", MEAN_CURVATURE_CASES, ids=lambda x: str(x))
def test_mean_curvature_closed_forms(family, params):
    assert catalog.mean_curvature_table(family, params).residual < 1e-8


def test_closed_form_singularities():
    with pytest.raises(catalog.ParameterError):
        catalog.mean_curvature_closed_form("F2", {"nu": 0.0})
    with pytest.raises(catalog.ParameterError):
        catalog.mean_curvature_closed_form("Sphere", {})


@pytest.mark.parametrize("claim", TYPE_CLAIMS[:8], ids=lambda c: f"{c[0]}{c[1]}")
def test_type_claims(claim):
    fam, params, tag, expected = claim
    imm = catalog.family_immersion(catalog.FamilyParams(fam, params))
    reps = classify_grid(imm, n=3)
    assert max(claim_residual(r, tag, expected) for r in reps) < 1e-6


def test_claim_residual_flags_wrong_tag():
    reps = classify_grid(catalog.sphere(), n=2)
    assert claim_residual(reps[0], "Type0", {"lambda": 0.0}) == 1.0


def test_minimal_root():
    assert catalog.minimal_root_find() == pytest.approx(catalog.MINIMAL_NU, abs=1e-9)
    assert catalog.MINIMAL_NU == pytest.approx(0.8002425902201203, abs=1e-15)
    assert catalog.family2_H_signed(0.7) * catalog.family2_H_signed(0.9) < 0
    assert catalog.family2_H_norm(catalog.MINIMAL_NU) < 1e-12


def test_sphere_domain_edge_is_singular():
    with pytest.raises(GeometryError):
        totally_real_defect(catalog.sphere(), [math.pi / 2], [1.0])


def test_flat_minimal():
    pr = predicate_report(catalog.flat_minimal_cp2(), n=4)
    assert pr["flat"].value and pr["kahler_minimal"].value


def test_rp2_minimal():
    pr = predicate_report(catalog.rp2(0.3), n=4)
    assert pr["minimal"].value and pr["kahler_totally_geodesic"].value


@pytest.mark.parametrize("kappa", [0.5, -1.0, 2.0])
def test_gamma_kappa_solves_legendre_system(kappa):
    t = np.linspace(-1.5, 2.0, 8)
    res = legendre_integrate(catalog.gamma_kappa_spec(kappa), t, dt=5e-4, order=0)
    np.testing.assert_allclose(res.gamma, catalog.gamma_kappa_unit(kappa, t), atol=1e-10)


@pytest.mark.parametrize("kappa", [0.5, 1.0, 2.0])
def test_parallel_k4(kappa):
    imm = catalog.parallel_kappa(kappa)
    data = analyze(imm, *imm.grid(3))
    np.testing.assert_allclose(data.coeffs["k4"].value, -kappa / math.sqrt(2), atol=1e-10)


def test_parallel_matches_family4_coefficients():
    kappa = 1.0
    a = analyze(catalog.parallel_kappa(kappa), *catalog.parallel_kappa(kappa).grid(2))
    X, Y = lie.family4_generators(0.0, 0.0, -kappa / (2 * math.sqrt(2)))
    orbit = lie.orbit_surface(X, Y)
    b = analyze(orbit, *orbit.grid(2))
    for key in ("k1", "k2", "k3", "k4", "m1", "m2", "m3", "m4"):
        assert np.abs(a.coeffs[key].value).mean() == pytest.approx(np.abs(b.coeffs[key].value).mean(), abs=1e-9)


def test_codazzi_quaternionic_sign():
    imm = catalog.family_immersion(catalog.FamilyParams("Codazzi", {"kappa": 0.4, "kappa2": 0.3}))
    u, v = imm.grid(3)
    assert catalog.codazzi_quaternionic_check(imm, u, v) < 1e-10
    assert catalog.codazzi_quaternionic_check(imm, u, v, sign=1) > 1e-2


def test_codazzi_zero_is_clifford_like():
    zero = predicate_report(catalog.family_immersion(catalog.FamilyParams("Codazzi", {})), n=4)
    cliff = predicate_report(catalog.clifford_torus(), n=4)
    assert {k: p.value for k, p in zero.items()} == {k: p.value for k, p in cliff.items()}


def test_codazzi_rejects_wrong_spaces():
    spec = catalog.gamma_kappa_spec(1.0)
    with pytest.raises(catalog.ParameterError):
        catalog.codazzi_surface(spec, spec)
