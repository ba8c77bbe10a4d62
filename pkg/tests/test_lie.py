import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nkcp3 import lie
from nkcp3.algebra import expm, is_Sp2, is_sp2
from nkcp3.suites import killing_oracle

B = lie.basis()
small = st.floats(-1, 1, allow_nan=False)


def test_killing_matches_entrywise_oracle():
    for a in B:
        for b in B:
            assert lie.killing(a, b) == pytest.approx(killing_oracle(a.matrix, b.matrix), abs=1e-15)


def test_basis_orthonormal():
    gram = np.array([[lie.killing(a, b) for b in B] for a in B])
    np.testing.assert_allclose(gram, np.eye(10), atol=1e-15)


@pytest.mark.parametrize("a", lie.H_BASIS)
@pytest.mark.parametrize("b", lie.M_BASIS)
def test_reductive(a, b):
    br = lie.bracket(lie.element(a), lie.element(b))
    assert lie.project_h(br).norm() < 1e-13


def test_isotropy_fixes_base_point():
    for n in lie.H_BASIS:
        a = lie.element(n).matrix
        p = lie.P0
        # h acts on p0 along the fiber only
        w = a @ p
        assert np.abs(w - (p.conj() @ w) * p).max() < 1e-14


@settings(max_examples=30)
@given(st.lists(small, min_size=10, max_size=10), st.lists(small, min_size=10, max_size=10))
def test_bracket_bilinear_and_closed(x, y):
    X, Y = lie.Sp2Element.from_coords(np.array(x)), lie.Sp2Element.from_coords(np.array(y))
    Z = lie.bracket(X, Y)
    assert is_sp2(Z.matrix, tol=1e-12)
    np.testing.assert_allclose(lie.bracket(Y, X).matrix, -Z.matrix, atol=1e-14)
    np.testing.assert_allclose((lie.project_h(Z) + lie.project_m(Z)).matrix, Z.matrix, atol=1e-14)
    np.testing.assert_allclose(lie.coords_of(X.matrix), x, atol=1e-14)


def test_ad_invariance():
    for a in B[:3]:
        for b in B[4:7]:
            for c in B[::3]:
                lhs = lie.killing(lie.bracket(a, b), c)
                rhs = -lie.killing(b, lie.bracket(a, c))
                assert lhs == pytest.approx(rhs, abs=1e-14)


@pytest.mark.parametrize("entry", lie.jp_action_check(), ids=lambda e: e.name)
def test_j_p_tables(entry):
    assert entry.residual < 1e-8


def test_j_p_table_negative_control():
    bad = {"m2": -lie.element("m2").matrix}
    worst = max(e.residual for e in lie.jp_action_check(bad))
    assert worst > 0.5


@pytest.mark.parametrize("sol", lie.SU2_SOLUTIONS)
def test_su2_solutions_close(sol):
    rep = lie.verify_su2_case(*lie.su2_ansatz(**sol))
    assert rep.closes
    assert max(rep.residuals.values()) < 1e-10


@pytest.mark.parametrize("lam", [0.5, 1.1, 2.0])
def test_su2_ansatz_fails_off_solution(lam):
    sol = lie.SU2_SOLUTIONS[0]
    rep = lie.verify_su2_case(*lie.su2_ansatz(sol["a"], sol["b"], lam))
    assert not rep.closes


def test_subalgebra_fixtures():
    for case in lie.table1_fixtures():
        dk = lie.generated_dimension(case.generators)
        assert dk == len(case.generators)
        assert lie.isotropy_dimension(case.generators) == case.isotropy_dim
        assert dk - case.isotropy_dim == 2
    assert lie.generated_dimension(B) == 10


@settings(max_examples=20)
@given(small, small, st.floats(0.1, 1.0))
def test_family4_commutes(nu, rho, sigma):
    X, Y = lie.family4_generators(nu, rho, sigma)
    assert lie.bracket(X, Y).norm() < 1e-12
    assert is_sp2(X.matrix, 1e-12) and is_sp2(Y.matrix, 1e-12)


def test_family4_needs_mu_constraint():
    mu = lie.family4_mu(0.3, 0.2, 0.5)
    X, Y = lie.family4_generators(0.3, 0.2, 0.5, mu=mu + 0.1)
    assert lie.bracket(X, Y).norm() > 1e-3
    with pytest.raises(ValueError):
        lie.family4_mu(0.3, 0.2, 0.0)


def test_orbit_jet_matches_finite_differences():
    X, Y = lie.family4_generators(0.3, 0.2, 0.5)
    J = lie.orbit_jet(X.matrix, Y.matrix, lie.P0, 0.4, 0.9, order=2)
    h = 1e-5
    f = lambda t, s: lie.orbit_jet(X.matrix, Y.matrix, lie.P0, t, s, 0).value[0]
    np.testing.assert_allclose(J.partial(1, 0)[0], (f(0.4 + h, 0.9) - f(0.4 - h, 0.9)) / (2 * h), atol=1e-8)
    np.testing.assert_allclose(J.partial(0, 1)[0], (f(0.4, 0.9 + h) - f(0.4, 0.9 - h)) / (2 * h), atol=1e-8)
    assert is_Sp2(expm(X.matrix, 0.4)) and is_Sp2(expm(Y.matrix, 0.9))
    np.testing.assert_allclose(np.linalg.norm(J.value, axis=-1), 1, atol=1e-14)
