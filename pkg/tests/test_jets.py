import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nkcp3 import jets
from nkcp3.jets import Jet, jet_eval, monomials

coord = st.floats(-1.5, 1.5, allow_nan=False)


def fd_partial(f, u, v, a, b, h=1e-3):
    """Central finite differences of order a in u and b in v."""
    w = {0: [(0, 1.0)], 1: [(-1, -0.5), (1, 0.5)], 2: [(-1, 1.0), (0, -2.0), (1, 1.0)]}
    return sum(cu * cv * f(u + i * h, v + k * h) for i, cu in w[a] for k, cv in w[b]) / h ** (a + b)


CASES = {
    "sin*exp": (lambda u, v: jets.sin(u) * jets.exp(v), lambda u, v: np.sin(u) * np.exp(v)),
    "quotient": (lambda u, v: (u * v + 2) / (v * v + 1), lambda u, v: (u * v + 2) / (v * v + 1)),
    "sqrt": (lambda u, v: jets.sqrt(u * u + v * v + 1), lambda u, v: np.sqrt(u * u + v * v + 1)),
    "arctan2": (lambda u, v: jets.arctan2(v + 2, u + 3), lambda u, v: np.arctan2(v + 2, u + 3)),
    "expi": (lambda u, v: jets.expi(u * v), lambda u, v: np.exp(1j * u * v)),
    "power": (lambda u, v: (u - v) ** 3, lambda u, v: (u - v) ** 3),
}


@pytest.mark.parametrize("name", CASES)
@pytest.mark.parametrize("ab", [(1, 0), (0, 1), (1, 1), (2, 0), (0, 2)])
def test_partials_match_finite_differences(name, ab):
    jf, nf = CASES[name]
    u, v = 0.3, -0.4
    J = jet_eval(jf, u, v, order=3)
    assert abs(J.partial(*ab) - fd_partial(nf, u, v, *ab)) < 1e-5


def test_exact_partials_of_product():
    J = jet_eval(lambda u, v: jets.sin(u) * jets.cos(v), 0.2, 0.7, order=3)
    assert J.partial(1, 2) == pytest.approx(-math.cos(0.2) * math.cos(0.7), abs=1e-14)
    assert J.partial(3, 0) == pytest.approx(-math.cos(0.2) * math.cos(0.7), abs=1e-14)


@given(coord, coord)
def test_d_commutes(u, v):
    J = jet_eval(lambda a, b: jets.exp(a * b) * jets.sin(a + 2 * b), u, v, order=3)
    np.testing.assert_allclose(J.d(0).d(1).value, J.d(1).d(0).value, rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(J.d(0).partial(0, 1), J.partial(1, 1), rtol=1e-12, atol=1e-12)


@given(coord, coord)
def test_product_rule(u, v):
    f = lambda a, b: jets.sin(a * b)
    g = lambda a, b: a + jets.exp(b)
    F, G = jet_eval(f, u, v, 2), jet_eval(g, u, v, 2)
    FG = jet_eval(lambda a, b: f(a, b) * g(a, b), u, v, 2)
    lhs = FG.d(0).value
    rhs = F.d(0).value * G.value + F.value * G.d(0).value
    assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(rhs))


@settings(max_examples=25)
@given(st.lists(coord, min_size=1, max_size=6))
def test_batched_matches_scalar(us):
    us = np.array(us)
    vs = us[::-1] * 0.5
    f = lambda a, b: jets.sqrt(a * a + 1) * jets.cos(b)
    batch = jet_eval(f, us, vs, 2)
    for k in range(len(us)):
        single = jet_eval(f, us[k], vs[k], 2)
        np.testing.assert_allclose(batch.c[:, k], single.c, atol=1e-14)


def test_truncate_and_errors():
    J = jet_eval(lambda u, v: u * v, 0.1, 0.2, order=3)
    assert J.truncate(1).order == 1
    assert J.truncate(1).partial(0, 1) == pytest.approx(0.1)
    with pytest.raises(ValueError):
        J.truncate(4)
    with pytest.raises(ValueError):
        J.truncate(0).d(0)
    with pytest.raises(ValueError):
        Jet(np.zeros(3), order=2)


def test_monomial_count():
    assert [len(monomials(k)) for k in range(4)] == [1, 3, 6, 10]
