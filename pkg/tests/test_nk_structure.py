import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nkcp3.algebra import jvec, kvec
from nkcp3.nk_structure import (
    AmbientPoint,
    D_at,
    G_at,
    J0_at,
    J_at,
    P_at,
    TangentVec,
    apply_J,
    g0_at,
    g_at,
    holonomy_curvature,
    nk_metric,
    random_horizontal,
    random_point,
    random_totally_real_pair,
    riemann_at,
    riemann_nk,
    tensor_G,
)
from nkcp3.suites import (
    FRAME_TABLE,
    adapted_frames,
    curvature_symmetry_residual,
    frame_table_residual,
    structure_identity_residuals,
)

seeds = st.integers(0, 2**32 - 1)


def sample(s, k=3):
    rng = np.random.default_rng(s)
    p = random_point(rng)
    return p, [random_horizontal(rng, p) for _ in range(k)]


@given(seeds)
def test_almost_product_and_complex(s):
    p, (x, y, _) = sample(s)
    np.testing.assert_allclose(P_at(p, P_at(p, x)), x, atol=1e-12)
    np.testing.assert_allclose(J_at(p, J_at(p, x)), -x, atol=1e-12)
    np.testing.assert_allclose(J0_at(p, J0_at(p, x)), -x, atol=1e-12)
    np.testing.assert_allclose(J_at(p, P_at(p, x)), P_at(p, J_at(p, x)), atol=1e-12)
    assert abs(g_at(p, J_at(p, x), J_at(p, y)) - g_at(p, x, y)) < 1e-12
    assert abs(g_at(p, P_at(p, x), P_at(p, y)) - g_at(p, x, y)) < 1e-12


@given(seeds)
def test_vertical_eigenspace(s):
    p, _ = sample(s)
    for w in (jvec(p), kvec(p)):
        np.testing.assert_allclose(P_at(p, w), -w, atol=1e-12)
        np.testing.assert_allclose(J_at(p, w), -1j * w, atol=1e-12)
    # g agrees with g0 on the -1 eigenspace of P
    assert abs(g_at(p, jvec(p), jvec(p)) - g0_at(p, jvec(p), jvec(p))) < 1e-12


@given(seeds)
def test_G_skew_and_type(s):
    p, (x, y, _) = sample(s)
    np.testing.assert_allclose(G_at(p, x, y), -G_at(p, y, x), atol=1e-12)
    np.testing.assert_allclose(G_at(p, x, J_at(p, y)), -J_at(p, G_at(p, x, y)), atol=1e-12)
    assert abs(g_at(p, G_at(p, x, y), x)) < 1e-12
    assert abs(g_at(p, G_at(p, x, y), y)) < 1e-12


@given(seeds)
def test_D_torsion_free_part(s):
    p, (x, y, _) = sample(s)
    # D is the difference of two torsion-free connections
    np.testing.assert_allclose(D_at(p, x, y), D_at(p, y, x), atol=1e-12)


@settings(max_examples=20)
@given(seeds)
def test_totally_real_pair(s):
    rng = np.random.default_rng(s)
    p = random_point(rng)
    u, v = random_totally_real_pair(rng, p)
    assert abs(g_at(p, u, u) - 1) < 1e-12
    assert abs(g_at(p, v, v) - 1) < 1e-12
    assert abs(g_at(p, u, v)) < 1e-12
    assert abs(g_at(p, J_at(p, u), v)) < 1e-12


def test_structure_identities(rng):
    res = structure_identity_residuals(rng, n=30)
    assert set(res) == {"constant type", "nabla G", "G(X, G(Y, Z))", "g(G, G)"}
    assert max(res.values()) < 1e-12


def test_frame_table(rng):
    assert len(FRAME_TABLE) == 15
    assert frame_table_residual(rng, n=10) < 1e-12


def test_frame_orthonormal(rng):
    p, e = adapted_frames(rng, 5)
    gram = np.array([[g_at(p, a, b) for b in e] for a in e])
    np.testing.assert_allclose(gram, np.broadcast_to(np.eye(6)[:, :, None], gram.shape), atol=1e-12)


def test_curvature_symmetries(rng):
    assert curvature_symmetry_residual(rng, n=30) < 1e-10


def test_holonomy_single_loop(rng):
    p = random_point(rng)
    x, y, z = (a / np.linalg.norm(a) for a in (random_horizontal(rng, p) for _ in range(3)))
    np.testing.assert_allclose(holonomy_curvature(p, x, y, z), riemann_at(p, x, y, z), atol=1e-5)


def test_typed_api():
    base = AmbientPoint(np.array([1, 0, 0, 0]))
    x = TangentVec(base, np.array([0, 1, 0, 0]))
    y = TangentVec(base, np.array([0, 0, 0, 1j]))
    assert nk_metric(x, x) > 0
    assert abs(nk_metric(apply_J(x), apply_J(x)) - nk_metric(x, x)) < 1e-14
    assert tensor_G(x, y).base is base
    riemann_nk(x, y, x)
    with pytest.raises(ValueError):
        AmbientPoint(np.array([1, 1, 0, 0]))
    with pytest.raises(ValueError):
        TangentVec(base, np.array([1j, 0, 0, 0]))
    other = TangentVec(AmbientPoint(np.array([0, 1, 0, 0])), np.array([1, 0, 0, 0]))
    with pytest.raises(ValueError):
        tensor_G(x, other)
