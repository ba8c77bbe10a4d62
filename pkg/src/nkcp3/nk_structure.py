"""Ambient geometry of CP^3 through the Hopf fibration S^7 -> CP^3.

Tangent vectors of CP^3 at [p] are represented by their horizontal lifts at
the representative p.  Every ``*_at`` function takes the representative p
and lifts x, y, ... as arrays (or jets) with C^4 on the last axis, so the
same code runs pointwise, batched over sample points, or over Taylor jets.

The Kähler structure is (g0, J0) with J0 = multiplication by i.  The
almost product structure P is -1 on span{jp, kp} and +1 on its horizontal
complement; J = P J0 and g = 3/2 g0 + 1/2 g0(., P.) give the nearly Kähler
structure.  G = nabla J is evaluated in closed form from the Kähler
derivative of P, so no connection is needed to compute it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import jets
from .algebra import _bc, horizontal, jvec, kvec, normalize, rdot, vertical_rate
from .jets import Jet

__all__ = [
    "AmbientPoint",
    "TangentVec",
    "P_at",
    "J_at",
    "J0_at",
    "g_at",
    "g0_at",
    "dP_at",
    "dJ0_at",
    "G_at",
    "D_at",
    "nablaJ_at",
    "wedge_at",
    "riemann_at",
    "covariant_fs",
    "covariant_nk",
    "holonomy_curvature",
    "fs_metric",
    "nk_metric",
    "apply_P",
    "apply_J",
    "apply_J0",
    "tensor_G",
    "connection_difference_D",
    "riemann_nk",
    "random_point",
    "random_horizontal",
    "random_totally_real_pair",
    "d1_projector",
    "nabla_tensor",
    "nablaG_at",
    "nablaG_formula",
    "nablaP_residual",
    "nablaJ0_residual",
]


# pointwise tensors -----------------------------------------------------------


def d1_projector(p, x):
    """Component of a horizontal x along the twistor-fiber plane span{jp, kp}."""
    a, b = jvec(p), kvec(p)
    return _bc(rdot(x, a)) * a + _bc(rdot(x, b)) * b


def P_at(p, x):
    return x - 2 * d1_projector(p, x)


def J0_at(p, x):
    return 1j * x


def J_at(p, x):
    return P_at(p, 1j * x)


def g0_at(p, x, y):
    return rdot(x, y)


def g_at(p, x, y):
    return 1.5 * rdot(x, y) + 0.5 * rdot(x, P_at(p, y))


def dP_at(p, x, y):
    """(nabla0_x P) y for the Fubini-Study connection."""
    a, b = jvec(p), kvec(p)
    jx, kx = jvec(x), kvec(x)
    return -2 * (
        _bc(rdot(y, jx)) * a
        + _bc(rdot(y, kx)) * b
        + _bc(rdot(y, a)) * horizontal(p, jx)
        + _bc(rdot(y, b)) * horizontal(p, kx)
    )


def dJ0_at(p, x, y):
    """(nabla0_x J) y; J0 is nabla0-parallel so only P contributes."""
    return dP_at(p, x, 1j * y)


def G_at(p, x, y):
    """G = nabla J via 2 G(x, y) = (nabla0 J)(x, y) - (nabla0 J)(y, x)."""
    return 0.5 * (dJ0_at(p, x, y) - dJ0_at(p, y, x))


def D_at(p, x, y):
    """Difference tensor nabla - nabla0: D(x, y) = -1/2 ((J + J0)/2) G(Px, y)."""
    gxy = G_at(p, P_at(p, x), y)
    return -0.25 * (J_at(p, gxy) + 1j * gxy)


def nablaJ_at(p, x, y):
    """(nabla_x J) y assembled from nabla0 J and D (independent of G_at's shortcut)."""
    return dJ0_at(p, x, y) + D_at(p, x, J_at(p, y)) - J_at(p, D_at(p, x, y))


def wedge_at(p, x, y, z):
    """(x ∧ y) z = g(y, z) x - g(x, z) y."""
    return _bc(g_at(p, y, z)) * x - _bc(g_at(p, x, z)) * y


def riemann_at(p, x, y, z):
    """Closed-form Riemann tensor R(x, y) z of the nearly Kähler metric."""
    w = wedge_at(p, x, y, z)
    jx, jy, jz = J_at(p, x), J_at(p, y), J_at(p, z)
    ix, iy, iz = 1j * x, 1j * y, 1j * z
    pz = P_at(p, z)
    out = w
    out = out + 0.5 * (w + wedge_at(p, ix, iy, z) + 2 * _bc(g_at(p, x, iy)) * iz)
    out = out - 0.25 * (w + wedge_at(p, jx, jy, z) + 2 * _bc(g_at(p, x, jy)) * jz)
    out = out - 0.5 * (
        wedge_at(p, x, y, pz) + P_at(p, w) - 2 * P_at(p, wedge_at(p, x, y, pz))
    )
    return out


# covariant derivatives along parametrized maps --------------------------------


def covariant_fs(F: Jet, Z: Jet, which: int) -> Jet:
    """Fubini-Study derivative of the lifted field Z along coordinate ``which``.

    F is any (not necessarily horizontal) lift of the map into S^7.  Moving
    along the fiber rotates horizontal lifts by i, hence the vertical-rate
    correction.
    """
    dF = F.d(which)
    dZ = Z.d(which)
    p = F.truncate(dZ.order)
    return horizontal(p, dZ) - _bc(vertical_rate(p, dF)) * (1j * Z.truncate(dZ.order))


def covariant_nk(F: Jet, Z: Jet, which: int) -> Jet:
    """Nearly Kähler derivative nabla = nabla0 + D along coordinate ``which``."""
    out = covariant_fs(F, Z, which)
    p = F.truncate(out.order)
    x = horizontal(p, F.d(which).truncate(out.order))
    return out + D_at(p, x, Z.truncate(out.order))


# covariant derivatives of ambient tensors --------------------------------------


def _geodesic_jet(p, x, order: int = 1) -> Jet:
    """Jet in t of normalize(p + t x); its velocity at t = 0 is x for horizontal x."""
    p = np.asarray(p, dtype=complex)
    t, _ = jets.variables(np.zeros(p.shape[:-1]), np.zeros(p.shape[:-1]), order)
    return normalize(p + _bc(t) * x)


def nabla_tensor(tensor, p, x, *vecs):
    """(nabla_x T)(y, z, ...) for a vector-valued tensor T(p, y, z, ...).

    The arguments are extended along a curve through p with velocity x as
    horizontal projections of constant vectors; the result does not depend
    on that choice, which the tests exploit.
    """
    F = _geodesic_jet(p, x)
    fields = [horizontal(F, Jet.constant(np.broadcast_to(v, F.shape), 1)) for v in vecs]
    out = covariant_nk(F, tensor(F, *fields), 0)
    p0 = F.value
    vals = [f.value for f in fields]
    for n, f in enumerate(fields):
        d = covariant_nk(F, f, 0).value
        args = vals[:n] + [d] + vals[n + 1:]
        out = out - tensor(p0, *args)
    return out.value


def nablaG_at(p, x, y, z):
    """(nabla_x G)(y, z) by differentiating G along a curve."""
    return nabla_tensor(G_at, p, x, y, z)


def nablaG_formula(p, x, y, z):
    """J (y ∧ z) x - g(J y, z) x."""
    return J_at(p, wedge_at(p, y, z, x)) - _bc(g_at(p, J_at(p, y), z)) * x


def _half_sum(p, x):
    return 0.5 * (J_at(p, x) + 1j * x)


def nablaP_residual(p, x, y):
    """|(nabla_x P) y - P G((J + J0)/2 x, y)|."""
    lhs = nabla_tensor(P_at, p, x, y)
    rhs = P_at(p, G_at(p, _half_sum(p, x), y))
    return np.abs(lhs - rhs).max(axis=-1)


def nablaJ0_residual(p, x, y):
    """|(nabla_x J0) y - (J + J0)/2 G((J - J0)/2 x, y)|."""
    lhs = nabla_tensor(J0_at, p, x, y)
    rhs = _half_sum(p, G_at(p, 0.5 * (J_at(p, x) - 1j * x), y))
    return np.abs(lhs - rhs).max(axis=-1)


# holonomy ----------------------------------------------------------------------


def _transport_rhs(c, dc, z):
    theta = vertical_rate(c, dc)
    x = horizontal(c, dc)
    return (
        theta * 1j * z
        - D_at(c, x, z)
        - rdot(z, dc) * c
        - rdot(z, 1j * dc) * (1j * c)
    )


def _transport_leg(point, velocity, z, t0, t1, steps):
    h = (t1 - t0) / steps
    t = t0
    for _ in range(steps):
        k1 = _transport_rhs(point(t), velocity(t), z)
        m = t + h / 2
        k2 = _transport_rhs(point(m), velocity(m), z + h / 2 * k1)
        k3 = _transport_rhs(point(m), velocity(m), z + h / 2 * k2)
        k4 = _transport_rhs(point(t + h), velocity(t + h), z + h * k3)
        z = z + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
    return z


def _loop_change(p, x, y, z, eps, steps):
    def c(a, b):
        q = p + a * x + b * y
        return q / np.linalg.norm(q)

    def dc(a, b, da, db):
        q = p + a * x + b * y
        n = np.linalg.norm(q)
        w = da * x + db * y
        return w / n - q * np.real(np.vdot(q, w)) / n**3

    legs = [
        (lambda t: c(t, 0), lambda t: dc(t, 0, 1, 0), 0, eps),
        (lambda t: c(eps, t), lambda t: dc(eps, t, 0, 1), 0, eps),
        (lambda t: c(t, eps), lambda t: dc(t, eps, 1, 0), eps, 0),
        (lambda t: c(0, t), lambda t: dc(0, t, 0, 1), eps, 0),
    ]
    w = z.astype(complex)
    for point, vel, t0, t1 in legs:
        w = _transport_leg(point, vel, w, t0, t1, steps)
    return w - z


def holonomy_curvature(p, x, y, z, eps: float = 4e-3, steps: int = 8) -> np.ndarray:
    """Curvature R(x, y) z of nabla from parallel transport around small squares.

    The square in S^7 with sides eps along x then y changes z by
    -eps^2 R(x, y) z + O(eps^3); three side lengths are Richardson-combined to
    cancel the eps and eps^2 error terms.
    """
    p, x, y, z = (np.asarray(t, dtype=complex) for t in (p, x, y, z))
    est = [-_loop_change(p, x, y, z, e, steps) / e**2 for e in (eps, eps / 2, eps / 4)]
    # remove O(e) then O(e^2)
    r1 = [2 * est[1] - est[0], 2 * est[2] - est[1]]
    return (4 * r1[1] - r1[0]) / 3


# typed API ------------------------------------------------------------------------


@dataclass(frozen=True)
class AmbientPoint:
    coords: np.ndarray
    unit: bool = True

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=complex)
        object.__setattr__(self, "coords", c)
        if c.shape != (4,):
            raise ValueError("an ambient point has 4 complex coordinates")
        if self.unit and abs(np.linalg.norm(c) - 1) > 1e-12:
            raise ValueError("ambient point is not a unit vector")


@dataclass(frozen=True)
class TangentVec:
    base: AmbientPoint
    vec: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vec, dtype=complex)
        object.__setattr__(self, "vec", v)
        p = self.base.coords
        if abs(rdot(v, p)) > 1e-11 or abs(rdot(v, 1j * p)) > 1e-11:
            raise ValueError("tangent vector is not horizontal at its base point")

    @classmethod
    def lift(cls, base: AmbientPoint, vec) -> "TangentVec":
        """Horizontal part of an arbitrary C^4 vector at base."""
        return cls(base, horizontal(base.coords, np.asarray(vec, dtype=complex)))

    def _with(self, vec) -> "TangentVec":
        return TangentVec(self.base, vec)


def _common(*vs: TangentVec) -> np.ndarray:
    p = vs[0].base.coords
    for v in vs[1:]:
        if not np.array_equal(v.base.coords, p):
            raise ValueError("tangent vectors live at different base points")
    return p


def fs_metric(x: TangentVec, y: TangentVec) -> float:
    return float(g0_at(_common(x, y), x.vec, y.vec))


def nk_metric(x: TangentVec, y: TangentVec) -> float:
    return float(g_at(_common(x, y), x.vec, y.vec))


def apply_P(x: TangentVec) -> TangentVec:
    return x._with(P_at(x.base.coords, x.vec))


def apply_J(x: TangentVec) -> TangentVec:
    return x._with(J_at(x.base.coords, x.vec))


def apply_J0(x: TangentVec) -> TangentVec:
    return x._with(1j * x.vec)


def tensor_G(x: TangentVec, y: TangentVec) -> TangentVec:
    return x._with(G_at(_common(x, y), x.vec, y.vec))


def connection_difference_D(x: TangentVec, y: TangentVec) -> TangentVec:
    return x._with(D_at(_common(x, y), x.vec, y.vec))


def riemann_nk(x: TangentVec, y: TangentVec, z: TangentVec) -> TangentVec:
    return x._with(riemann_at(_common(x, y, z), x.vec, y.vec, z.vec))


# random samples -----------------------------------------------------------------------


def random_point(rng: np.random.Generator, size=None) -> np.ndarray:
    shape = (() if size is None else (size,)) + (4,)
    p = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    return p / np.linalg.norm(p, axis=-1, keepdims=True)


def random_horizontal(rng: np.random.Generator, p) -> np.ndarray:
    p = np.asarray(p)
    x = rng.normal(size=p.shape) + 1j * rng.normal(size=p.shape)
    return horizontal(p, x)


def random_totally_real_pair(rng: np.random.Generator, p):
    """g-orthonormal U, V at p with g(JU, V) = 0."""
    u = random_horizontal(rng, p)
    u = u / _bc(np.sqrt(g_at(p, u, u)))
    v = random_horizontal(rng, p)
    ju = J_at(p, u)
    v = v - _bc(g_at(p, v, u)) * u - _bc(g_at(p, v, ju)) * ju
    v = v / _bc(np.sqrt(g_at(p, v, v)))
    return u, v
