"""Induced geometry of surfaces in nearly Kähler CP^3.

An :class:`Immersion` is a map (u, v) -> S^7 evaluable over jets; its
projection to CP^3 is the surface.  :func:`analyze` computes, batched over
parameter points, everything the checks need: the adapted frame e1..e6, the
J0 coefficients b_i, c_i, the connection and second fundamental form
coefficients, nabla h, both mean curvature vectors and both Gaussian
curvatures (intrinsic and through the Gauss equation).

Tensorial quantities are computed in the coordinate basis and only then
contracted with the frame, so only d1, d2 and the frame derivatives depend
on the smooth gauge choice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import least_squares

from . import jets
from .algebra import _bc, horizontal, rdot
from .config import TOL
from .jets import Jet
from .nk_structure import (
    AmbientPoint,
    G_at,
    J_at,
    P_at,
    TangentVec,
    covariant_fs,
    covariant_nk,
    g_at,
    riemann_at,
)

COEFF_NAMES = ("b1", "b2", "b4", "b5", "c3", "c4", "c5")
SFF_NAMES = ("k1", "k2", "k3", "k4", "m1", "m2", "m3", "m4", "k", "m")


class GeometryError(ValueError):
    """Raised for degenerate or non-totally-real input."""


@dataclass(frozen=True)
class Immersion:
    """Lift (u, v) -> S^7 of a surface, with jets available to any order.

    Either ``expr`` (a function of two coordinate jets built from jet
    arithmetic) or ``jet_fn`` (u, v, order) -> Jet must be given.
    """

    label: str
    domain: tuple[tuple[float, float], tuple[float, float]]
    expr: Callable | None = None
    jet_fn: Callable | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def jet(self, u, v, order: int = 3) -> Jet:
        if self.jet_fn is not None:
            return self.jet_fn(np.asarray(u, float), np.asarray(v, float), order)
        return jets.jet_eval(self.expr, u, v, order)

    def __call__(self, u, v) -> np.ndarray:
        return self.jet(u, v, order=0).value

    def grid(self, n: int = 12, m: int | None = None, margin: float = 0.05):
        """Uniform n x m interior sample grid (flattened u, v arrays)."""
        m = n if m is None else m
        (u0, u1), (v0, v1) = self.domain
        du, dv = (u1 - u0) * margin, (v1 - v0) * margin
        uu, vv = np.meshgrid(np.linspace(u0 + du, u1 - du, n), np.linspace(v0 + dv, v1 - dv, m), indexing="ij")
        return uu.ravel(), vv.ravel()


# small linear algebra over jets ------------------------------------------------


def _inv2(a, b, d):
    """Inverse of the symmetric matrix [[a, b], [b, d]]."""
    det = a * d - b * b
    return d / det, -b / det, a / det, det


def _dot2(c0, c1, x0, x1):
    return _bc(c0) * x0 + _bc(c1) * x1


@dataclass
class SurfaceData:
    """Geometry of an immersion at a batch of parameter points."""

    u: np.ndarray
    v: np.ndarray
    F: Jet
    X: tuple  # coordinate tangent lifts (order 2)
    metric: tuple  # g_00, g_01, g_11 (order 2)
    metric0: tuple  # Fubini-Study metric, same layout
    christoffel: dict  # (k, i, j) -> order-1 jet
    h: dict  # (i, j) -> normal vector jet (order 1)
    nabla_h: dict  # (i, j, k) -> normal vector value
    h0: dict  # Kähler second fundamental form values
    U: Jet
    V: Jet
    frame_coords: tuple  # (aU^0, aU^1, aV^0, aV^1) as jets
    gauge: dict
    coeffs: dict = field(default_factory=dict)

    @property
    def p(self) -> np.ndarray:
        return self.F.value

    def frame(self) -> list[np.ndarray]:
        """Values of e1..e6 (index 0..5)."""
        p, U, V = self.p, self.U.value, self.V.value
        e5 = G_at(p, U, V)
        return [U, V, J_at(p, U), J_at(p, V), e5, J_at(p, e5)]

    def to_frame(self, tensor: dict, rank: int):
        """Contract a coordinate tensor with (U, V); returns dict keyed by 'U'/'V' words."""
        a = {"U": (self.frame_coords[0].value, self.frame_coords[1].value),
             "V": (self.frame_coords[2].value, self.frame_coords[3].value)}
        out = {}
        import itertools

        for word in itertools.product("UV", repeat=rank):
            acc = 0
            for idx in itertools.product((0, 1), repeat=rank):
                w = np.ones_like(self.u)
                for letter, i in zip(word, idx):
                    w = w * a[letter][i]
                val = tensor[idx]
                val = val.value if isinstance(val, Jet) else val
                acc = acc + _bc(w) * val
            out["".join(word)] = acc
        return out


def _coefficients(p, U, V):
    """J0 coefficients of a frame; works on arrays or jets."""
    ju, jv = J_at(p, U), J_at(p, V)
    e5 = G_at(p, U, V)
    e6 = J_at(p, e5)
    j0u, j0v = 1j * U, 1j * V
    return {
        "b1": g_at(p, j0u, V),
        "b2": g_at(p, j0u, ju),
        "b3": g_at(p, j0u, jv),
        "b4": g_at(p, j0u, e5),
        "b5": g_at(p, j0u, e6),
        "c3": g_at(p, j0v, jv),
        "c4": g_at(p, j0v, e5),
        "c5": g_at(p, j0v, e6),
    }


def _rotate(E1, E2, phi):
    c, s = jets.cos(phi), jets.sin(phi)
    return _bc(c) * E1 + _bc(s) * E2, -_bc(s) * E1 + _bc(c) * E2


def _select(cond, a, b):
    return jets.where(np.asarray(cond)[..., None], a, b)


def analyze(imm: Immersion, u, v, tol=TOL, require_totally_real: bool = True) -> SurfaceData:
    u = np.atleast_1d(np.asarray(u, float))
    v = np.atleast_1d(np.asarray(v, float))
    F = imm.jet(u, v, order=3)
    nrm = np.abs(np.linalg.norm(F.value, axis=-1) - 1)
    if nrm.max() > 1e-11:
        raise GeometryError(f"{imm.label}: lift leaves the unit sphere (|F|-1 = {nrm.max():.2e})")
    F2 = F.truncate(2)
    X = tuple(horizontal(F2, F.d(i)) for i in (0, 1))
    g = {(i, j): g_at(F2, X[i], X[j]) for i in (0, 1) for j in (0, 1)}
    g0 = {(i, j): rdot(X[i], X[j]) for i in (0, 1) for j in (0, 1)}
    gi00, gi01, gi11, det = _inv2(g[0, 0], g[0, 1], g[1, 1])
    det_v = det.value
    if (det_v <= 1e-16).any():
        raise GeometryError(f"{imm.label}: rank-deficient differential at some sample points")
    ginv = {(0, 0): gi00, (0, 1): gi01, (1, 0): gi01, (1, 1): gi11}

    # second fundamental form in coordinates
    nabla = {(i, j): covariant_nk(F, X[j], i) for i in (0, 1) for j in (0, 1)}
    proj = {}
    for (i, j), w in nabla.items():
        proj[i, j] = [g_at(F.truncate(1), w, X[l].truncate(1)) for l in (0, 1)]
    chris = {}
    for i in (0, 1):
        for j in (0, 1):
            for k in (0, 1):
                chris[k, i, j] = ginv[k, 0].truncate(1) * proj[i, j][0] + ginv[k, 1].truncate(1) * proj[i, j][1]
    X1 = tuple(x.truncate(1) for x in X)
    h = {}
    for i in (0, 1):
        for j in (0, 1):
            h[i, j] = nabla[i, j] - _dot2(chris[0, i, j], chris[1, i, j], X1[0], X1[1])

    def normal_part(w):
        order = w.order if isinstance(w, Jet) else 0
        Xs = [x.truncate(order) if isinstance(w, Jet) else x.value for x in X]
        gi = {k: (val.truncate(order) if isinstance(w, Jet) else val.value) for k, val in ginv.items()}
        pp = F.truncate(order) if isinstance(w, Jet) else F.value
        c = [g_at(pp, w, Xs[l]) for l in (0, 1)]
        t0 = gi[0, 0] * c[0] + gi[0, 1] * c[1]
        t1 = gi[1, 0] * c[0] + gi[1, 1] * c[1]
        return w - _dot2(t0, t1, Xs[0], Xs[1])

    nabla_h = {}
    for i in (0, 1):
        for j in (0, 1):
            for k in (0, 1):
                d = normal_part(covariant_nk(F, h[j, k], i)).value
                for l in (0, 1):
                    d = d - _bc(chris[l, i, j].value) * h[l, k].value - _bc(chris[l, i, k].value) * h[j, l].value
                nabla_h[i, j, k] = d

    # Kähler second fundamental form
    g0i00, g0i01, g0i11, _ = _inv2(g0[0, 0].value, g0[0, 1].value, g0[1, 1].value)
    h0 = {}
    for i in (0, 1):
        for j in (0, 1):
            w = covariant_fs(F, X[j], i).value
            c0, c1 = rdot(w, X[0].value), rdot(w, X[1].value)
            t0 = g0i00 * c0 + g0i01 * c1
            t1 = g0i01 * c0 + g0i11 * c1
            h0[i, j] = w - _bc(t0) * X[0].value - _bc(t1) * X[1].value

    U, V, gauge = _adapted_frame(F2, X, g, tol)
    aU = [ginv[k, 0] * g_at(F2, U, X[0]) + ginv[k, 1] * g_at(F2, U, X[1]) for k in (0, 1)]
    aV = [ginv[k, 0] * g_at(F2, V, X[0]) + ginv[k, 1] * g_at(F2, V, X[1]) for k in (0, 1)]

    data = SurfaceData(
        u=u, v=v, F=F, X=X, metric=(g[0, 0], g[0, 1], g[1, 1]),
        metric0=(g0[0, 0], g0[0, 1], g0[1, 1]), christoffel=chris, h=h,
        nabla_h=nabla_h, h0=h0, U=U, V=V, frame_coords=(aU[0], aU[1], aV[0], aV[1]),
        gauge=gauge,
    )
    tr = np.abs(g_at(F.value, J_at(F.value, U.value), V.value))
    if require_totally_real and tr.max() > tol.classify:
        raise GeometryError(f"{imm.label}: not totally real (max |g(JU,V)| = {tr.max():.2e})")
    _fill_coefficients(data)
    return data


def _adapted_frame(F2, X, g, tol):
    """Smooth g-orthonormal frame diagonalizing P on the tangent plane, then canonical signs."""
    E1 = X[0] / _bc(jets.sqrt(g[0, 0]))
    E2 = X[1] - _bc(g_at(F2, X[1], E1)) * E1
    E2 = E2 / _bc(jets.sqrt(g_at(F2, E2, E2)))
    t11 = g_at(F2, P_at(F2, E1), E1)
    t12 = g_at(F2, P_at(F2, E1), E2)
    t22 = g_at(F2, P_at(F2, E2), E2)
    y, x = 2 * t12, t11 - t22
    spread = np.hypot(y.value, x.value)
    degenerate = spread < 1e-6
    # secondary gauge: kill b5 by a rotation when P is scalar on the tangent plane
    co = _coefficients(F2, E1, E2)
    sy, sx = -co["b5"], co["c5"]
    fully_degenerate = degenerate & (np.hypot(sy.value, sx.value) < 1e-6)
    ones = np.ones_like(spread)
    y = jets.where(degenerate, jets.where(fully_degenerate, 0.0 * ones, sy), y)
    x = jets.where(degenerate, jets.where(fully_degenerate, ones, sx), x)
    phi = jets.arctan2(y, x)
    phi = jets.where(degenerate, phi, 0.5 * phi)
    U, V = _rotate(E1, E2, phi)

    # discrete gauge: choose among swaps and sign flips per point
    p = F2.value
    Uv, Vv = U.value, V.value
    best = None
    for swap in (False, True):
        a, b = (Vv, Uv) if swap else (Uv, Vv)
        c = _coefficients(p, a, b)
        # b1 >= 0 fixes the relative sign of V
        sv = np.where(c["b1"] < -1e-12, -1.0, 1.0)
        bnorm = c["b4"] ** 2 + c["b5"] ** 2
        cnorm = c["c4"] ** 2 + c["c5"] ** 2
        score = np.where(bnorm + 1e-14 >= cnorm, 0, 2).astype(float)
        type2_like = (bnorm + cnorm) < tol.classify**2
        # Type 2 orientation: sin(alpha) = b2 >= 0
        score = score + np.where(type2_like & (c["b2"] < -1e-12), 1, 0)
        # for b1 == 0 the sign of V is free; prefer b5 >= 0 there
        cand = dict(swap=np.full(p.shape[:-1], swap), sv=sv, score=score, c=c)
        if best is None:
            best = cand
        else:
            take = cand["score"] < best["score"]
            for key in ("swap", "sv", "score"):
                best[key] = np.where(take, cand[key], best[key])
    swap = best["swap"]
    A = _select(swap, V, U)
    B = _select(swap, U, V)
    B = _bc(best["sv"]) * B
    # joint sign flip of U and V: b4, b5, c4, c5 change sign; make b5 > 0 (else b4 > 0)
    c = _coefficients(p, A.value, B.value)
    key = np.where(np.abs(c["b5"]) > 1e-9, c["b5"], c["b4"])
    s = np.where(key < -1e-12, -1.0, 1.0)
    # with b1 == 0 an independent flip of V is allowed: make b2-side orientation canonical
    A, B = _bc(s) * A, _bc(s) * B
    c = _coefficients(p, A.value, B.value)
    flipv = (np.abs(c["b1"]) <= 1e-9) & (np.abs(c["b4"]) + np.abs(c["b5"]) <= 1e-9) & (c["c5"] < -1e-9)
    B = _bc(np.where(flipv, -1.0, 1.0)) * B
    gauge = {"swap": swap, "degenerate": degenerate, "fully_degenerate": fully_degenerate}
    return A, B, gauge


def _fill_coefficients(data: SurfaceData):
    p = data.F.truncate(2)
    U, V = data.U, data.V
    co = _coefficients(p, U, V)
    data.coeffs.update({k: val for k, val in co.items()})
    aU = data.frame_coords[:2]
    aV = data.frame_coords[2:]
    F1 = data.F.truncate(1)

    def nabla_dir(a, Z):
        return _bc(a[0].truncate(1)) * covariant_nk(data.F, Z, 0) + _bc(a[1].truncate(1)) * covariant_nk(data.F, Z, 1)

    data.coeffs["d1"] = g_at(F1, nabla_dir(aU, U), V.truncate(1))
    data.coeffs["d2"] = g_at(F1, nabla_dir(aV, V), U.truncate(1))

    def hh(a, b):
        out = 0
        for i in (0, 1):
            for j in (0, 1):
                out = out + _bc(a[i].truncate(1) * b[j].truncate(1)) * data.h[i, j]
        return out

    U1, V1 = U.truncate(1), V.truncate(1)
    e3, e4 = J_at(F1, U1), J_at(F1, V1)
    e5 = G_at(F1, U1, V1)
    e6 = J_at(F1, e5)
    huu, hvv, huv = hh(aU, aU), hh(aV, aV), hh(aU, aV)
    basis = (e3, e4, e5, e6)
    for name, vec in (("k", huu), ("m", hvv)):
        for n, e in enumerate(basis, start=1):
            data.coeffs[f"{name}{n}"] = g_at(F1, vec, e)
    data.coeffs["k"] = g_at(F1, huv, e5)
    data.coeffs["m"] = g_at(F1, huv, e6)
    data.coeffs["huv3"] = g_at(F1, huv, e3)
    data.coeffs["huv4"] = g_at(F1, huv, e4)


# public operations ---------------------------------------------------------------


def tangent_pair(imm: Immersion, u: float, v: float) -> tuple[TangentVec, TangentVec]:
    """Gram-Schmidt g-orthonormal horizontal tangent vectors at one point."""
    F = imm.jet(np.array([u]), np.array([v]), order=1)
    p = F.value[0]
    xs = [horizontal(p, F.d(i).value[0]) for i in (0, 1)]
    gram = np.array([[g_at(p, a, b) for b in xs] for a in xs])
    if np.linalg.svd(gram, compute_uv=False).min() < 1e-16:
        raise GeometryError("rank-deficient differential")
    e1 = xs[0] / np.sqrt(gram[0, 0])
    e2 = xs[1] - g_at(p, xs[1], e1) * e1
    e2 = e2 / np.sqrt(g_at(p, e2, e2))
    base = AmbientPoint(p)
    return TangentVec(base, e1), TangentVec(base, e2)


def totally_real_defect(imm: Immersion, u, v) -> np.ndarray:
    """|g(JU, V)| for g-orthonormal tangent U, V (batched)."""
    u = np.atleast_1d(np.asarray(u, float))
    v = np.atleast_1d(np.asarray(v, float))
    F = imm.jet(u, v, order=1)
    p = F.value
    x0, x1 = (horizontal(p, F.d(i).value) for i in (0, 1))
    g00, g01, g11 = g_at(p, x0, x0), g_at(p, x0, x1), g_at(p, x1, x1)
    det = g00 * g11 - g01**2
    if (det <= 1e-16).any():
        raise GeometryError("rank-deficient differential")
    return np.abs(g_at(p, J_at(p, x0), x1)) / np.sqrt(det)


@dataclass(frozen=True)
class AdaptedFrame:
    u: float
    v: float
    U: TangentVec
    V: TangentVec
    e: tuple
    coeffs: dict
    conn: dict
    sff: dict


def _frame_at(data: SurfaceData, n: int) -> AdaptedFrame:
    base = AmbientPoint(data.p[n])
    e = tuple(TangentVec(base, x[n]) for x in data.frame())
    val = {k: float(np.asarray(jets.value(x))[n]) for k, x in data.coeffs.items()}
    return AdaptedFrame(
        u=float(data.u[n]), v=float(data.v[n]), U=e[0], V=e[1], e=e,
        coeffs={k: val[k] for k in ("b1", "b2", "b3", "b4", "b5", "c3", "c4", "c5")},
        conn={"d1": val["d1"], "d2": val["d2"]},
        sff={k: val[k] for k in SFF_NAMES},
    )


def build_adapted_frame(imm: Immersion, u: float, v: float, tol=TOL) -> AdaptedFrame:
    return _frame_at(analyze(imm, [u], [v], tol), 0)


def second_fundamental_form(imm: Immersion, u: float, v: float, tol=TOL) -> AdaptedFrame:
    """Adapted frame with the connection and second fundamental form slots filled."""
    return build_adapted_frame(imm, u, v, tol)


# type classification ---------------------------------------------------------------


@dataclass(frozen=True)
class TypeReport:
    type_tag: str
    params: dict
    residual: float
    residuals: dict


TYPE1 = np.array([0.5, 0.5, 1 / np.sqrt(2), 0.0, 0.5, 0.0, -1 / np.sqrt(2)])


def type0_model(lam, alpha, theta) -> np.ndarray:
    s, c = np.sin(alpha), np.cos(alpha)
    r = np.sqrt(1 + lam**2)
    return np.array([
        lam / (1 + lam**2) * (1 - s),
        (lam**2 + s) / (1 + lam**2),
        c * np.sin(theta) / r,
        c * np.cos(theta) / r,
        (1 + lam**2 * s) / (1 + lam**2),
        lam * c * np.cos(theta) / r,
        -lam * c * np.sin(theta) / r,
    ])


def type2_model(alpha) -> np.ndarray:
    return np.array([np.cos(alpha), np.sin(alpha), 0, 0, -np.sin(alpha), 0, 0])


def _fit_type0(c):
    b1, b2, b4, b5, c3, c4, c5 = c
    sa = np.clip(b2 + c3 - 1, -1, 1)
    bn, cn = b4**2 + b5**2, c4**2 + c5**2
    lam = np.sqrt(cn / bn) if bn > 1e-300 else 0.0
    lam = -lam if b1 < 0 else lam  # b1 carries the sign of lambda
    alpha0 = np.arcsin(sa)
    theta0 = np.arctan2(b4, b5)
    x0 = np.array([lam, alpha0, theta0])
    half = np.pi / 2
    x0[1] = np.clip(x0[1], -half + 1e-9, half - 1e-9)
    res = least_squares(
        lambda x: type0_model(*x) - c, x0, bounds=([-np.inf, -half, -np.inf], [np.inf, half, np.inf]),
        xtol=1e-15, ftol=1e-15, gtol=1e-15,
    )
    lam, alpha, theta = res.x
    return {"lambda": lam, "alpha": alpha, "theta": theta}, float(np.abs(type0_model(*res.x) - c).max())


def _fit_type2(c):
    alpha = np.arctan2(0.5 * (c[1] - c[4]), c[0])
    return {"alpha": alpha}, float(np.abs(type2_model(alpha) - c).max())


def _gauge_variants(p, U, V):
    for swap in (False, True):
        a, b = (V, U) if swap else (U, V)
        for sa in (1, -1):
            for sb in (1, -1):
                co = _coefficients(p, sa * a, sb * b)
                yield np.array([co[k] for k in COEFF_NAMES]), co["b3"]


def classify_coefficients(p, U, V, tol: float = TOL.classify) -> TypeReport:
    """Fit the frame's J0 coefficients against the three normal forms.

    Every frame related to (U, V) by a swap or sign flips is tried; ties go
    to Type 2, then Type 1, then Type 0.
    """
    best = {"Type0": (None, np.inf), "Type1": (None, np.inf), "Type2": (None, np.inf)}
    for c, _ in _gauge_variants(p, U, V):
        if c[0] < -1e-12:
            continue
        r1 = float(np.abs(c - TYPE1).max())
        if r1 < best["Type1"][1]:
            best["Type1"] = ({}, r1)
        prm2, r2 = _fit_type2(c)
        if r2 < best["Type2"][1] or (r2 <= best["Type2"][1] + 1e-15 and prm2["alpha"] >= 0):
            best["Type2"] = (prm2, r2)
        if c[2] ** 2 + c[3] ** 2 > 1e-18:
            prm0, r0 = _fit_type0(c)
            if r0 < best["Type0"][1] - 1e-15 or (
                r0 <= best["Type0"][1] + 1e-15 and abs(prm0["lambda"]) < abs(best["Type0"][0]["lambda"])
            ):
                best["Type0"] = (prm0, r0)
    residuals = {k: val[1] for k, val in best.items()}
    for tag in ("Type2", "Type1", "Type0"):
        if residuals[tag] <= tol:
            prm = best[tag][0]
            if tag == "Type0":
                prm = dict(prm)
                prm["theta"] = float((prm["theta"] + np.pi / 2) % np.pi - np.pi / 2)
            return TypeReport(tag, {k: float(x) for k, x in prm.items()}, residuals[tag], residuals)
    return TypeReport("Unclassified", {}, min(residuals.values()), residuals)


def classify_type(frame: AdaptedFrame, tol: float = TOL.classify) -> TypeReport:
    return classify_coefficients(frame.U.base.coords, frame.U.vec, frame.V.vec, tol)


# curvature quantities ------------------------------------------------------------------


def mean_curvatures(data: SurfaceData):
    """(H, H0): lifted mean curvature vectors for g and for the Kähler metric g0."""
    g00, g01, g11 = (x.value for x in data.metric)
    gi00, gi01, gi11, _ = _inv2(g00, g01, g11)
    H = 0.5 * (_bc(gi00) * data.h[0, 0].value + 2 * _bc(gi01) * data.h[0, 1].value + _bc(gi11) * data.h[1, 1].value)
    a00, a01, a11 = (x.value for x in data.metric0)
    hi00, hi01, hi11, _ = _inv2(a00, a01, a11)
    H0 = 0.5 * (_bc(hi00) * data.h0[0, 0] + 2 * _bc(hi01) * data.h0[0, 1] + _bc(hi11) * data.h0[1, 1])
    return H, H0


def gauss_curvature_intrinsic(data: SurfaceData) -> np.ndarray:
    """Gaussian curvature from the induced metric alone (Christoffels of g_ij)."""
    g = {(0, 0): data.metric[0], (0, 1): data.metric[1], (1, 0): data.metric[1], (1, 1): data.metric[2]}
    gi00, gi01, gi11, det = _inv2(g[0, 0], g[0, 1], g[1, 1])
    gi = {(0, 0): gi00, (0, 1): gi01, (1, 0): gi01, (1, 1): gi11}
    dg = {(i, j, k): g[i, j].d(k) for i in (0, 1) for j in (0, 1) for k in (0, 1)}
    gam = {}
    for k in (0, 1):
        for i in (0, 1):
            for j in (0, 1):
                acc = 0
                for l in (0, 1):
                    acc = acc + gi[k, l].truncate(1) * (dg[j, l, i] + dg[i, l, j] - dg[i, j, l])
                gam[k, i, j] = 0.5 * acc
    # R(d0, d1) d1 = (d0 G^m_11 - d1 G^m_01 + G^n_11 G^m_0n - G^n_01 G^m_1n) d_m
    comp = []
    for m in (0, 1):
        val = gam[m, 1, 1].d(0).value - gam[m, 0, 1].d(1).value
        for n in (0, 1):
            val = val + gam[n, 1, 1].value * gam[m, 0, n].value - gam[n, 0, 1].value * gam[m, 1, n].value
        comp.append(val)
    num = g[0, 0].value * comp[0] + g[0, 1].value * comp[1]
    return num / det.value


def gauss_curvature_extrinsic(data: SurfaceData) -> np.ndarray:
    """Gauss equation: ambient sectional curvature plus the h-terms."""
    p = data.p
    x0, x1 = data.X[0].value, data.X[1].value
    r = g_at(p, riemann_at(p, x0, x1, x1), x0)
    h = {k: x.value for k, x in data.h.items()}
    num = r + g_at(p, h[0, 0], h[1, 1]) - g_at(p, h[0, 1], h[0, 1])
    g00, g01, g11 = (x.value for x in data.metric)
    return num / (g00 * g11 - g01**2)


def nabla_h(data: SurfaceData) -> dict:
    """(nabla h)(A, B, C) in the adapted frame, keyed by words like 'UVV'."""
    return data.to_frame(data.nabla_h, 3)


def codazzi_asymmetry(data: SurfaceData) -> np.ndarray:
    p = data.p
    out = np.zeros(len(data.u))
    for i in (0, 1):
        for j in (0, 1):
            for k in (0, 1):
                d = data.nabla_h[i, j, k] - data.nabla_h[j, i, k]
                out = np.maximum(out, np.sqrt(np.abs(g_at(p, d, d))))
    g00 = data.metric[0].value
    g11 = data.metric[2].value
    return out / np.minimum(g00, g11) ** 1.5


def _frame_tensor_norm(data: SurfaceData, tensor: dict, rank: int) -> np.ndarray:
    p = data.p
    fr = data.to_frame(tensor, rank)
    return np.sqrt(sum(np.abs(g_at(p, w, w)) for w in fr.values()))


def kahler_angle_cos(data: SurfaceData) -> np.ndarray:
    """|g0(J0 U0, V0)| for a g0-orthonormal tangent basis (0: J0-totally real, 1: complex)."""
    x0, x1 = data.X[0].value, data.X[1].value
    a00, a01, a11 = (x.value for x in data.metric0)
    return np.abs(rdot(1j * x0, x1)) / np.sqrt(a00 * a11 - a01**2)


@dataclass(frozen=True)
class Predicate:
    value: bool
    residual: float
    tolerance: float


def predicate_report(imm: Immersion, n: int = 12, tol=TOL, u=None, v=None) -> dict:
    """Grid-wide predicate flags with their maximal residuals."""
    if u is None:
        u, v = imm.grid(n)
    data = analyze(imm, u, v, tol, require_totally_real=False)
    p = data.p
    t = tol.classify
    H, H0 = mean_curvatures(data)
    hn = _frame_tensor_norm(data, {k: x.value for k, x in data.h.items()}, 2)
    hfr = data.to_frame({k: x.value for k, x in data.h.items()}, 2)
    umb = np.maximum.reduce([
        np.sqrt(np.abs(g_at(p, hfr["UU"] - H, hfr["UU"] - H))),
        np.sqrt(np.abs(g_at(p, hfr["VV"] - H, hfr["VV"] - H))),
        np.sqrt(np.abs(g_at(p, hfr["UV"], hfr["UV"]))),
    ])
    a00, a01, a11 = (x.value for x in data.metric0)
    h0n = np.sqrt(sum(np.abs(rdot(w, w)) for w in data.h0.values())) / np.sqrt(np.minimum(a00, a11))
    cosk = kahler_angle_cos(data)
    kint = gauss_curvature_intrinsic(data)
    tr = np.abs(g_at(p, J_at(p, data.U.value), data.V.value))
    entries = {
        "totally_real": tr,
        "kahler_totally_real": cosk,
        "kahler_almost_complex": np.abs(1 - cosk),
        "minimal": np.sqrt(np.abs(g_at(p, H, H))),
        "kahler_minimal": np.sqrt(np.abs(rdot(H0, H0))),
        "totally_umbilical": umb,
        "totally_geodesic": hn,
        "kahler_totally_geodesic": h0n,
        "codazzi": codazzi_asymmetry(data),
        "parallel": _frame_tensor_norm(data, data.nabla_h, 3),
        "flat": np.abs(kint),
    }
    report = {k: Predicate(bool(np.max(r) <= t), float(np.max(r)), t) for k, r in entries.items()}
    return report
