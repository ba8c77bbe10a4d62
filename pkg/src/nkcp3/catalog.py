"""Explicit totally real surfaces of nearly Kähler CP^3.

Every entry is an :class:`~nkcp3.surface.Immersion`: a lift to S^7
evaluable over jets.  Closed forms are written with jet arithmetic; the
orbit and Codazzi surfaces supply their Taylor coefficients directly.

The complex examples are written in their customary coordinates and moved
into the package conventions with :func:`~nkcp3.algebra.customary_to_package`,
so their mean curvature vectors at p0 agree with the usual closed forms.
That map reverses i and j, so e^{-js} in the customary coordinates becomes
e^{js} here.  The real lifts (Clifford torus, RP^2) are used as they stand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import jets, lie
from .algebra import jvec, customary_to_package
from .jets import Jet, monomials
from .legendre import (
    Curvature,
    LegendreCurveSpec,
    legendre_integrate,
    standard_s3_spec,
)
from .surface import Immersion, analyze, mean_curvatures

TWO_PI = 2 * math.pi
TORUS = ((0.0, TWO_PI), (0.0, TWO_PI))
FAMILIES = ("F1", "F2", "F3", "F4", "Sphere", "RP2", "CliffordTorus", "FlatMinimalCP2", "ParallelKappa", "Codazzi")


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class FamilyParams:
    family: str
    scalars: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        s = self.scalars
        if self.family == "F3" and s.get("mu", 0.0) == 0:
            raise ParameterError("F3 requires mu != 0")
        if self.family == "F4" and s.get("sigma", 0.0) == 0:
            raise ParameterError("F4 requires sigma != 0")
        if self.family == "F4" and "mu" in s:
            want = lie.family4_mu(s.get("nu", 0.0), s.get("rho", 0.0), s["sigma"])
            if abs(want - s["mu"]) > 1e-12:
                raise ParameterError(f"F4 requires the commutation constraint on mu (mu = {want:.12g})")
        if self.family == "ParallelKappa" and s.get("kappa", 0.0) == 0:
            raise ParameterError("ParallelKappa requires kappa != 0")

    def get(self, name: str, default: float = 0.0) -> float:
        return float(self.scalars.get(name, default))


def _vec(*comps):
    return jets.stack(list(comps), axis=-1)


# tori of the U(1) x U(1) orbits --------------------------------------------------------


def family1(mu: float = 0.0, nu: float = 0.0) -> Immersion:
    a = math.sqrt(nu * nu + 1)
    b = math.sqrt(1 + mu * mu + nu * nu)

    def f(t, s):
        ct, st, cs, ss = jets.cos(t), jets.sin(t), jets.cos(s), jets.sin(s)
        re = _vec(cs * ct - mu * nu * ss * st / (a * b), -ss * ct / b, -a * ss * st / b, -cs * st / a)
        im = _vec(-mu * ss * ct / b - nu * cs * st / a, 0.0 * ct, -nu * ss * ct / b, mu * ss * st / (a * b))
        return customary_to_package(re + 1j * im)

    return Immersion(f"F1(mu={mu:g}, nu={nu:g})", TORUS, expr=f, meta={"mu": mu, "nu": nu})


def family2(nu: float) -> Immersion:
    d = nu * nu + 1

    def f(t, s):
        e = jets.expi(-t)
        cs, ss = jets.cos(s), jets.sin(s)
        return customary_to_package(_vec((cs + nu * nu * e) / d, -ss / d, -1j * nu * ss / d, 1j * nu * (cs - e) / d))

    return Immersion(f"F2(nu={nu:g})", TORUS, expr=f, meta={"nu": nu})


def family3(mu: float, nu: float) -> Immersion:
    """Family 3 with f3 = sqrt(mu^2 + (1 + nu^2)^2).

    The s-dependent term is B(s) = cos s - i (mu / f3) sin s, which keeps the
    lift on S^7 and reduces to Family 2 as mu -> 0.
    """
    if mu == 0:
        raise ParameterError("F3 requires mu != 0")
    f3 = math.sqrt(mu * mu + (1 + nu * nu) ** 2)
    d = nu * nu + 1

    def f(t, s):
        e1 = jets.expi(-(mu * s / f3 + t))
        ss = jets.sin(s)
        B = jets.cos(s) - 1j * (mu / f3) * ss
        return customary_to_package(
            _vec((nu * nu * e1 + B) / d, -ss / f3, -1j * nu * ss / f3, -1j * nu * (e1 - B) / d)
        )

    return Immersion(f"F3(mu={mu:g}, nu={nu:g})", TORUS, expr=f, meta={"mu": mu, "nu": nu, "f3": f3})


def family4(nu: float, rho: float, sigma: float) -> Immersion:
    X, Y = lie.family4_generators(nu, rho, sigma)
    mu = lie.family4_mu(nu, rho, sigma)
    imm = lie.orbit_surface(X, Y, label=f"F4(nu={nu:g}, rho={rho:g}, sigma={sigma:g})")
    return Immersion(imm.label, imm.domain, jet_fn=imm.jet_fn, meta={"nu": nu, "rho": rho, "sigma": sigma, "mu": mu})


def clifford_torus() -> Immersion:
    """Already in package coordinates: it is F1(0, 0) pointwise."""

    def f(t, s):
        ct, st, cs, ss = jets.cos(t), jets.sin(t), jets.cos(s), jets.sin(s)
        return _vec(cs * ct, -ss * st, -ss * ct, -cs * st) + 0j

    return Immersion("CliffordTorus", TORUS, expr=f)


FLAT_V = (
    np.array([1, 1j, -1 / math.sqrt(2), 1j / math.sqrt(2)]) / 3,
    np.array([1, -1j, 1 / math.sqrt(2), 1j / math.sqrt(2)]) / 3,
    np.array([1, 0, 0, -1j * math.sqrt(2)]) / 3,
)


def flat_minimal_cp2() -> Immersion:
    v1, v2, v3 = FLAT_V

    def f(u, v):
        e1, e2, e3 = jets.expi(u), jets.expi(v), jets.expi(-(u + v))
        return customary_to_package(e1[..., None] * v1 + e2[..., None] * v2 + e3[..., None] * v3)

    return Immersion("FlatMinimalCP2", TORUS, expr=f)


# the sphere and RP^2 ------------------------------------------------------------------------


def sphere() -> Immersion:
    """The v-circle at u = pi/2 is a Hopf fiber, so u stays inside (0, pi/2)."""
    a, b = math.sqrt(2 / 3), math.sqrt(1 / 3)

    def f(u, v):
        e, su = jets.expi(v), jets.sin(u)
        return customary_to_package(_vec(jets.cos(u) + 0j, 1j * a * e * su, 0j * su, b * e * su))

    return Immersion("Sphere", ((0.0, math.pi / 2), (0.0, TWO_PI)), expr=f)


def rp2(c: float = 0.0) -> Immersion:
    """RP^2 in RP^3 through spherical coordinates on S^2."""

    def f(u, v):
        su = jets.sin(u)
        y3 = jets.cos(u)
        return _vec(su * jets.cos(v), su * jets.sin(v), math.cos(c) * y3, math.sin(c) * y3) + 0j

    return Immersion(f"RP2(c={c:g})", ((0.0, math.pi), (0.0, TWO_PI)), expr=f, meta={"c": c})


# parallel tori in RP^3 -----------------------------------------------------------------------


def f_kappa(kappa: float) -> float:
    return 1 + 0.5 * kappa * (math.sqrt(kappa * kappa + 4) + kappa)


def gamma_kappa(kappa: float):
    """Components of gamma_kappa as jet-friendly functions of t."""
    fk = f_kappa(kappa)
    r = math.sqrt(fk)

    def g(t):
        ct, st = jets.cos(t), jets.sin(t)
        cf, sf = jets.cos(fk * t), jets.sin(fk * t)
        return _vec(
            cf + fk * ct,
            kappa * r * (sf - fk * st) / (fk - 1),
            kappa * fk * (ct - cf) / (fk - 1),
            ((1 - fk + kappa**2) * fk**2 * st - (kappa**2 * fk + fk - 1) * sf) / ((fk - 1) * r),
        ) / (1 + fk)

    return g


def gamma_kappa_spec(kappa: float) -> LegendreCurveSpec:
    """S^7 Legendre data whose unit-speed solution is gamma_kappa(t / sqrt(f(kappa))) in package coordinates.

    The coordinate change reverses j, so the curvature sits on j with sign -kappa.
    """
    zero = Curvature.constant(0.0)
    return LegendreCurveSpec(
        "S7", (zero, Curvature.constant(-kappa), zero),
        np.array([1, 0, 0, 0], complex), np.array([0, 0, 0, -1], complex), label=f"gamma_kappa({kappa:g})",
    )


def gamma_kappa_unit(kappa: float, t) -> np.ndarray:
    """gamma_kappa at arc length t, in package coordinates."""
    r = math.sqrt(f_kappa(kappa))
    return customary_to_package(np.asarray(gamma_kappa(kappa)(np.asarray(t, float) / r), dtype=complex))


def exp_js(s, x, sign: int = 1):
    """e^{sign j s} x = cos(s) x + sign sin(s) j x."""
    return jets.cos(s)[..., None] * x + sign * jets.sin(s)[..., None] * jvec(x)


def parallel_kappa(kappa: float) -> Immersion:
    if kappa == 0:
        raise ParameterError("ParallelKappa requires kappa != 0")
    g = gamma_kappa(kappa)

    def f(t, s):
        return exp_js(s, customary_to_package(g(t) + 0j))

    return Immersion(f"ParallelKappa(kappa={kappa:g})", TORUS, expr=f, meta={"kappa": kappa, "f": f_kappa(kappa)})


# Codazzi surfaces F(u, v) = f(v) gamma(u) -----------------------------------------------------


def _curve_jet(derivs: np.ndarray, which: int, order: int) -> Jet:
    """Jet in (u, v) of a function of one variable from its derivative samples."""
    n, dim = derivs.shape[1], derivs.shape[2:]
    c = np.zeros((len(monomials(order)), n) + dim, dtype=derivs.dtype)
    for k, (a, b) in enumerate(monomials(order)):
        if (which == 0 and b == 0) or (which == 1 and a == 0):
            m = a if which == 0 else b
            c[k] = derivs[m] / math.factorial(m)
    return Jet(c, order)


def _as_quaternion_jets(f: Jet):
    """Real components (w, x, y, z) of f = f1 + f2 i + (f3 + f4 i) j from its C^2 form."""
    return f[..., 0].real, f[..., 0].imag, f[..., 1].real, f[..., 1].imag


def codazzi_surface(f_spec: LegendreCurveSpec, gamma_spec: LegendreCurveSpec, domain=((-1.0, 1.0), (-1.0, 1.0)), dt: float = 1e-3, label: str | None = None) -> Immersion:
    """(u, v) -> f(v) gamma(u) with quaternionic left multiplication on H^2."""
    if f_spec.space != "S3" or gamma_spec.space != "S7":
        raise ParameterError("the Codazzi builder takes an S3 curve f and an S7 curve gamma")
    if np.abs(f_spec.initial_point - [1, 0]).max() > 1e-12 or np.abs(f_spec.initial_velocity - [0, 1]).max() > 1e-12:
        raise ParameterError("f must start at f(0) = 1 with f'(0) = j")
    cache: dict = {}

    def samples(spec, t, order):
        key = (id(spec), tuple(np.round(t, 15)), order)
        if key not in cache:
            cache[key] = legendre_integrate(spec, t, dt=dt, order=order)
        return cache[key]

    def jet_fn(u, v, order):
        u, v = np.broadcast_arrays(u, v)
        uu, ui = np.unique(u, return_inverse=True)
        vv, vi = np.unique(v, return_inverse=True)
        gs = samples(gamma_spec, uu, order)
        fs = samples(f_spec, vv, order)
        gamma = _curve_jet(gs.derivs[:, ui.ravel()], 0, order)
        fj = _curve_jet(fs.derivs[:, vi.ravel()], 1, order)
        w, x, y, z = _as_quaternion_jets(fj)
        jg = jvec(gamma)
        return w[..., None] * gamma + x[..., None] * (1j * gamma) + y[..., None] * jg + z[..., None] * (1j * jg)

    name = label or "Codazzi"
    return Immersion(name, domain, jet_fn=jet_fn, meta={"f_spec": f_spec, "gamma_spec": gamma_spec})


def codazzi_quaternionic_check(imm: Immersion, u, v, sign: int = -1) -> float:
    """Max residual of the parallel quaternionic structure along a Codazzi surface.

    With K the integrated curvature of the S^3 curve f and e = e^{sign i K(v)}:
    j F = e F_v, j F_u = e F_uv, j F_v = -e F, j F_uv = -e F_u.  In the
    package conventions the relations hold with sign = -1.
    """
    f_spec = imm.meta["f_spec"]
    F = imm.jet(u, v, order=2)
    K = f_spec.kappa.integral(np.asarray(v, float))
    ph = np.exp(sign * 1j * K)[..., None]
    Fv, Fu, Fuv = F.d(1).value, F.d(0).value, F.d(0).d(1).value
    p = F.value
    res = [
        jvec(p) - ph * Fv,
        jvec(Fu) - ph * Fuv,
        jvec(Fv) + ph * p,
        jvec(Fuv) + ph * Fu,
    ]
    return float(max(np.abs(r).max() for r in res))


# dispatch -------------------------------------------------------------------------------------


def family_immersion(p: FamilyParams) -> Immersion:
    fam = p.family
    if fam == "F1":
        return family1(p.get("mu"), p.get("nu"))
    if fam == "F2":
        return family2(p.get("nu", 1.0))
    if fam == "F3":
        return family3(p.get("mu"), p.get("nu"))
    if fam == "F4":
        return family4(p.get("nu"), p.get("rho"), p.get("sigma"))
    if fam == "Sphere":
        return sphere()
    if fam == "RP2":
        return rp2(p.get("c"))
    if fam == "CliffordTorus":
        return clifford_torus()
    if fam == "FlatMinimalCP2":
        return flat_minimal_cp2()
    if fam == "ParallelKappa":
        return parallel_kappa(p.get("kappa"))
    if fam == "Codazzi":
        kap = Curvature.constant(p.get("kappa"))
        k1, k2, k3 = (Curvature.constant(p.get(n)) for n in ("kappa1", "kappa2", "kappa3"))
        f_spec = standard_s3_spec(kap)
        g_spec = LegendreCurveSpec("S7", (k1, k2, k3), np.array([1, 0, 0, 0], complex), np.array([0, 1, 0, 0], complex))
        return codazzi_surface(f_spec, g_spec)
    raise ParameterError(fam)


# mean curvature closed forms --------------------------------------------------------------------


def mean_curvature_at_base(imm: Immersion, u: float = 0.0, v: float = 0.0):
    data = analyze(imm, [u], [v])
    H, H0 = mean_curvatures(data)
    return H[0], H0[0]


def mean_curvature_closed_form(family: str, params: dict):
    """Closed-form lifts (H, H0) at p0 for the four torus families.

    h1 stands for mu in F1 and F3; F4 writes (h1, h2, h3) = (mu, rho, sigma).
    F2 and F3 need nu != 0.
    """
    nu = float(params.get("nu", 0.0))
    a, b = 2 * nu * nu + 1, nu * nu + 1
    if family == "F1":
        h1 = float(params.get("mu", 0.0))
        return (np.array([0, h1 * nu / a, 1j * h1 / a, 1j * nu**3 / a]),
                np.array([0, h1 * nu / b, 1j * h1 / b, 1j * nu]))
    if family in ("F2", "F3"):
        mu = float(params.get("mu", 0.0)) if family == "F3" else 0.0
        if nu == 0:
            raise ParameterError(f"{family} closed form is singular at nu = 0")
        h4 = 1j * (4 * nu**4 - nu**2 - 1) / (4 * nu * a)
        return (np.array([0, mu * nu / a, 1j * mu / a, h4]),
                np.array([0, mu * nu / b, 1j * mu / b, 1j * (nu - 1 / (2 * nu))]))
    if family == "F4":
        rho, sigma = float(params.get("rho", 0.0)), float(params.get("sigma", 0.0))
        h1, h2, h3 = lie.family4_mu(nu, rho, sigma), rho, sigma
        r2 = math.sqrt(2)
        return (
            np.array([0, (2 * h1 * nu - r2 * h3) / (4 * nu * nu + 2), 1j * h1 / a,
                      -1j * (2 * r2 * h2 - 4 * nu**3 + nu) / (8 * nu * nu + 4)]),
            np.array([0, (h1 * nu - r2 * h3) / b, 1j * h1 / b,
                      1j * (-2 * r2 * h2 + 2 * nu**3 + nu) / (2 * b)]),
        )
    raise ParameterError(f"no mean curvature closed form for {family}")


@dataclass(frozen=True)
class MeanCurvatureRow:
    family: str
    params: dict
    H: np.ndarray
    H0: np.ndarray
    H_closed: np.ndarray
    H0_closed: np.ndarray

    @property
    def residual(self) -> float:
        return float(max(np.abs(self.H - self.H_closed).max(), np.abs(self.H0 - self.H0_closed).max()))


def mean_curvature_table(family: str, params: dict) -> MeanCurvatureRow:
    """Computed against closed-form lifted H, H0 at p0."""
    imm = family_immersion(FamilyParams(family, dict(params)))
    H, H0 = mean_curvature_at_base(imm)
    Hd, H0d = mean_curvature_closed_form(family, params)
    return MeanCurvatureRow(family, dict(params), H, H0, Hd, H0d)


def family2_H_norm(nu: float) -> float:
    """g-norm of the nearly Kähler mean curvature of Family 2."""
    from .nk_structure import g_at

    data = analyze(family2(nu), [0.0], [0.0])
    H, _ = mean_curvatures(data)
    return float(np.sqrt(g_at(data.p, H, H))[0])


def family2_H_signed(nu: float) -> float:
    """Im of the 4th component of H at the base point (changes sign at the minimal root)."""
    H, _ = mean_curvature_at_base(family2(nu))
    return float(H[3].imag)


MINIMAL_NU = math.sqrt(1 + math.sqrt(17)) / (2 * math.sqrt(2))


def minimal_root_find(bracket=(0.5, 1.2), xtol: float = 1e-13) -> float:
    """Root of the Family 2 mean curvature in nu (positive branch)."""
    a, b = bracket
    fa, fb = family2_H_signed(a), family2_H_signed(b)
    if fa * fb > 0:
        raise ValueError("no sign change of H on the bracket")
    return brentq(family2_H_signed, a, b, xtol=xtol, rtol=4 * np.finfo(float).eps)
