"""Legendre curves in S^3 (in C^2) and S^7 (in C^4 = H^2).

A unit-speed curve is Legendre when its velocity is orthogonal to i gamma
(and to j gamma, k gamma in S^7).  Such curves solve

    S^3:  gamma'' = -gamma + kappa i gamma'
    S^7:  gamma'' = -gamma + kappa1 i gamma' + kappa2 j gamma' + kappa3 k gamma'

which is integrated with classical RK4, projecting back onto the
constraint set after every step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import Polynomial
from scipy.interpolate import CubicSpline

from .algebra import jvec, kvec, rdot

DRIFT_TOL = 1e-10


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Curvature:
    """A smooth real function of the curve parameter with its derivatives.

    Built from a constant, polynomial coefficients (lowest degree first) or
    a sample table interpolated by a cubic spline.
    """

    fn: Callable
    derivs: tuple = ()
    antideriv: Callable | None = None
    description: str = ""

    def __call__(self, t):
        return self.fn(t)

    def deriv(self, n: int = 1):
        if n == 0:
            return self.fn
        if n <= len(self.derivs):
            return self.derivs[n - 1]
        raise ValueError(f"derivative of order {n} not available")

    def integral(self, t):
        """K(t) = int_0^t kappa."""
        if self.antideriv is None:
            raise ValueError("no antiderivative available")
        return self.antideriv(t) - self.antideriv(0.0)

    @classmethod
    def constant(cls, c: float) -> "Curvature":
        return cls.polynomial([c])

    @classmethod
    def polynomial(cls, coeffs: Sequence[float]) -> "Curvature":
        p = Polynomial(np.asarray(coeffs, float))
        ds = tuple(p.deriv(n) for n in range(1, 4))
        return cls(p, ds, p.integ(), f"poly{tuple(float(c) for c in coeffs)}")

    @classmethod
    def samples(cls, t, k) -> "Curvature":
        s = CubicSpline(np.asarray(t, float), np.asarray(k, float))
        ds = tuple(s.derivative(n) for n in range(1, 4))
        return cls(s, ds, s.antiderivative(), f"spline[{len(t)}]")


@dataclass(frozen=True)
class LegendreCurveSpec:
    space: str  # "S3" or "S7"
    curvatures: tuple  # one Curvature (S3) or three (S7)
    initial_point: np.ndarray
    initial_velocity: np.ndarray
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if self.space not in ("S3", "S7"):
            raise ValueError("space must be S3 or S7")
        n = 2 if self.space == "S3" else 4
        g0 = np.asarray(self.initial_point, dtype=complex)
        v0 = np.asarray(self.initial_velocity, dtype=complex)
        if g0.shape != (n,) or v0.shape != (n,):
            raise ValueError(f"{self.space} initial data needs {n} complex components")
        if len(self.curvatures) != (1 if self.space == "S3" else 3):
            raise ValueError("S3 takes one curvature function, S7 three")
        object.__setattr__(self, "initial_point", g0)
        object.__setattr__(self, "initial_velocity", v0)
        drift = constraint_drift(self.space, g0, v0)
        if drift > 1e-12:
            raise ValueError(f"initial data violates the Legendre constraints (drift {drift:.1e})")

    @property
    def kappa(self) -> Curvature:
        return self.curvatures[0]


def _directions(space, g):
    if space == "S3":
        return [1j * g]
    return [1j * g, jvec(g), kvec(g)]


def constraint_drift(space: str, g, v) -> float:
    checks = [abs(rdot(g, g) - 1), abs(rdot(v, v) - 1), abs(rdot(v, g))]
    checks += [abs(rdot(v, w)) for w in _directions(space, g)]
    return float(max(checks))


def _rotations(space, x):
    if space == "S3":
        return [1j * x]
    return [1j * x, jvec(x), kvec(x)]


def _rhs(spec, t, g, v):
    ks = [c(t) for c in spec.curvatures]
    acc = -g
    for k, w in zip(ks, _rotations(spec.space, v)):
        acc = acc + k * w
    return acc


def _project(space, g, v):
    g = g / np.sqrt(rdot(g, g))
    v = v - rdot(v, g) * g
    for w in _directions(space, g):
        w = w / np.sqrt(rdot(w, w))
        v = v - rdot(v, w) * w
    return g, v / np.sqrt(rdot(v, v))


def _rk4(spec, t, g, v, h):
    k1g, k1v = v, _rhs(spec, t, g, v)
    k2g, k2v = v + h / 2 * k1v, _rhs(spec, t + h / 2, g + h / 2 * k1g, v + h / 2 * k1v)
    k3g, k3v = v + h / 2 * k2v, _rhs(spec, t + h / 2, g + h / 2 * k2g, v + h / 2 * k2v)
    k4g, k4v = v + h * k3v, _rhs(spec, t + h, g + h * k3g, v + h * k3v)
    return (
        g + h / 6 * (k1g + 2 * k2g + 2 * k3g + k4g),
        v + h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v),
    )


def _advance(spec, t, g, v, t_end, dt, stats):
    while abs(t_end - t) > 1e-15:
        h = math.copysign(min(dt, abs(t_end - t)), t_end - t)
        for _ in range(30):
            g1, v1 = _rk4(spec, t, g, v, h)
            drift = constraint_drift(spec.space, g1, v1)
            if drift <= DRIFT_TOL:
                break
            h /= 2
            stats["rejected"] += 1
        else:
            raise IntegrationError(f"step rejected at t={t:.6g}: constraint drift {drift:.2e}")
        stats["max_drift"] = max(stats["max_drift"], drift)
        g, v = _project(spec.space, g1, v1)
        t += h
    return t, g, v


@dataclass(frozen=True)
class CurveSamples:
    t: np.ndarray
    derivs: np.ndarray  # (order + 1, n, dim): gamma, gamma', gamma'', ...
    max_drift: float
    rejected: int

    @property
    def gamma(self) -> np.ndarray:
        return self.derivs[0]


def higher_derivatives(spec: LegendreCurveSpec, t: float, g, v, order: int) -> list:
    """gamma^(n), n <= order, from the ODE and the curvature derivatives."""
    out = [g, v]
    if order >= 2:
        out.append(_rhs(spec, t, g, v))
    if order >= 3:
        # gamma''' = -gamma' + sum k'_a R_a gamma' + k_a R_a gamma''
        acc = -v
        rv = _rotations(spec.space, v)
        ra = _rotations(spec.space, out[2])
        for c, x, y in zip(spec.curvatures, rv, ra):
            acc = acc + c.deriv(1)(t) * x + c(t) * y
        out.append(acc)
    if order >= 4:
        raise ValueError("derivatives above order 3 are not supported")
    return out[: order + 1]


def legendre_integrate(spec: LegendreCurveSpec, t, dt: float = 1e-3, order: int = 3) -> CurveSamples:
    """Integrate from 0 to each requested parameter value (either sign)."""
    t = np.atleast_1d(np.asarray(t, float))
    stats = {"rejected": 0, "max_drift": 0.0}
    dim = 2 if spec.space == "S3" else 4
    out = np.zeros((order + 1, t.size, dim), dtype=complex)
    for sign in (1, -1):
        idx = np.nonzero(t >= 0)[0] if sign > 0 else np.nonzero(t < 0)[0]
        idx = idx[np.argsort(sign * t[idx])]
        cur, g, v = 0.0, spec.initial_point, spec.initial_velocity
        for i in idx:
            cur, g, v = _advance(spec, cur, g, v, t[i], dt, stats)
            for n, d in enumerate(higher_derivatives(spec, t[i], g, v, order)):
                out[n, i] = d
    return CurveSamples(t, out, stats["max_drift"], stats["rejected"])


def constant_curvature_s3(c: float, t) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form S^3 Legendre curve of curvature c through (1, 0) with velocity (0, 1)."""
    t = np.asarray(t, float)
    r = math.sqrt(c * c + 4)
    ap, am = (c + r) / 2, (c - r) / 2
    # gamma = A e^{i ap t} + B e^{i am t}; first slot A + B = 1, i(ap A + am B) = 0
    A1, B1 = -am / (ap - am), ap / (ap - am)
    # second slot A + B = 0, i(ap A + am B) = 1
    A2 = -1j / (ap - am)
    B2 = -A2
    e_p, e_m = np.exp(1j * ap * t), np.exp(1j * am * t)
    g = np.stack([A1 * e_p + B1 * e_m, A2 * e_p + B2 * e_m], axis=-1)
    dg = np.stack([1j * ap * A1 * e_p + 1j * am * B1 * e_m, 1j * ap * A2 * e_p + 1j * am * B2 * e_m], axis=-1)
    return g, dg


def standard_s3_spec(kappa: Curvature) -> LegendreCurveSpec:
    """f(0) = 1, f'(0) = j in the quaternion picture, i.e. (1, 0) and (0, 1) in C^2."""
    return LegendreCurveSpec("S3", (kappa,), np.array([1, 0], complex), np.array([0, 1], complex))


def random_s7_initial(rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    g = rng.normal(size=4) + 1j * rng.normal(size=4)
    g /= np.sqrt(rdot(g, g))
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    _, v = _project("S7", g, v)
    return g, v
