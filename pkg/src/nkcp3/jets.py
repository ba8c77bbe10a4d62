"""Truncated two-variable Taylor jets over numpy arrays.

A :class:`Jet` stores the normalized Taylor coefficients

    c[a, b] = d^a/du^a d^b/dv^b f / (a! b!)

of a map (u, v) -> array, for all a + b <= order, evaluated at one or many
base points at once.  Coefficients live on the leading axis; everything
after it is the value shape, so a batch of vectors in C^4 is a jet of
shape ``(batch, 4)``.

Only analytic operations are supported.  Arithmetic, conjugation, real
parts, sums and constant matrix products are exact; scalar functions are
applied by Taylor composition.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

__all__ = [
    "Jet",
    "variables",
    "jet_eval",
    "sin",
    "cos",
    "exp",
    "expi",
    "sqrt",
    "arctan",
    "arctan2",
    "where",
    "value",
    "stack",
]


@lru_cache(maxsize=None)
def monomials(order: int) -> tuple[tuple[int, int], ...]:
    """Exponent pairs (a, b) with a + b <= order, graded by total degree."""
    return tuple((n - b, b) for n in range(order + 1) for b in range(n + 1))


@lru_cache(maxsize=None)
def _index(order: int) -> dict[tuple[int, int], int]:
    return {m: i for i, m in enumerate(monomials(order))}


@lru_cache(maxsize=None)
def _product_tensor(order: int) -> np.ndarray:
    mons = monomials(order)
    idx = _index(order)
    n = len(mons)
    t = np.zeros((n, n, n))
    for i, (a1, b1) in enumerate(mons):
        for j, (a2, b2) in enumerate(mons):
            m = (a1 + a2, b1 + b2)
            if m in idx:
                t[idx[m], i, j] = 1.0
    return t


@lru_cache(maxsize=None)
def _restrict(order: int, lower: int) -> np.ndarray:
    """Indices of the coefficients of a lower-order jet inside a higher one."""
    idx = _index(order)
    return np.array([idx[m] for m in monomials(lower)])


class Jet:
    """Value and partial derivatives (up to ``order``) of an array-valued map."""

    __array_ufunc__ = None  # make numpy defer to the reflected operators

    def __init__(self, coeffs, order: int):
        coeffs = np.asarray(coeffs)
        if coeffs.shape[0] != len(monomials(order)):
            raise ValueError(
                f"order {order} needs {len(monomials(order))} coefficients, "
                f"got {coeffs.shape[0]}"
            )
        self.c = coeffs
        self.order = order

    # construction ---------------------------------------------------------

    @classmethod
    def constant(cls, val, order: int) -> "Jet":
        val = np.asarray(val)
        c = np.zeros((len(monomials(order)),) + val.shape, dtype=np.result_type(val, float))
        c[0] = val
        return cls(c, order)

    @classmethod
    def variable(cls, val, which: int, order: int) -> "Jet":
        val = np.asarray(val, dtype=float)
        c = np.zeros((len(monomials(order)),) + val.shape)
        c[0] = val
        if order >= 1:
            c[_index(order)[(1, 0) if which == 0 else (0, 1)]] = 1.0
        return cls(c, order)

    # shape ----------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, ...]:
        return self.c.shape[1:]

    @property
    def value(self) -> np.ndarray:
        return self.c[0]

    def __getitem__(self, idx) -> "Jet":
        if not isinstance(idx, tuple):
            idx = (idx,)
        return Jet(self.c[(slice(None),) + idx], self.order)

    def __len__(self) -> int:
        return self.shape[0]

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise ValueError("cannot raise the order of a jet")
        if order == self.order:
            return self
        return Jet(self.c[_restrict(self.order, order)], order)

    def partial(self, a: int, b: int) -> np.ndarray:
        """The plain partial derivative d^a_u d^b_v at the base points."""
        return self.c[_index(self.order)[(a, b)]] * (math.factorial(a) * math.factorial(b))

    def d(self, which: int) -> "Jet":
        """Jet of the partial derivative along u (0) or v (1); one order lower."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        idx = _index(self.order)
        out = []
        for a, b in monomials(self.order - 1):
            if which == 0:
                out.append((a + 1) * self.c[idx[(a + 1, b)]])
            else:
                out.append((b + 1) * self.c[idx[(a, b + 1)]])
        return Jet(np.stack(out), self.order - 1)

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Jet):
            order = min(self.order, other.order)
            return self.truncate(order), other.truncate(order), order
        return self, None, self.order

    def __add__(self, other):
        a, b, order = self._coerce(other)
        if b is None:
            c = a.c.astype(np.result_type(a.c, np.asarray(other)), copy=True)
            c[0] = c[0] + other
            return Jet(c, order)
        return Jet(a.c + b.c, order)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.c, self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b, order = self._coerce(other)
        if b is None:
            return Jet(a.c * np.asarray(other), order)
        ac, bc = a.c, b.c
        shape = np.broadcast_shapes(ac.shape[1:], bc.shape[1:])
        n = ac.shape[0]
        ac = np.broadcast_to(ac, (n,) + shape)
        bc = np.broadcast_to(bc, (n,) + shape)
        return Jet(np.einsum("kij,i...,j...->k...", _product_tensor(order), ac, bc), order)

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        x0 = self.value
        n = np.arange(self.order + 1)
        derivs = [(-1.0) ** k * math.factorial(k) / x0 ** (k + 1) for k in n]
        return self._compose(derivs)

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return Jet(self.c / np.asarray(other), self.order)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, k: int):
        if not isinstance(k, (int, np.integer)) or k < 0:
            raise TypeError("only non-negative integer powers are analytic everywhere")
        out = Jet.constant(np.ones(self.shape, dtype=self.c.dtype), self.order)
        for _ in range(k):
            out = out * self
        return out

    def __matmul__(self, other):
        other = np.asarray(other)
        return Jet(self.c @ other, self.order)

    def __rmatmul__(self, other):
        # M @ v acting on the last axis of the value shape
        other = np.asarray(other)
        return Jet(np.einsum("ij,...j->...i", other, self.c), self.order)

    def __abs__(self):
        raise TypeError("abs() is not analytic; jets reject it")

    def conj(self) -> "Jet":
        return Jet(np.conj(self.c), self.order)

    conjugate = conj

    @property
    def real(self) -> "Jet":
        return Jet(np.real(self.c), self.order)

    @property
    def imag(self) -> "Jet":
        return Jet(np.imag(self.c), self.order)

    def sum(self, axis=-1) -> "Jet":
        axis = axis if axis < 0 else axis + 1
        return Jet(self.c.sum(axis=axis), self.order)

    # composition ------------------------------------------------------------

    def _compose(self, derivs) -> "Jet":
        """f(self) given f^(k)(value) for k = 0..order."""
        h = Jet(self.c.copy(), self.order)
        h.c[0] = 0
        out = Jet.constant(np.asarray(derivs[0]), self.order)
        power = None
        for k in range(1, self.order + 1):
            power = h if power is None else power * h
            out = out + power * (np.asarray(derivs[k]) / math.factorial(k))
        return out

    def __repr__(self) -> str:
        return f"Jet(order={self.order}, shape={self.shape})"


# free functions that work on both jets and plain arrays ---------------------


def value(x):
    return x.value if isinstance(x, Jet) else np.asarray(x)


def sin(x):
    if not isinstance(x, Jet):
        return np.sin(x)
    s, c = np.sin(x.value), np.cos(x.value)
    return x._compose([s, c, -s, -c, s, c, -s, -c][: x.order + 1] if x.order < 8 else _cycle(s, c, x.order))


def cos(x):
    if not isinstance(x, Jet):
        return np.cos(x)
    s, c = np.sin(x.value), np.cos(x.value)
    return x._compose([c, -s, -c, s, c, -s, -c, s][: x.order + 1] if x.order < 8 else _cycle(c, -s, x.order))


def _cycle(f0, f1, order):
    seq = [f0, f1, -f0, -f1]
    return [seq[k % 4] for k in range(order + 1)]


def exp(x):
    if not isinstance(x, Jet):
        return np.exp(x)
    e = np.exp(x.value)
    return x._compose([e] * (x.order + 1))


def expi(x):
    """exp(i x) for real x."""
    return exp(1j * x)


def sqrt(x):
    if not isinstance(x, Jet):
        return np.sqrt(x)
    x0 = x.value
    derivs = []
    coef = 1.0
    for k in range(x.order + 1):
        derivs.append(coef * x0 ** (0.5 - k))
        coef *= 0.5 - k
    return x._compose(derivs)


def arctan(x):
    if not isinstance(x, Jet):
        return np.arctan(x)
    x0 = x.value
    derivs = [np.arctan(x0)]
    for n in range(1, x.order + 1):
        derivs.append((-1.0) ** (n - 1) * math.factorial(n - 1) * np.imag((x0 - 1j) ** (-n)))
    return x._compose(derivs)


def arctan2(y, x):
    """Branch-consistent atan2; the higher coefficients come from arctan of a ratio."""
    if not isinstance(x, Jet) and not isinstance(y, Jet):
        return np.arctan2(y, x)
    y0, x0 = value(y), value(x)
    base = np.arctan2(y0, x0)
    use_x = np.abs(x0) >= np.abs(y0)
    safe_x = x + np.where(use_x, 0.0, 1.0)
    safe_y = y + np.where(use_x, 1.0, 0.0)
    t1 = arctan(y / safe_x)
    t2 = -arctan(x / safe_y)
    t = where(use_x, t1, t2)
    return t + (base - t.value)


def where(cond, a, b):
    """Elementwise select between jets (cond broadcasts over the value shape)."""
    if not isinstance(a, Jet) and not isinstance(b, Jet):
        return np.where(cond, a, b)
    order = min(x.order for x in (a, b) if isinstance(x, Jet))
    ref = a if isinstance(a, Jet) else b
    a = a.truncate(order) if isinstance(a, Jet) else Jet.constant(np.broadcast_to(a, ref.shape), order)
    b = b.truncate(order) if isinstance(b, Jet) else Jet.constant(np.broadcast_to(b, ref.shape), order)
    return Jet(np.where(np.asarray(cond)[None], a.c, b.c), order)


def stack(items, axis=-1):
    """Stack jets (or a mix of jets and constants) along a new value axis."""
    jets = [x for x in items if isinstance(x, Jet)]
    if not jets:
        return np.stack(items, axis=axis)
    order = min(x.order for x in jets)
    shape = np.broadcast_shapes(*[x.shape for x in jets])
    cs = []
    for x in items:
        if isinstance(x, Jet):
            c = x.truncate(order).c
        else:
            c = Jet.constant(np.asarray(x), order).c
        cs.append(np.broadcast_to(c, (c.shape[0],) + shape))
    ax = axis if axis < 0 else axis + 1
    return Jet(np.stack(cs, axis=ax), order)


def variables(u, v, order: int = 3) -> tuple[Jet, Jet]:
    """Seed jets for the two coordinates at (possibly batched) base points."""
    u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    return Jet.variable(u, 0, order), Jet.variable(v, 1, order)


def jet_eval(f, u, v, order: int = 3) -> Jet:
    """Evaluate f(u, v) over jet arithmetic, returning all derivatives to ``order``."""
    ju, jv = variables(u, v, order)
    out = f(ju, jv)
    if not isinstance(out, Jet):
        out = Jet.constant(np.broadcast_to(np.asarray(out), np.shape(ju.value) + np.shape(out)), order)
    return out
