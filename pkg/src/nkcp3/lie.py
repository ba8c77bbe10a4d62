"""CP^3 = Sp(2) / (SU(2) x U(1)): basis of sp(2), Killing metric and brackets.

The isotropy algebra h is spanned by h0..h3 and its Killing complement m
by m1..m6.  The metric is kappa(x, y) = 1/4 Re tr(x^dagger y), for which
the ten basis matrices are orthonormal, so coordinates are read off by
projection.

The sign of m2 is chosen so that J m1 = m2 for the nearly Kähler J under
the tangent map A -> horizontal part of A p0 (see ``FLIPPED_M2``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import expm, horizontal, is_sp2, customary_to_package_matrix
from .config import TOL
from .jets import Jet, monomials
from .nk_structure import J_at, P_at, g_at

R2 = math.sqrt(2.0)
P0 = np.array([1, 0, 0, 0], dtype=complex)
NAMES = ("h0", "h1", "h2", "h3", "m1", "m2", "m3", "m4", "m5", "m6")


def _m(rows) -> np.ndarray:
    return np.array(rows, dtype=complex)


_E13 = _m([[0, 0, 1, 0], [0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0]])

# m2 with the opposite overall sign; J then maps m1 to -m2.
FLIPPED_M2 = -R2 * 1j * _E13

_MATRICES = {
    "h0": R2 * 1j * np.diag([1, 0, -1, 0]).astype(complex),
    "h1": R2 * 1j * np.diag([0, 1, 0, -1]).astype(complex),
    "h2": -R2 * 1j * _m([[0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 1, 0, 0]]),
    "h3": R2 * _m([[0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, -1, 0, 0]]),
    "m1": R2 * _m([[0, 0, 1, 0], [0, 0, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 0]]),
    "m2": R2 * 1j * _E13,
    "m3": _m([[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]]),
    "m4": _m([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]),
    "m5": 1j * _m([[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]]),
    "m6": 1j * _m([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, -1, 0]]),
}


def killing(x, y) -> float:
    """kappa(x, y) = 1/4 Re tr(x^dagger y)."""
    x = x.matrix if isinstance(x, Sp2Element) else np.asarray(x)
    y = y.matrix if isinstance(y, Sp2Element) else np.asarray(y)
    return float(np.real(np.trace(x.conj().T @ y)) / 4)


def coords_of(a) -> np.ndarray:
    a = np.asarray(a)
    return np.array([killing(_MATRICES[n], a) for n in NAMES])


@dataclass(frozen=True)
class Sp2Element:
    matrix: np.ndarray
    coords: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError("sp(2) elements are 4x4 matrices")
        if not is_sp2(m, tol=1e-9 * max(1.0, np.abs(m).max())):
            raise ValueError("matrix is not in sp(2)")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "coords", coords_of(m))

    @classmethod
    def from_coords(cls, c) -> "Sp2Element":
        c = np.asarray(c, dtype=float)
        return cls(sum(ci * _MATRICES[n] for ci, n in zip(c, NAMES)))

    def __add__(self, other: "Sp2Element") -> "Sp2Element":
        return Sp2Element(self.matrix + other.matrix)

    def __sub__(self, other: "Sp2Element") -> "Sp2Element":
        return Sp2Element(self.matrix - other.matrix)

    def __neg__(self) -> "Sp2Element":
        return Sp2Element(-self.matrix)

    def __mul__(self, s: float) -> "Sp2Element":
        return Sp2Element(float(s) * self.matrix)

    __rmul__ = __mul__

    def norm(self) -> float:
        return math.sqrt(killing(self, self))


def basis() -> list[Sp2Element]:
    return [Sp2Element(_MATRICES[n]) for n in NAMES]


def element(name: str) -> Sp2Element:
    return Sp2Element(_MATRICES[name])


H_BASIS = NAMES[:4]
M_BASIS = NAMES[4:]


def bracket(a: Sp2Element, b: Sp2Element) -> Sp2Element:
    return Sp2Element(a.matrix @ b.matrix - b.matrix @ a.matrix)


def project_h(a: Sp2Element) -> Sp2Element:
    return Sp2Element.from_coords(np.r_[a.coords[:4], np.zeros(6)])


def project_m(a: Sp2Element) -> Sp2Element:
    return Sp2Element.from_coords(np.r_[np.zeros(4), a.coords[4:]])


def closure_residual(a: Sp2Element) -> float:
    """Distance of a matrix from the span of the basis."""
    return float(np.abs(Sp2Element.from_coords(a.coords).matrix - a.matrix).max())


# the isotropy representation at p0 ---------------------------------------------


def tangent_at_p0(a: Sp2Element, p0=P0) -> np.ndarray:
    """Tangent vector of CP^3 at [p0] induced by a: horizontal part of a p0."""
    return horizontal(p0, a.matrix @ p0)


J_TABLE = {"m1": ("m2", 1), "m2": ("m1", -1), "m3": ("m5", -1), "m4": ("m6", -1), "m5": ("m3", 1), "m6": ("m4", 1)}
P_TABLE = {"m1": -1, "m2": -1, "m3": 1, "m4": 1, "m5": 1, "m6": 1}


@dataclass(frozen=True)
class TableEntry:
    name: str
    residual: float


def jp_action_check(matrices: dict | None = None) -> list[TableEntry]:
    """Residuals of J m_a and P m_a against the isotropy tables, plus the metric weights."""
    mats = dict(_MATRICES) if matrices is None else {**_MATRICES, **matrices}
    vec = {n: horizontal(P0, mats[n] @ P0) for n in M_BASIS}
    out = []
    for n, (target, sign) in J_TABLE.items():
        r = np.abs(J_at(P0, vec[n]) - sign * vec[target]).max()
        out.append(TableEntry(f"J {n} = {'-' if sign < 0 else ''}{target}", float(r)))
    for n, sign in P_TABLE.items():
        r = np.abs(P_at(P0, vec[n]) - sign * vec[n]).max()
        out.append(TableEntry(f"P {n} = {'-' if sign < 0 else ''}{n}", float(r)))
    gram = np.array([[g_at(P0, vec[a], vec[b]) for b in M_BASIS] for a in M_BASIS])
    # D1 vectors have round norm^2 2 and weight 1, D2 vectors norm^2 1 and weight 2
    out.append(TableEntry("g(m_a, m_b) = 2 delta_ab", float(np.abs(gram - 2 * np.eye(6)).max())))
    return out


# the su(2) case of the homogeneity argument ------------------------------------


def su2_ansatz(a, b, lam: float, mu: float = 0.0, nu: float = 0.0) -> tuple[Sp2Element, Sp2Element]:
    """X = m1 + lam m3 + sum a_i h_{i-1},  Y = m2 + m5 / lam + mu m4 + nu m6 + sum b_i h_{i-1}."""
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    x = np.r_[np.asarray(a, float), [1.0, 0.0, lam, 0.0, 0.0, 0.0]]
    y = np.r_[np.asarray(b, float), [0.0, 1.0, 0.0, mu, 1.0 / lam, nu]]
    return Sp2Element.from_coords(x), Sp2Element.from_coords(y)


@dataclass(frozen=True)
class Su2Check:
    alpha: float
    beta: float
    residuals: dict
    closes: bool


def verify_su2_case(X: Sp2Element, Y: Sp2Element, factor: float = 12.0, tol: float = 1e-10) -> Su2Check:
    """Does {X, Y, Z = [X, Y]_h} close to su(2) with the scaling factor ``factor``?

    After rescaling X, Y by factor^(-1/2) and Z by 1/factor the relations
    [X, Y] = Z, [Y, Z] = X, [Z, X] = Y hold iff [X, Y] = Z,
    [Y, Z] = factor X and [Z, X] = factor Y.
    """
    Z = project_h(bracket(X, Y))
    ky, kx = killing(Y, Y), killing(X, X)
    if min(ky, kx) < 1e-14:
        raise ValueError("degenerate scaling: X or Y vanishes")
    alpha = killing(bracket(Z, X), Y) / ky
    beta = killing(bracket(Y, Z), X) / kx
    res = {
        "[X,Y]-Z": float(np.abs(bracket(X, Y).matrix - Z.matrix).max()),
        "[Y,Z]-cX": float(np.abs(bracket(Y, Z).matrix - factor * X.matrix).max()),
        "[Z,X]-cY": float(np.abs(bracket(Z, X).matrix - factor * Y.matrix).max()),
        "alpha-c": abs(alpha - factor),
        "beta-c": abs(beta - factor),
    }
    return Su2Check(alpha, beta, res, max(res.values()) <= tol)


SU2_SOLUTIONS = (
    {"a": (0, 0, 0, -1), "b": (0, 0, 1, 0), "lam": 1.0},
    {"a": (0, 0, 0, -1), "b": (0, 0, 1, 0), "lam": -1.0},
)


# subalgebras --------------------------------------------------------------------


def span_rank(elems, tol: float = 1e-10) -> int:
    if not elems:
        return 0
    m = np.array([e.coords for e in elems])
    return int(np.linalg.matrix_rank(m, tol=tol))


def generated_dimension(gens, tol: float = 1e-10, max_iter: int = 10) -> int:
    """Dimension of the Lie subalgebra generated by ``gens``."""
    elems = list(gens)
    rank = span_rank(elems, tol)
    for _ in range(max_iter):
        new = elems + [bracket(a, b) for i, a in enumerate(elems) for b in elems[i + 1:]]
        m = np.array([e.coords for e in new])
        u, s, vt = np.linalg.svd(m, full_matrices=False)
        keep = s > tol
        elems = [Sp2Element.from_coords(v) for v in vt[keep]]
        if len(elems) == rank:
            return rank
        rank = len(elems)
    return rank


def isotropy_dimension(gens, tol: float = 1e-10) -> int:
    """dim(k ∩ h) for the span k of ``gens`` (assumed closed)."""
    return span_rank(gens, tol) - span_rank([project_m(g) for g in gens], tol)


@dataclass(frozen=True)
class SubalgebraCase:
    generators: tuple
    claimed_type: str
    isotropy_dim: int

    def __post_init__(self):
        m = np.array([g.coords for g in self.generators])
        if np.linalg.det(m @ m.T) <= 1e-10:
            raise ValueError("generators are linearly dependent")


def table1_fixtures() -> list[SubalgebraCase]:
    """One representative per row of the possible (k, k0) pairs of homogeneous surfaces."""
    X, Y = family4_generators(nu=0.3, rho=0.2, sigma=0.5)
    Xs, Ys = su2_ansatz(**SU2_SOLUTIONS[0])
    Zs = project_h(bracket(Xs, Ys))
    e = element
    return [
        SubalgebraCase((X, Y), "u(1)+u(1)", 0),
        SubalgebraCase((Xs, Ys, Zs), "su(2)", 1),
        SubalgebraCase((e("h0"), e("h1"), e("m1"), e("m2")), "su(2)+u(1)", 2),
        SubalgebraCase(tuple(e(n) for n in ("h0", "h1", "h2", "h3", "m1", "m2")), "su(2)+su(2)", 4),
    ]


# orbits -------------------------------------------------------------------------


def family4_mu(nu: float, rho: float, sigma: float) -> float:
    """The value of mu forced by commutativity of the Family 4 generators."""
    if sigma == 0:
        raise ValueError("Family 4 requires sigma != 0")
    return -(8 * nu**2 * rho + 2 * R2 * nu * (8 * rho**2 + 8 * sigma**2 - 1) - 8 * rho) / (8 * sigma)


def family4_matrices(nu: float, rho: float, sigma: float, mu: float | None = None):
    """The Family 4 generators in customary coordinates; they preserve the pairing (1,2), (3,4)."""
    mu = family4_mu(nu, rho, sigma) if mu is None else mu
    X = _m([
        [-1j * nu / R2, 0, 0, 1 / R2],
        [0, 1j * nu / R2, -1 / R2, 0],
        [0, 1 / R2, 2j * rho, 2 * sigma],
        [-1 / R2, 0, -2 * sigma, -2j * rho],
    ])
    w = mu + 2 * R2 * sigma * nu
    Y = _m([
        [-1j * mu, 1, -1j * nu, 0],
        [-1, 1j * mu, 0, 1j * nu],
        [-1j * nu, 0, 1j * w, 1 - nu * (2 * R2 * rho + nu)],
        [0, 1j * nu, 2 * R2 * rho * nu + nu**2 - 1, -1j * w],
    ])
    return X, Y


def family4_generators(nu: float, rho: float, sigma: float, mu: float | None = None):
    """Family 4 generators in the package conventions (see ``customary_to_package``)."""
    X, Y = family4_matrices(nu, rho, sigma, mu)
    return Sp2Element(customary_to_package_matrix(X)), Sp2Element(customary_to_package_matrix(Y))


def orbit_jet(X: np.ndarray, Y: np.ndarray, p0, t, s, order: int) -> Jet:
    """Jet of (t, s) -> e^{tX} e^{sY} p0; d^a_t d^b_s = X^a e^{tX} e^{sY} Y^b p0."""
    t = np.atleast_1d(np.asarray(t, float))
    s = np.atleast_1d(np.asarray(s, float))
    Et = np.array([expm(X, ti) for ti in t])
    Es = np.array([expm(Y, si) for si in s])
    Xp = [np.linalg.matrix_power(X, a) for a in range(order + 1)]
    Yp = [np.linalg.matrix_power(Y, b) @ p0 for b in range(order + 1)]
    coeffs = []
    for a, b in monomials(order):
        w = np.einsum("nij,j->ni", Es, Yp[b])
        w = np.einsum("nij,nj->ni", Et, w)
        coeffs.append(np.einsum("ij,nj->ni", Xp[a], w) / (math.factorial(a) * math.factorial(b)))
    return Jet(np.array(coeffs), order)


def orbit_surface(X: Sp2Element, Y: Sp2Element, p0=P0, label: str = "orbit", domain=((0.0, 2 * np.pi), (0.0, 2 * np.pi)), tol=TOL):
    """(t, s) -> [e^{tX} e^{sY} p0] as an :class:`~nkcp3.surface.Immersion`."""
    from .surface import Immersion

    comm = np.abs(bracket(X, Y).matrix).max()
    Xm, Ym = X.matrix, Y.matrix
    p0 = np.asarray(p0, dtype=complex)

    def jet_fn(t, s, order):
        return orbit_jet(Xm, Ym, p0, t, s, order)

    return Immersion(label, domain, jet_fn=jet_fn, meta={"commutator": float(comm)})
