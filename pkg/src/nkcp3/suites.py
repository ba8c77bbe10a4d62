"""Invariant suites: named numerical checks with residuals and tolerances.

Every check reduces to a nonnegative residual compared against a tolerance;
a check passes iff residual <= tolerance.  Lower-bound checks (negative
controls) are phrased as the ratio threshold / observed so the same rule
applies.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from itertools import combinations

import numpy as np

from . import catalog, lie
from .algebra import _bc, rdot
from .config import TOL, Tolerances, seed
from .legendre import Curvature, LegendreCurveSpec, random_s7_initial, standard_s3_spec
from .nk_structure import (
    G_at,
    J_at,
    g_at,
    holonomy_curvature,
    nablaG_at,
    nablaG_formula,
    nablaJ0_residual,
    nablaP_residual,
    random_point,
    random_totally_real_pair,
    random_horizontal,
    riemann_at,
    wedge_at,
)
from .surface import (
    analyze,
    classify_coefficients,
    gauss_curvature_extrinsic,
    gauss_curvature_intrinsic,
    predicate_report,
    totally_real_defect,
)


@dataclass(frozen=True)
class Check:
    name: str
    anchor: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tolerance)

    def record(self) -> dict:
        d = asdict(self)
        d["residual"] = float(d["residual"])
        d["pass"] = self.passed
        return d


def _lower_bound(name, anchor, observed, threshold) -> Check:
    """Passes iff observed >= threshold."""
    ratio = threshold / observed if observed > 0 else math.inf
    return Check(name + " (threshold/observed)", anchor, ratio, 1.0)


# random configurations -----------------------------------------------------------


def totally_real_configs(rng: np.random.Generator, n: int):
    """Base points with a g-orthonormal totally real pair and two free vectors."""
    p = random_point(rng, n)
    u, v = random_totally_real_pair(rng, p)
    z = random_horizontal(rng, p)
    w = random_horizontal(rng, p)
    return p, u, v, z, w


def adapted_frames(rng: np.random.Generator, n: int):
    """e1..e6 = U, V, JU, JV, G(U, V), JG(U, V) at random points."""
    p = random_point(rng, n)
    u, v = random_totally_real_pair(rng, p)
    e5 = G_at(p, u, v)
    return p, [u, v, J_at(p, u), J_at(p, v), e5, J_at(p, e5)]


# (i, j) -> (k, sign): G(e_i, e_j) = sign e_k; k = None for zero (1-based)
FRAME_TABLE = {
    (1, 2): (5, 1), (3, 4): (5, -1),
    (2, 5): (1, 1), (4, 6): (1, -1),
    (1, 5): (2, -1), (3, 6): (2, 1),
    (2, 6): (3, -1), (4, 5): (3, -1),
    (1, 6): (4, 1), (3, 5): (4, 1),
    (1, 4): (6, -1), (2, 3): (6, 1),
    (1, 3): (None, 0), (2, 4): (None, 0), (5, 6): (None, 0),
}


def _norm(x):
    return np.abs(x).max()


# structure ----------------------------------------------------------------------------


def structure_identity_residuals(rng: np.random.Generator, n: int = 100) -> dict:
    """Max residuals of the four G identities over n random totally real configurations."""
    p, x, y, z, w = totally_real_configs(rng, n)
    gg = lambda a, b: g_at(p, a, b)
    gxy = G_at(p, x, y)
    const_type = gg(gxy, gxy) - (gg(x, x) * gg(y, y) - gg(x, y) ** 2 - gg(x, J_at(p, y)) ** 2)
    nabla_g = nablaG_at(p, z, x, y) - nablaG_formula(p, z, x, y)
    yzx = wedge_at(p, y, z, x)
    g_of_g = G_at(p, x, G_at(p, y, z)) - (yzx + J_at(p, wedge_at(p, y, z, J_at(p, x))))
    gram = gg(G_at(p, x, y), G_at(p, z, w)) - (
        gg(wedge_at(p, z, w, y), x) + gg(J_at(p, wedge_at(p, z, w, J_at(p, y))), x)
    )
    return {
        "constant type": float(np.abs(const_type).max()),
        "nabla G": float(_norm(nabla_g)),
        "G(X, G(Y, Z))": float(_norm(g_of_g)),
        "g(G, G)": float(np.abs(gram).max()),
    }


def frame_table_residual(rng: np.random.Generator, n: int = 50) -> float:
    p, e = adapted_frames(rng, n)
    worst = 0.0
    for (i, j), (k, sign) in FRAME_TABLE.items():
        val = G_at(p, e[i - 1], e[j - 1])
        target = 0 if k is None else sign * e[k - 1]
        worst = max(worst, float(_norm(val - target)))
    return worst


def curvature_symmetry_residual(rng: np.random.Generator, n: int = 100) -> float:
    p = random_point(rng, n)
    x, y, z, w = (random_horizontal(rng, p) for _ in range(4))
    R = lambda a, b, c, d: g_at(p, riemann_at(p, a, b, c), d)
    res = [
        R(x, y, z, w) + R(y, x, z, w),
        R(x, y, z, w) + R(x, y, w, z),
        R(x, y, z, w) - R(z, w, x, y),
        R(x, y, z, w) + R(y, z, x, w) + R(z, x, y, w),
    ]
    scale = max(1.0, float(np.abs(R(x, y, z, w)).max()))
    return float(max(np.abs(r).max() for r in res) / scale)


def holonomy_residual(rng: np.random.Generator, n: int = 20) -> float:
    worst = 0.0
    for _ in range(n):
        p = random_point(rng)
        x, y, z = (random_horizontal(rng, p) for _ in range(3))
        x, y, z = (a / np.linalg.norm(a) for a in (x, y, z))
        hol = holonomy_curvature(p, x, y, z)
        worst = max(worst, float(np.abs(hol - riemann_at(p, x, y, z)).max()))
    return worst


def structure_suite(tol: Tolerances = TOL, rng: np.random.Generator | None = None) -> list[Check]:
    rng = np.random.default_rng(seed()) if rng is None else rng
    out = [
        Check(f"{name} identity, 100 configurations", f"tensor G: {name}", r, tol.second_order)
        for name, r in structure_identity_residuals(rng).items()
    ]
    out.append(Check("adapted frame G table, 50 frames", "G multiplication table of e1..e6",
                     frame_table_residual(rng), tol.second_order))
    p = random_point(rng, 10)
    x, y = random_horizontal(rng, p), random_horizontal(rng, p)
    out.append(Check("nabla P closed form", "covariant derivative of P", float(nablaP_residual(p, x, y).max()), 1e-6))
    out.append(Check("nabla J0 closed form", "covariant derivative of J0", float(nablaJ0_residual(p, x, y).max()), 1e-6))
    out.append(Check("curvature symmetries, 100 quadruples", "Riemann tensor closed form",
                     curvature_symmetry_residual(rng), 1e-10))
    out.append(Check("curvature vs holonomy, 20 loops", "Riemann tensor closed form",
                     holonomy_residual(rng), 1e-5))
    return out


# lie -------------------------------------------------------------------------------------


def killing_oracle(x: np.ndarray, y: np.ndarray) -> float:
    """1/4 sum conj(x_ab) y_ab, written out entrywise."""
    return float(sum((np.conj(x[a, b]) * y[a, b]).real for a in range(4) for b in range(4)) / 4)


def lie_suite(tol: Tolerances = TOL) -> list[Check]:
    B = lie.basis()
    gram = np.array([[killing_oracle(a.matrix, b.matrix) for b in B] for a in B])
    out = [Check("basis orthonormal (entrywise trace oracle)", "Killing metric on sp(2)",
                 float(np.abs(gram - np.eye(10)).max()), tol.algebraic)]
    out.append(Check("basis in sp(2)", "Sp(2) = U(4) ∩ Sp(4, C)",
                     float(max(lie.closure_residual(b) for b in B)), tol.algebraic))
    h, m = B[:4], B[4:]
    red = max(lie.project_h(lie.bracket(a, b)).norm() for a in h for b in m)
    out.append(Check("reductive split [h, m] in m", "reductive decomposition", float(red), 1e-13))
    closure = max(lie.closure_residual(lie.bracket(a, b)) for a, b in combinations(B, 2))
    out.append(Check("bracket closure", "bracket table", float(closure), tol.algebraic))
    jac = 0.0
    for a, b, c in combinations(B, 3):
        s = lie.bracket(a, lie.bracket(b, c)) + lie.bracket(b, lie.bracket(c, a)) + lie.bracket(c, lie.bracket(a, b))
        jac = max(jac, s.norm())
    out.append(Check("Jacobi identity", "bracket table", float(jac), tol.algebraic))
    for entry in lie.jp_action_check():
        out.append(Check(entry.name, "J and P on m", entry.residual, tol.second_order))
    for sol in lie.SU2_SOLUTIONS:
        rep = lie.verify_su2_case(*lie.su2_ansatz(**sol))
        out.append(Check(f"su(2) solution lambda={sol['lam']:g} closes", "su(2) orbit case",
                         max(rep.residuals.values()), 1e-10))
    bad = lie.verify_su2_case(*lie.su2_ansatz(lie.SU2_SOLUTIONS[0]["a"], lie.SU2_SOLUTIONS[0]["b"], 1.1))
    out.append(_lower_bound("su(2) ansatz lambda=1.1 does not close", "su(2) orbit case",
                            max(bad.residuals.values()), 1e-3))
    for case in lie.table1_fixtures():
        dk = lie.generated_dimension(case.generators)
        dk0 = lie.isotropy_dimension(case.generators)
        out.append(Check(f"{case.claimed_type}: dim k - dim k0 = 2", "orbit dimension count",
                         float(abs(dk - dk0 - 2)), 0.0))
    for kappa in (0.5, 1.0, 2.0):
        X, Y = lie.family4_generators(0.0, 0.0, -kappa / (2 * math.sqrt(2)))
        out.append(Check(f"F4 generators commute (kappa={kappa:g})", "Family 4 commutation constraint",
                         lie.bracket(X, Y).norm(), 1e-12))
    return out


# catalog ------------------------------------------------------------------------------------

# (label, params, expected tag, expected parameters)
TYPE_CLAIMS = (
    ("F1", {"mu": 0.4, "nu": 0.3}, "Type0", {"lambda": 0.0, "theta": 0.0}),
    ("F1", {"mu": 0.4, "nu": 0.0}, "Type2", {"cos_alpha": 0.0}),
    ("F2", {"nu": 0.6}, "Type0", {"lambda": 0.0, "theta": 0.0}),
    ("F3", {"mu": 0.5, "nu": 0.7}, "Type0", {"lambda": 0.0, "theta": 0.0}),
    ("F4", {"nu": 0.0, "rho": 0.2, "sigma": 0.5}, "Type2", {"cos_alpha": 0.0}),
    ("F4", {"nu": 0.3, "rho": 0.2, "sigma": 0.5}, "Type0", {"lambda": 0.0, "theta": 0.0}),
    ("Sphere", {}, "Type2", {"sin_alpha": 0.0}),
    ("RP2", {"c": 0.3}, "Type0", {"lambda": 0.0}),
    ("CliffordTorus", {}, "Type2", {"cos_alpha": 0.0}),
    ("ParallelKappa", {"kappa": 1.0}, "Type2", {"cos_alpha": 0.0}),
    ("Codazzi", {"kappa": 0.3, "kappa1": 0.2, "kappa2": -0.4, "kappa3": 0.1}, "Type2", {"cos_alpha": 0.0}),
)

MEAN_CURVATURE_CASES = (
    ("F1", {"mu": 0.4, "nu": 0.3}),
    ("F1", {"mu": -0.7, "nu": 1.1}),
    ("F2", {"nu": 0.6}),
    ("F2", {"nu": 1.3}),
    ("F3", {"mu": 0.5, "nu": 0.7}),
    ("F3", {"mu": -0.8, "nu": 0.4}),
    ("F4", {"nu": 0.3, "rho": 0.2, "sigma": 0.5}),
    ("F4", {"nu": 0.0, "rho": 0.0, "sigma": 0.4}),
)


def claim_residual(report, tag: str, expected: dict) -> float:
    """Deviation of a TypeReport from a claimed type; 1.0 on a tag mismatch."""
    if report.type_tag != tag:
        return 1.0
    r = report.residual
    prm = report.params
    for key, val in expected.items():
        if key == "cos_alpha":
            r = max(r, abs(math.cos(prm["alpha"]) - val))
        elif key == "sin_alpha":
            r = max(r, abs(math.sin(prm["alpha"]) - val))
        else:
            r = max(r, abs(prm[key] - val))
    return r


def classify_grid(imm, n: int = 6, tol: Tolerances = TOL, m: int | None = None) -> list:
    u, v = imm.grid(n, m)
    data = analyze(imm, u, v, tol)
    return [classify_coefficients(data.p[k], data.U.value[k], data.V.value[k], tol.classify) for k in range(len(u))]


def catalog_instances():
    for fam, params, *_ in TYPE_CLAIMS:
        yield f"{fam}{params or ''}", catalog.family_immersion(catalog.FamilyParams(fam, params))
    yield "FlatMinimalCP2", catalog.flat_minimal_cp2()
    yield "F3{'mu': -0.8, 'nu': 0.4}", catalog.family3(-0.8, 0.4)


def family2_H_norms(nus) -> np.ndarray:
    return np.array([catalog.family2_H_norm(nu) for nu in nus])


def family2_scan(lo: float = 0.05, hi: float = 3.0, step: float = 0.01):
    nus = np.round(np.arange(lo, hi + step / 2, step), 10)
    return nus, family2_H_norms(nus)


def catalog_suite(tol: Tolerances = TOL, n: int = 12) -> list[Check]:
    out = []
    for label, imm in catalog_instances():
        u, v = imm.grid(n)
        out.append(Check(f"{label} totally real", "totally real examples",
                         float(totally_real_defect(imm, u, v).max()), tol.first_order))
        data = analyze(imm, u, v, tol)
        gap = np.abs(gauss_curvature_intrinsic(data) - gauss_curvature_extrinsic(data)).max()
        out.append(Check(f"{label} Gauss equation", "Gauss equation", float(gap), 1e-5))
    for fam, params, tag, expected in TYPE_CLAIMS:
        imm = catalog.family_immersion(catalog.FamilyParams(fam, params))
        reps = classify_grid(imm, tol=tol)
        r = max(claim_residual(rep, tag, expected) for rep in reps)
        desc = ", ".join(f"{k}={v:g}" for k, v in expected.items())
        out.append(Check(f"{fam}{params or ''} is {tag} ({desc})", "type trichotomy", r, tol.classify))
    for fam, params in MEAN_CURVATURE_CASES:
        row = catalog.mean_curvature_table(fam, params)
        out.append(Check(f"{fam}{params} mean curvature lifts at p0", "mean curvature closed forms",
                         row.residual, tol.second_order))
    root = catalog.minimal_root_find()
    out.append(Check("F2 minimal root", "minimal Family 2 tori", abs(root - catalog.MINIMAL_NU), 1e-9))
    nus, hs = family2_scan()
    out.append(_lower_bound("F2 |H| > 1e-4 on the nu grid [0.05, 3]", "minimal Family 2 tori", float(hs.min()), 1e-4))
    pr = predicate_report(catalog.sphere(), n=n, tol=tol)
    for key in ("kahler_almost_complex", "totally_umbilical", "kahler_totally_geodesic"):
        out.append(Check(f"Sphere {key}", "Kähler almost complex sphere", pr[key].residual, tol.second_order))
    data = analyze(catalog.sphere(), *catalog.sphere().grid(n), tol)
    out.append(Check("Sphere K = 3", "Kähler almost complex sphere",
                     float(np.abs(gauss_curvature_intrinsic(data) - 3).max()), 1e-6))
    out.extend(codazzi_checks(np.random.default_rng(seed()), tol=tol))
    out.extend(parallel_checks(tol=tol))
    return out


def random_codazzi(rng: np.random.Generator, dt: float = 1e-3):
    """Codazzi surface from random smooth f-curvature and random constant S^7 curvatures."""
    kap = Curvature.polynomial(rng.uniform(-1, 1, 3))
    ks = tuple(Curvature.constant(c) for c in rng.uniform(-1, 1, 3))
    g0, v0 = random_s7_initial(rng)
    return catalog.codazzi_surface(
        standard_s3_spec(kap), LegendreCurveSpec("S7", ks, g0, v0),
        domain=((-0.8, 0.8), (-0.8, 0.8)), dt=dt, label="Codazzi(random)",
    )


def codazzi_ode_residual(data) -> float:
    """Residual of V k1 = -2 k3, V k3 = 2 k1 - k4 m2, V k4 = k3 m2 in the adapted frame."""
    aV = data.frame_coords[2:]

    def Vd(x):
        return aV[0].value * x.d(0).value + aV[1].value * x.d(1).value

    k1, k3, k4, m2 = (data.coeffs[k] for k in ("k1", "k3", "k4", "m2"))
    res = [
        Vd(k1) + 2 * k3.value,
        Vd(k3) - 2 * k1.value + k4.value * m2.value,
        Vd(k4) - k3.value * m2.value,
    ]
    return float(max(np.abs(r).max() for r in res))


def codazzi_checks(rng: np.random.Generator, count: int = 5, n: int = 8, tol: Tolerances = TOL) -> list[Check]:
    out = []
    for k in range(count):
        imm = random_codazzi(rng)
        u, v = imm.grid(n)
        data = analyze(imm, u, v, tol)
        pr = predicate_report(imm, tol=tol, u=u, v=v)
        reps = [classify_coefficients(data.p[i], data.U.value[i], data.V.value[i]) for i in range(len(u))]
        type_r = max(claim_residual(rep, "Type2", {"cos_alpha": 0.0}) for rep in reps)
        out += [
            Check(f"Codazzi #{k} nabla h symmetric", "Codazzi family", pr["codazzi"].residual, 1e-7),
            Check(f"Codazzi #{k} flat", "Codazzi family", pr["flat"].residual, 1e-7),
            Check(f"Codazzi #{k} Type 2, cos alpha = 0", "Codazzi family", type_r, tol.classify),
            Check(f"Codazzi #{k} (k1, k3, k4) system", "Codazzi family", codazzi_ode_residual(data), 1e-6),
            Check(f"Codazzi #{k} parallel quaternionic structure", "Codazzi family",
                  catalog.codazzi_quaternionic_check(imm, u, v), 1e-7),
        ]
    zero = catalog.family_immersion(catalog.FamilyParams("Codazzi", {}))
    pr = predicate_report(zero, n=n, tol=tol)
    for key in ("parallel", "minimal", "flat"):
        out.append(Check(f"Codazzi kappa=0 {key}", "Clifford torus", pr[key].residual, tol.second_order))
    return out


SFF_KEYS = ("k1", "k2", "k3", "k4", "m1", "m2", "m3", "m4", "k", "m")


def parallel_checks(kappas=(0.5, 1.0, 2.0), n: int = 8, tol: Tolerances = TOL) -> list[Check]:
    out = []
    for kappa in kappas:
        imm = catalog.parallel_kappa(kappa)
        u, v = imm.grid(n)
        data = analyze(imm, u, v, tol)
        pr = predicate_report(imm, tol=tol, u=u, v=v)
        spread = max(float(np.std(data.coeffs[k].value)) for k in SFF_KEYS)
        k4 = float(np.abs(data.coeffs["k4"].value).min())
        out += [
            Check(f"ParallelKappa({kappa:g}) nabla h = 0", "parallel tori", pr["parallel"].residual, 1e-7),
            Check(f"ParallelKappa({kappa:g}) constant coefficients", "parallel tori", spread, 1e-7),
            _lower_bound(f"ParallelKappa({kappa:g}) |k4| > 0", "parallel tori", k4, 1e-3),
        ]
    # k4 = -kappa / sqrt(2) and m4 = 0 give |H| = |kappa| / (2 sqrt 2), which vanishes with kappa
    small = (1e-1, 1e-2, 1e-3)
    hs = [predicate_report(catalog.parallel_kappa(k), n=4, tol=tol)["minimal"].residual for k in small]
    dev = max(abs(h - k / (2 * math.sqrt(2))) for h, k in zip(hs, small))
    out.append(Check("ParallelKappa |H| = |kappa|/(2 sqrt 2) -> 0", "parallel tori", dev, tol.first_order))
    return out


SUITES = {"structure": structure_suite, "lie": lie_suite, "catalog": catalog_suite}


def run_suite(name: str, tol: Tolerances = TOL) -> list[Check]:
    if name == "all":
        return [c for key in SUITES for c in run_suite(key, tol)]
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(list(SUITES) + ['all'])}")
    return SUITES[name](tol)
