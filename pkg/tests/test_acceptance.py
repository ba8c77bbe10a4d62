"""One test per acceptance criterion, at the stated tolerances.

Each test prints a PASS/FAIL line (collected in the terminal summary too).
"""

import math
import time

import numpy as np

from conftest import ACCEPTANCE_LINES
from nkcp3 import catalog, lie
from nkcp3.config import TOL, seed
from nkcp3.suites import (
    MEAN_CURVATURE_CASES,
    TYPE_CLAIMS,
    catalog_instances,
    claim_residual,
    classify_grid,
    codazzi_checks,
    curvature_symmetry_residual,
    family2_scan,
    frame_table_residual,
    holonomy_residual,
    killing_oracle,
    parallel_checks,
    structure_suite,
)
from nkcp3.surface import (
    analyze,
    gauss_curvature_extrinsic,
    gauss_curvature_intrinsic,
    predicate_report,
    totally_real_defect,
)


def verdict(number: int, title: str, ok: bool, detail: str):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d} {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_c01_structure_identities(rng):
    t0 = time.perf_counter()
    checks = structure_suite(TOL, rng)
    elapsed = time.perf_counter() - t0
    ident = [c for c in checks if "100 configurations" in c.name]
    worst = max(c.residual for c in ident)
    ok = len(ident) == 4 and worst <= 1e-8 and elapsed < 10
    verdict(1, "structure identities", ok, f"4 identities x 100 configs, max residual {worst:.2e} <= 1e-8, "
            f"suite runtime {elapsed:.2f} s < 10 s")


def test_c02_frame_table(rng):
    r = frame_table_residual(rng, n=50)
    verdict(2, "adapted frame G table", r <= 1e-8, f"15 products x 50 frames, max residual {r:.2e} <= 1e-8")


def test_c03_curvature(rng):
    sym = curvature_symmetry_residual(rng, n=100)
    hol = holonomy_residual(rng, n=20)
    verdict(3, "curvature", sym <= 1e-10 and hol <= 1e-5,
            f"symmetries {sym:.2e} <= 1e-10, holonomy over 20 loops {hol:.2e} <= 1e-5")


def test_c04_lie():
    B = lie.basis()
    gram = np.array([[killing_oracle(a.matrix, b.matrix) for b in B] for a in B])
    orth = float(np.abs(gram - np.eye(10)).max())
    red = max(lie.project_h(lie.bracket(a, b)).norm() for a in B[:4] for b in B[4:])
    table = max(e.residual for e in lie.jp_action_check())
    su2 = max(max(lie.verify_su2_case(*lie.su2_ansatz(**s)).residuals.values()) for s in lie.SU2_SOLUTIONS)
    ok = orth <= TOL.algebraic and red <= 1e-13 and table <= 1e-8 and su2 <= 1e-10
    verdict(4, "Lie suite", ok, f"orthonormality {orth:.1e}, reductivity {red:.1e} <= 1e-13, "
            f"J/P tables {table:.1e} <= 1e-8, su(2) closure {su2:.1e} <= 1e-10")


def test_c05_catalog_regression():
    tr = 0.0
    for _, imm in catalog_instances():
        tr = max(tr, float(totally_real_defect(imm, *imm.grid(12)).max()))
    types = 0.0
    for fam, params, tag, expected in TYPE_CLAIMS:
        reps = classify_grid(catalog.family_immersion(catalog.FamilyParams(fam, params)))
        types = max(types, max(claim_residual(r, tag, expected) for r in reps))
    mc = max(catalog.mean_curvature_table(f, p).residual for f, p in MEAN_CURVATURE_CASES if f != "F4")
    ok = tr <= 1e-9 and types <= TOL.classify and mc <= 1e-8
    verdict(5, "catalog regression", ok, f"totally real {tr:.1e} <= 1e-9, {len(TYPE_CLAIMS)} type claims "
            f"within {types:.1e}, F1-F3 mean curvature lifts {mc:.1e} <= 1e-8")


def test_c06_minimal_root():
    root = catalog.minimal_root_find()
    closed = math.sqrt(1 + math.sqrt(17)) / (2 * math.sqrt(2))
    nus, hs = family2_scan(0.05, 3.0, 0.01)
    ok = abs(root - closed) <= 1e-9 and hs.min() > 1e-4 and catalog.family2_H_norm(closed) < 1e-9
    verdict(6, "Family 2 minimality root", ok,
            f"|root - closed form| {abs(root - closed):.1e} <= 1e-9, min |H| over {len(nus)} grid values "
            f"{hs.min():.2e} > 1e-4 (at nu = {nus[hs.argmin()]:.2f})")


def test_c07_sphere():
    imm = catalog.sphere()
    u, v = imm.grid(12)
    K = gauss_curvature_intrinsic(analyze(imm, u, v))
    pr = predicate_report(imm, u=u, v=v)
    dk = float(np.abs(K - 3).max())
    umb, kg, kac = (pr[k].residual for k in ("totally_umbilical", "kahler_totally_geodesic", "kahler_almost_complex"))
    ok = dk <= 1e-6 and max(umb, kg, kac) <= 1e-8
    verdict(7, "sphere", ok, f"|K - 3| {dk:.1e} <= 1e-6, umbilicity {umb:.1e}, Kähler sff {kg:.1e}, "
            f"Kähler almost complex {kac:.1e} (all <= 1e-8)")


def test_c08_codazzi():
    checks = codazzi_checks(np.random.default_rng(seed()), count=5)
    per = [c for c in checks if c.name.startswith("Codazzi #")]
    zero = predicate_report(catalog.family_immersion(catalog.FamilyParams("Codazzi", {})), n=8)
    cliff = predicate_report(catalog.clifford_torus(), n=8)
    same = {k: p.value for k, p in zero.items()} == {k: p.value for k, p in cliff.items()}
    worst = {key: max(c.residual for c in per if key in c.name)
             for key in ("nabla h", "flat", "cos alpha", "system")}
    ok = all(c.passed for c in per) and len(per) == 25 and same
    verdict(8, "Codazzi generator", ok, f"5 random specs: asymmetry {worst['nabla h']:.1e}, K {worst['flat']:.1e}, "
            f"|cos alpha| {worst['cos alpha']:.1e}, ODE {worst['system']:.1e}; kappa=0 predicates match Clifford: {same}")


def test_c09_parallel():
    checks = parallel_checks((0.5, 1.0, 2.0))
    nab = max(c.residual for c in checks if "nabla h" in c.name)
    spread = max(c.residual for c in checks if "constant" in c.name)
    k4 = [c for c in checks if "|k4|" in c.name]
    limit = [c for c in checks if "-> 0" in c.name][0]
    ok = all(c.passed for c in checks)
    verdict(9, "parallel tori", ok, f"|nabla h| {nab:.1e} <= 1e-7, coefficient std {spread:.1e} <= 1e-7, "
            f"k4 nonzero in {sum(c.passed for c in k4)}/3, |H| = |kappa|/(2 sqrt 2) -> 0 within {limit.residual:.1e}")


def test_c10_gauss_equation():
    worst, labels = 0.0, []
    for label, imm in catalog_instances():
        data = analyze(imm, *imm.grid(12))
        worst = max(worst, float(np.abs(gauss_curvature_intrinsic(data) - gauss_curvature_extrinsic(data)).max()))
        labels.append(label)
    verdict(10, "Gauss equation", worst <= 1e-5, f"{len(labels)} catalog surfaces, max |K_int - K_ext| {worst:.1e} <= 1e-5")
