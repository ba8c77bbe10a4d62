"""Command-line front end.

    python3 -m nkcp3 verify --suite all --tol second_order=1e-6
    python3 -m nkcp3 classify --family f3 --mu 0.5 --nu 0.7
    python3 -m nkcp3 generate codazzi spec.ini --grid 16x16 --out mesh.csv
    python3 -m nkcp3 generate legendre --space s7 --kappas 0,1,0

Exit status: 0 when every check passes, 1 when a check or a computation
fails, 2 for usage and parameter errors.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import re
import sys
import time
from dataclasses import asdict

import numpy as np

from . import __version__, catalog, lie
from .config import TOL, Tolerances
from .legendre import Curvature, IntegrationError, LegendreCurveSpec, constraint_drift, legendre_integrate
from .suites import SUITES, Check, classify_grid, run_suite
from .surface import (
    GeometryError,
    analyze,
    codazzi_asymmetry,
    gauss_curvature_intrinsic,
    predicate_report,
    totally_real_defect,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

FAMILY_ALIASES = {
    **{f.lower(): f for f in catalog.FAMILIES},
    "clifford": "CliffordTorus",
    "flat": "FlatMinimalCP2",
    "flatminimal": "FlatMinimalCP2",
    "parallel": "ParallelKappa",
}
SCALARS = ("mu", "nu", "rho", "sigma", "kappa", "kappa1", "kappa2", "kappa3", "c")
MESH_HEADER = ["u", "v", *(f"{part}{k}" for k in range(1, 5) for part in ("re_z", "im_z")),
               "totally_real_defect", "gauss_curvature", "codazzi_asymmetry"]
UNIT_TOL = 1e-9


class UsageError(Exception):
    pass


class SpecError(UsageError):
    def __init__(self, path, line, msg):
        where = f"{path}:{line}" if line else str(path)
        super().__init__(f"{where}: {msg}")


# reports ------------------------------------------------------------------------------


def build_report(command: list[str], tol: Tolerances, records: list[Check], extra: dict | None = None,
                 seconds: float = 0.0) -> dict:
    recs = [c.record() for c in records]
    doc = {
        "version": __version__,
        "command": {"argv": list(command), "tolerances": asdict(tol)},
        "records": recs,
    }
    doc.update(extra or {})
    n_pass = sum(r["pass"] for r in recs)
    doc["summary"] = {"total": len(recs), "passed": n_pass, "failed": len(recs) - n_pass}
    doc["timing"] = {"seconds": round(seconds, 3)}
    return doc


def dump_report(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def load_report(text: str) -> dict:
    return json.loads(text)


def records_csv(records: list[Check]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "anchor", "residual", "tolerance", "pass"])
    for c in records:
        w.writerow([c.name, c.anchor, repr(float(c.residual)), repr(float(c.tolerance)), c.passed])
    return buf.getvalue()


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# argument helpers ---------------------------------------------------------------------


def parse_tol(items: list[str] | None) -> Tolerances:
    tiers = {}
    for item in items or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--tol expects tier=value, got {item!r}")
        try:
            tiers[key.strip()] = float(val)
        except ValueError:
            raise UsageError(f"--tol {key}: {val!r} is not a number") from None
    try:
        return TOL.override(**tiers)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None


def parse_grid(text: str | None, default=(12, 12), square: bool = True) -> tuple[int, int]:
    """'N' or 'NxM'; a bare N means N x N, or N x 1 with square=False."""
    if text is None:
        return default
    m = re.fullmatch(r"\s*(\d+)\s*(?:[xX]\s*(\d+))?\s*", text)
    if not m:
        raise UsageError(f"--grid expects N or NxM, got {text!r}")
    n = int(m.group(1))
    k = int(m.group(2)) if m.group(2) else (n if square else 1)
    if n < 1 or k < 1:
        raise UsageError("--grid sizes must be positive")
    return n, k


def parse_floats(text: str, what: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"{what}: cannot parse {text!r} as comma-separated numbers") from None


def family_name(text: str) -> str:
    key = text.replace("-", "").replace("_", "").lower()
    if key not in FAMILY_ALIASES:
        raise UsageError(f"unknown family {text!r}; choose from {', '.join(catalog.FAMILIES)}")
    return FAMILY_ALIASES[key]


def family_params(args) -> catalog.FamilyParams:
    scalars = {k: getattr(args, k) for k in SCALARS if getattr(args, k, None) is not None}
    try:
        return catalog.FamilyParams(family_name(args.family), scalars)
    except catalog.ParameterError as exc:
        raise UsageError(str(exc)) from None


# spec files ---------------------------------------------------------------------------


class SpecFile:
    """Flat key = value file with [section] headers; remembers line numbers."""

    def __init__(self, text: str, path: str = "<spec>"):
        self.path = path
        self.cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
        try:
            self.cp.read_string(text, source=path)
        except configparser.ParsingError as exc:
            line = exc.errors[0][0] if exc.errors else None
            raise SpecError(path, line, "malformed line (expected key = value)") from None
        except configparser.Error as exc:
            line = getattr(exc, "lineno", None)
            raise SpecError(path, line, exc.message.splitlines()[0]) from None
        self.lines = {}
        section = None
        for no, raw in enumerate(text.splitlines(), 1):
            s = raw.strip()
            head = re.match(r"\[([^\]]+)\]", s)
            if head:
                section = head.group(1).strip()
            elif "=" in s and section is not None:
                self.lines[(section, s.split("=", 1)[0].strip().lower())] = no

    @classmethod
    def read(cls, path: str | None) -> "SpecFile":
        if path is None:
            return cls("", "<defaults>")
        try:
            with open(path) as fh:
                return cls(fh.read(), path)
        except OSError as exc:
            raise UsageError(f"cannot read spec file {path}: {exc.strerror}") from None

    def has(self, section: str, key: str | None = None) -> bool:
        if key is None:
            return self.cp.has_section(section)
        return self.cp.has_option(section, key)

    def raw(self, section: str, key: str, default=None):
        return self.cp.get(section, key, fallback=default)

    def _fail(self, section, key, msg):
        raise SpecError(self.path, self.lines.get((section, key.lower())), f"[{section}] {key}: {msg}")

    def number(self, section: str, key: str, default: float | None = None) -> float:
        text = self.raw(section, key)
        if text is None:
            if default is None:
                self._fail(section, key, "missing")
            return default
        try:
            return float(text)
        except ValueError:
            self._fail(section, key, f"{text!r} is not a number")

    def interval(self, section: str, key: str, default):
        text = self.raw(section, key)
        if text is None:
            return default
        try:
            a, b = (float(x) for x in text.split(","))
        except ValueError:
            self._fail(section, key, f"expected 'a, b', got {text!r}")
        if not a < b:
            self._fail(section, key, "interval must satisfy a < b")
        return (a, b)

    def vector(self, section: str, key: str, default, n: int) -> np.ndarray:
        text = self.raw(section, key)
        if text is None:
            return np.asarray(default, complex)
        try:
            vals = [complex(x.replace(" ", "")) for x in text.split(",")]
        except ValueError:
            self._fail(section, key, f"cannot parse {text!r} as complex numbers")
        if len(vals) != n:
            self._fail(section, key, f"expected {n} components, got {len(vals)}")
        return np.array(vals, complex)

    def curvature(self, section: str, key: str, default: float = 0.0) -> Curvature:
        """A constant, 'poly: c0, c1, ...' or 'table: t:k, t:k, ...'."""
        text = self.raw(section, key)
        if text is None:
            return Curvature.constant(default)
        kind, sep, body = text.partition(":")
        try:
            if not sep:
                return Curvature.constant(float(text))
            kind = kind.strip().lower()
            if kind == "poly":
                return Curvature.polynomial([float(x) for x in body.split(",")])
            if kind == "table":
                pts = [tuple(float(y) for y in x.split(":")) for x in body.split(",")]
                if len(pts) < 4 or any(len(p) != 2 for p in pts):
                    raise ValueError
                t, k = zip(*sorted(pts))
                return Curvature.samples(t, k)
        except ValueError:
            pass
        self._fail(section, key, f"expected a constant, 'poly: ...' or 'table: t:k, ...' (at least 4 points), got {text!r}")


def codazzi_from_spec(spec: SpecFile):
    f_spec = LegendreCurveSpec(
        "S3", (spec.curvature("f", "kappa"),), np.array([1, 0], complex), np.array([0, 1], complex), label="f"
    )
    ks = tuple(spec.curvature("gamma", f"kappa{i}") for i in (1, 2, 3))
    g0 = spec.vector("gamma", "point", [1, 0, 0, 0], 4)
    v0 = spec.vector("gamma", "velocity", [0, 1, 0, 0], 4)
    try:
        g_spec = LegendreCurveSpec("S7", ks, g0, v0, label="gamma")
    except ValueError as exc:
        raise SpecError(spec.path, spec.lines.get(("gamma", "point")), str(exc)) from None
    domain = (spec.interval("domain", "u", (-1.0, 1.0)), spec.interval("domain", "v", (-1.0, 1.0)))
    dt = spec.number("integrator", "dt", 1e-3)
    return catalog.codazzi_surface(f_spec, g_spec, domain=domain, dt=dt)


def _element(spec: SpecFile, key: str) -> lie.Sp2Element:
    text = spec.raw("orbit", key)
    coords = np.zeros(len(lie.NAMES))
    for item in text.split(","):
        name, sep, val = item.partition(":")
        name = name.strip()
        if not sep or name not in lie.NAMES:
            spec._fail("orbit", key, f"expected name:coefficient with names {', '.join(lie.NAMES)}")
        try:
            coords[lie.NAMES.index(name)] += float(val)
        except ValueError:
            spec._fail("orbit", key, f"{val!r} is not a number")
    B = lie.basis()
    return sum((c * b for c, b in zip(coords[1:], B[1:])), coords[0] * B[0])


def orbit_from_spec(spec: SpecFile, args):
    if spec.has("orbit", "x") or spec.has("orbit", "y"):
        X, Y = _element(spec, "X"), _element(spec, "Y")
        p0 = spec.vector("orbit", "p0", lie.P0, 4)
        domain = (spec.interval("domain", "u", catalog.TORUS[0]), spec.interval("domain", "v", catalog.TORUS[1]))
        comm = lie.bracket(X, Y).norm()
        if comm > 1e-10:
            raise SpecError(spec.path, spec.lines.get(("orbit", "y")), f"X and Y must commute (|[X, Y]| = {comm:.2e})")
        return lie.orbit_surface(X, Y, p0=p0, domain=domain)
    scalars = {k: spec.number("orbit", k) for k in ("nu", "rho", "sigma") if spec.has("orbit", k)}
    scalars.update({k: getattr(args, k) for k in ("nu", "rho", "sigma") if getattr(args, k, None) is not None})
    try:
        return catalog.family_immersion(catalog.FamilyParams("F4", scalars))
    except catalog.ParameterError as exc:
        raise UsageError(str(exc)) from None


# meshes -------------------------------------------------------------------------------


def mesh_rows(imm, n: int, m: int):
    u, v = imm.grid(n, m)
    pts = imm(u, v)
    data = analyze(imm, u, v, require_totally_real=False)
    cols = [
        u, v,
        *(f(pts[:, k]) for k in range(4) for f in (np.real, np.imag)),
        totally_real_defect(imm, u, v),
        gauss_curvature_intrinsic(data),
        codazzi_asymmetry(data),
    ]
    return np.column_stack(cols), pts


def mesh_csv(rows: np.ndarray, header=MESH_HEADER) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(x)) for x in row])
    return buf.getvalue()


# commands ----------------------------------------------------------------------------


def cmd_verify(args) -> int:
    tol = parse_tol(args.tol)
    t0 = time.perf_counter()
    records = run_suite(args.suite, tol)
    seconds = time.perf_counter() - t0
    if args.format == "csv":
        _emit(records_csv(records), args.out)
    else:
        _emit(dump_report(build_report(args.argv, tol, records, {"suite": args.suite}, seconds)), args.out)
    failed = [c for c in records if not c.passed]
    for c in failed:
        print(f"FAIL {c.name}: residual {c.residual:.3e} > {c.tolerance:.1e}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def _aggregate(reports) -> dict:
    tags = sorted({r.type_tag for r in reports})
    out = {"type": tags[0] if len(tags) == 1 else "mixed", "types_seen": tags,
           "fit_residual": max(r.residual for r in reports)}
    if len(tags) == 1 and reports[0].params:
        keys = reports[0].params
        vals = {k: np.array([r.params[k] for r in reports]) for k in keys}
        out["params"] = {k: float(np.mean(x)) for k, x in vals.items()}
        out["param_spread"] = {k: float(np.ptp(x)) for k, x in vals.items()}
        if "alpha" in keys:
            a = vals["alpha"]
            out["params"]["cos_alpha"] = float(np.mean(np.cos(a)))
            out["params"]["sin_alpha"] = float(np.mean(np.sin(a)))
    return out


def cmd_classify(args) -> int:
    tol = parse_tol(args.tol)
    n, m = parse_grid(args.grid, (8, 8))
    params = family_params(args)
    t0 = time.perf_counter()
    imm = catalog.family_immersion(params)
    u, v = imm.grid(n, m)
    records = [Check("totally real defect", "totally real surfaces",
                     float(totally_real_defect(imm, u, v).max()), tol.first_order)]
    if not records[0].passed:
        classification = {"type": "not totally real"}
    else:
        classification = _aggregate(classify_grid(imm, n, tol, m))
    preds = predicate_report(imm, tol=tol, u=u, v=v)
    extra = {
        "family": params.family,
        "params": {k: float(x) for k, x in sorted(params.scalars.items())},
        "grid": [n, m],
        "classification": classification,
        "predicates": {k: {"value": p.value, "residual": p.residual, "tolerance": p.tolerance}
                       for k, p in preds.items()},
    }
    seconds = time.perf_counter() - t0
    if args.format == "csv":
        rows = [Check(f"predicate {k}", params.family, p.residual, p.tolerance) for k, p in preds.items()]
        _emit(records_csv(records + rows), args.out)
    else:
        _emit(dump_report(build_report(args.argv, tol, records, extra, seconds)), args.out)
    held = [k for k, p in preds.items() if p.value]
    print(f"{params.family}: {classification['type']}; holds: {', '.join(held) or 'none'}", file=sys.stderr)
    return EXIT_OK if all(c.passed for c in records) else EXIT_FAIL


def _generate_legendre(args, spec: SpecFile) -> tuple[str, list[str]]:
    space = (args.space or spec.raw("curve", "space", "s3")).upper()
    if space not in ("S3", "S7"):
        raise UsageError(f"--space must be s3 or s7, got {space.lower()!r}")
    dim = 2 if space == "S3" else 4
    count = 1 if space == "S3" else 3
    if args.kappas is not None:
        vals = parse_floats(args.kappas, "--kappas")
        if len(vals) != count:
            raise UsageError(f"{space} takes {count} curvature value(s), got {len(vals)}")
        curv = tuple(Curvature.constant(k) for k in vals)
    elif space == "S3":
        curv = (spec.curvature("curve", "kappa"),)
    else:
        curv = tuple(spec.curvature("curve", f"kappa{i}") for i in (1, 2, 3))
    g0 = spec.vector("curve", "point", np.eye(dim)[0], dim)
    v0 = spec.vector("curve", "velocity", np.eye(dim)[1], dim)
    try:
        lspec = LegendreCurveSpec(space, curv, g0, v0)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    n, m = parse_grid(args.grid, (200, 1), square=False)
    length = spec.number("curve", "length", 2 * math.pi)
    dt = spec.number("integrator", "dt", 1e-3)
    t = np.linspace(0.0, length, n * m)
    res = legendre_integrate(lspec, t, dt=dt, order=1)
    g, dg = res.derivs[0], res.derivs[1]
    drift = np.array([constraint_drift(space, a, b) for a, b in zip(g, dg)])
    rows = np.column_stack([t, *(f(g[:, k]) for k in range(dim) for f in (np.real, np.imag)), drift])
    header = ["t", *(f"{part}{k}" for k in range(1, dim + 1) for part in ("re_z", "im_z")), "constraint_drift"]
    summary = [f"{space} Legendre curve: {len(t)} samples on [0, {length:g}]",
               f"max constraint drift {drift.max():.2e}, rejected steps {res.rejected}"]
    if drift.max() > UNIT_TOL:
        raise GeometryError(f"constraint drift {drift.max():.2e} exceeds {UNIT_TOL:g}")
    return mesh_csv(rows, header), summary


def cmd_generate(args) -> int:
    spec = SpecFile.read(args.spec)
    if args.kind == "legendre":
        text, summary = _generate_legendre(args, spec)
    else:
        imm = codazzi_from_spec(spec) if args.kind == "codazzi" else orbit_from_spec(spec, args)
        n, m = parse_grid(args.grid, (16, 16))
        rows, pts = mesh_rows(imm, n, m)
        unit = float(np.abs(np.linalg.norm(pts, axis=-1) - 1).max())
        if unit > UNIT_TOL:
            raise GeometryError(f"mesh points leave the unit sphere (max |F|-1 = {unit:.2e})")
        text = mesh_csv(rows)
        preds = predicate_report(imm, tol=TOL, u=rows[:, 0], v=rows[:, 1])
        summary = [
            f"{imm.label}: {n}x{m} mesh, max ||F|-1| {unit:.1e}",
            f"max totally real defect {rows[:, 10].max():.2e}, max |K| {np.abs(rows[:, 11]).max():.2e}, "
            f"max Codazzi asymmetry {rows[:, 12].max():.2e}",
            "holds: " + (", ".join(k for k, p in preds.items() if p.value) or "none"),
        ]
    _emit(text, args.out)
    for line in summary:
        print(line, file=sys.stderr)
    return EXIT_OK


# parser ---------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nkcp3", description="Totally real surfaces in nearly Kähler CP^3.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p, fmt=True):
        p.add_argument("--tol", action="append", metavar="TIER=VALUE",
                       help="override a tolerance tier (algebraic, first_order, second_order, classify)")
        p.add_argument("--out", help="write to this file instead of stdout")
        if fmt:
            p.add_argument("--format", choices=("report", "csv"), default="report")

    p = sub.add_parser("verify", help="run an invariant suite")
    p.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify", help="classify a catalog surface")
    p.add_argument("--family", required=True, help=", ".join(catalog.FAMILIES))
    for name in SCALARS:
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--grid", help="N or NxM sample grid (default 8x8)")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("generate", help="export a mesh or curve as CSV")
    p.add_argument("kind", choices=("codazzi", "orbit", "legendre"))
    p.add_argument("spec", nargs="?", help="key = value spec file with [sections]")
    p.add_argument("--grid", help="NxM mesh size, or N samples for a curve")
    p.add_argument("--space", type=str.lower, choices=("s3", "s7"))
    p.add_argument("--kappas", help="comma-separated constant curvatures for a Legendre curve")
    for name in ("nu", "rho", "sigma"):
        p.add_argument(f"--{name}", type=float, help="Family 4 parameter for an orbit")
    p.add_argument("--out", help="write to this file instead of stdout")
    p.set_defaults(func=cmd_generate)
    return ap


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    args.argv = argv
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"nkcp3: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GeometryError, IntegrationError) as exc:
        print(f"nkcp3: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
