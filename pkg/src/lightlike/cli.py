"""Command-line front end: ``lightlike {curvature,check,transport,catalog} ...``.

Exit codes: 0 success / all checks pass, 1 a check failed, 2 usage or
manifest error, 3 numeric-domain error (singular metric, curve leaving the
domain, undefined values), 4 a check could not run because its
precondition does not hold.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import catalog
from .exprcore import (
    DEFAULT_POINTS,
    DEFAULT_SEED,
    DEFAULT_TOL,
    ERROR,
    FAIL,
    ZERO,
    DomainError,
    ExprError,
    SampleBox,
    zero_test,
)
from .fields import VectorFieldSpec
from .geometry import RANGE, ChartMetric, GeometryError, SingularMetricError
from .transport import CurveSpec, TransportError, rectangle_loop, transport
from .verify import CHECK_NAMES, Subject, UnknownCheckError, run_suite

MANIFEST_VERSION = 1

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN, EXIT_PRECONDITION = 0, 1, 2, 3, 4


class ManifestError(ValueError):
    pass


@dataclass(frozen=True)
class Manifest:
    subject: Subject
    tolerance: float
    points: int
    seed: int


_FAMILY_ARGS = {
    "minkowski_null": (),
    "pp_wave": ("f", "phi", "h"),
    "peres": ("f",),
    "plane_wave": ("g22", "g23", "g33"),
    "robinson_trautman": ("p", "m"),
}

_FAMILY_CHART = {
    "minkowski_null": catalog.NULL_CHART,
    "pp_wave": catalog.NULL_CHART,
    "peres": catalog.PERES_CHART,
    "plane_wave": catalog.PLANE_WAVE_CHART,
    "robinson_trautman": catalog.RT_CHART,
}


def _interval(name: str, value) -> tuple[float, float]:
    if not (isinstance(value, (list, tuple)) and len(value) == 2):
        raise ManifestError(f"box entry {name!r} must be [lo, hi]")
    lo, hi = (float(v) for v in value)
    if not lo < hi:
        raise ManifestError(f"box entry {name!r} must have lo < hi")
    return lo, hi


def _build_box(doc: dict, chart: Sequence[str], default_bounds: dict, seed: int,
               points: int) -> tuple[SampleBox, tuple[str, ...]]:
    bounds = dict(default_bounds)
    for name, value in (doc.get("box") or {}).items():
        if name not in chart:
            raise ManifestError(f"box names unknown coordinate {name!r}")
        bounds[name] = _interval(name, value)
    fixed = {}
    params = doc.get("parameters") or {}
    if not isinstance(params, dict):
        raise ManifestError("'parameters' must be an object")
    for name, value in params.items():
        if name in chart:
            raise ManifestError(f"parameter {name!r} clashes with a coordinate")
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            fixed[name] = float(value)
        else:
            bounds[name] = _interval(name, value)
    box = SampleBox(bounds, fixed=fixed, seed=seed, points=points)
    return box, tuple(sorted(params))


def _family_subject(doc: dict, name: str, seed: int, points: int) -> Subject:
    if name not in _FAMILY_ARGS:
        raise ManifestError(f"unknown family {name!r}; known: {', '.join(catalog.FAMILIES)}")
    args = doc.get("args") or {}
    unknown = set(args) - set(_FAMILY_ARGS[name])
    if unknown:
        raise ManifestError(f"family {name} has no argument(s) {sorted(unknown)}")
    chart = _FAMILY_CHART[name]
    if name == "robinson_trautman":
        defaults = {"rho": (0.5, 2.0), "sigma": (-1.0, 1.0), "xi": (-1.0, 1.0),
                    "eta": (-1.0, 1.0)}
    else:
        defaults = {c: (-1.0, 1.0) for c in chart}
    box, params = _build_box(doc, chart, defaults, seed, points)
    values = dict(box.fixed)
    if name == "minkowski_null":
        g = catalog.minkowski_null_chart().with_box(box)
        return Subject(g, (VectorFieldSpec.coordinate(g, 0),), family=name)
    if name == "pp_wave":
        p = catalog.PPWaveParams.parse(params=params, values=values, **args)
        sol = catalog.pp_wave_metric(p, box=box)
        return Subject(sol.metric, (sol.field,), family=name)
    if name == "peres":
        sol = catalog.peres_metric(args.get("f", "0"), params, values, box)
        return Subject(sol.metric, (sol.field,), family=name)
    if name == "plane_wave":
        sol = catalog.plane_wave_metric(params=params, values=values, box=box, **args)
        return Subject(sol.metric, (sol.field,), family=name)
    p = catalog.RTParams.parse(params=params, values=values, **args)
    sol = catalog.robinson_trautman_metric(p, box=box)
    return Subject(sol.metric, rt=p, family=name)


def _raw_subject(doc: dict, seed: int, points: int) -> Subject:
    chart = doc.get("chart")
    if not (isinstance(chart, list) and len(chart) == 4 and all(isinstance(c, str) for c in chart)):
        raise ManifestError("a raw metric needs 'chart': four coordinate names")
    rows = doc["metric"]
    if not (isinstance(rows, list) and len(rows) == 4):
        raise ManifestError("'metric' must have four rows")
    full = [[None] * 4 for _ in RANGE]
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) not in (i + 1, 4):
            raise ManifestError(f"metric row {i} must have {i + 1} (lower triangle) or 4 entries")
        for j, value in enumerate(row):
            full[i][j] = str(value)
    for i in RANGE:
        for j in RANGE:
            if full[i][j] is None:
                full[i][j] = full[j][i]
    box, params = _build_box(doc, chart, {c: (-1.0, 1.0) for c in chart}, seed, points)
    valid = {}
    for name, (lo, hi) in (doc.get("valid") or {}).items():
        valid[name] = (-np.inf if lo is None else float(lo), np.inf if hi is None else float(hi))
    g = ChartMetric(chart, full, params, box=box, name=doc.get("name", "manifest"),
                    valid=valid)
    return Subject(g, family="")


def load_manifest(source: str | dict, tolerance: float | None = None,
                  points: int | None = None, seed: int | None = None) -> Manifest:
    """Parse a manifest (path or already-loaded document); flags override its settings."""
    if isinstance(source, dict):
        doc = source
    else:
        try:
            with open(source, encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as err:
            raise ManifestError(f"cannot read manifest: {err}") from err
        except json.JSONDecodeError as err:
            raise ManifestError(f"manifest is not valid JSON: {err}") from err
    if not isinstance(doc, dict):
        raise ManifestError("manifest must be a JSON object")
    if doc.get("version") != MANIFEST_VERSION:
        raise ManifestError(f"unsupported manifest version {doc.get('version')!r}")
    tol = float(tolerance if tolerance is not None else doc.get("tolerance", DEFAULT_TOL))
    pts = int(points if points is not None else doc.get("points", DEFAULT_POINTS))
    sd = int(seed if seed is not None else doc.get("seed", DEFAULT_SEED))
    if pts < 1:
        raise ManifestError("points must be positive")
    try:
        if "family" in doc and "metric" in doc:
            raise ManifestError("give either 'family' or 'metric', not both")
        if "family" in doc:
            subject = _family_subject(doc, doc["family"], sd, pts)
        elif "metric" in doc:
            subject = _raw_subject(doc, sd, pts)
        else:
            raise ManifestError("manifest needs 'family' or 'metric'")
        extra = []
        fields = doc.get("fields") or {}
        if not isinstance(fields, dict):
            raise ManifestError("'fields' must map names to four component strings")
        for name in sorted(fields):
            extra.append(VectorFieldSpec([str(c) for c in fields[name]], subject.metric, name))
        if extra:
            subject = Subject(subject.metric, subject.fields + tuple(extra), subject.rt,
                              subject.family)
    except SingularMetricError:
        raise
    except (ExprError, catalog.CatalogError, GeometryError, TypeError, KeyError) as err:
        raise ManifestError(str(err)) from err
    except ValueError as err:
        if isinstance(err, ManifestError):
            raise
        raise ManifestError(str(err)) from err
    return Manifest(subject, tol, pts, sd)


# subcommands

def _independent_pairs():
    pairs = [(i, j) for i in RANGE for j in RANGE if i < j]
    return [a + b for n, a in enumerate(pairs) for b in pairs[n:]]


def curvature_listing(m: Manifest) -> dict[str, list[dict]]:
    """Structurally nonzero components with a sampled verdict on each."""
    g = m.subject.metric
    box = g.box

    def entry(label, e):
        rep = zero_test([e], box, m.tolerance, name=label)
        if rep.details.get("domain_error"):
            raise DomainError(rep.diagnostics, e)
        return {"component": label, "expr": str(e),
                "verdict": "zero" if rep.passed else "nonzero",
                "max_residual": rep.max_residual}

    gam, R, ric = g.christoffel, g.riemann, g.ricci
    out: dict[str, list[dict]] = {"christoffel": [], "riemann": [], "ricci": [], "scalar": []}
    for i in RANGE:
        for j in RANGE:
            for k in range(j, 4):
                if gam[i, j, k] is not ZERO:
                    out["christoffel"].append(entry(f"Gamma^{i}_{j}{k}", gam[i, j, k]))
    for idx in _independent_pairs():
        if R[idx] is not ZERO:
            out["riemann"].append(entry("R_" + "".join(map(str, idx)), R[idx]))
    for j in RANGE:
        for l in range(j, 4):
            if ric[j, l] is not ZERO:
                out["ricci"].append(entry(f"R_{j}{l}", ric[j, l]))
    if g.scalar is not ZERO:
        out["scalar"].append(entry("R", g.scalar))
    return out


def cmd_curvature(args) -> int:
    m = load_manifest(args.manifest, args.tol, args.points, args.seed)
    listing = curvature_listing(m)
    if args.json:
        print(json.dumps(listing, allow_nan=False))
        return EXIT_OK
    nonzero = [e for group in listing.values() for e in group if e["verdict"] == "nonzero"]
    if not nonzero:
        print("all components zero")
        return EXIT_OK
    for group, entries in listing.items():
        shown = [e for e in entries if e["verdict"] == "nonzero"]
        if not shown:
            continue
        print(f"{group}:")
        for e in shown:
            print(f"  {e['component']} = {e['expr']}    [nonzero, max residual "
                  f"{e['max_residual']:.3e} > tol {m.tolerance:g}]")
    hidden = sum(1 for group in listing.values() for e in group if e["verdict"] == "zero")
    if hidden:
        print(f"({hidden} structurally nonzero component(s) vanish numerically)")
    return EXIT_OK


def _exit_code(reports) -> int:
    if any(r.details.get("domain_error") for r in reports):
        return EXIT_DOMAIN
    if any(r.status == ERROR for r in reports):
        return EXIT_PRECONDITION
    if any(r.status == FAIL for r in reports):
        return EXIT_FAIL
    return EXIT_OK


def cmd_check(args) -> int:
    m = load_manifest(args.manifest, args.tol, args.points, args.seed)
    reports = run_suite(m.subject, args.suite, m.tolerance, threads=args.threads)
    for r in reports:
        if args.json:
            print(r.to_json())
        else:
            res = "n/a" if r.max_residual is None else f"{r.max_residual:.3e}"
            print(f"{r.check:24s} {r.status.upper():5s} residual={res} tol={r.tolerance:g} "
                  f"points={r.points} seed={r.seed}  {r.diagnostics}")
    if not reports:
        print("no applicable checks", file=sys.stderr)
    return _exit_code(reports)


def cmd_transport(args) -> int:
    m = load_manifest(args.manifest)
    try:
        if args.rectangle:
            center, axes, sides = args.rectangle
            curve = rectangle_loop([float(x) for x in center.split(",")],
                                   tuple(int(x) for x in axes.split(",")),
                                   tuple(float(x) for x in sides.split(",")))
        elif args.curve:
            curve = CurveSpec(args.curve, closed=args.closed)
        else:
            raise ManifestError("give --curve or --rectangle")
    except (ExprError, ValueError) as err:
        if isinstance(err, ManifestError):
            raise
        raise ManifestError(f"bad curve: {err}") from err
    result = transport(m.subject.metric, curve, args.vector, args.steps)
    print(json.dumps(result.to_dict(), allow_nan=False))
    return EXIT_OK


def cmd_catalog(args) -> int:
    schemas = catalog.family_schemas()
    if args.json:
        print(json.dumps(schemas, sort_keys=True))
        return EXIT_OK
    for name in sorted(schemas):
        s = schemas[name]
        print(f"{name}: chart ({', '.join(s['chart'])}), parallel field {s['field']}")
        for arg, desc in s["params"].items():
            print(f"    {arg}: {desc}")
    print("checks: " + ", ".join(CHECK_NAMES))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lightlike", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("manifest", help="JSON manifest path")
        p.add_argument("--points", type=int, default=None, help="sample points per check")
        p.add_argument("--tol", type=float, default=None, help="residual tolerance")
        p.add_argument("--seed", type=int, default=None, help="master seed")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("curvature", help="list nonzero curvature components")
    common(p)
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("check", help="run verification checks")
    common(p)
    p.add_argument("--suite", default="all",
                   help="'all' or comma-separated check names: " + ", ".join(CHECK_NAMES))
    p.add_argument("--threads", type=int, default=1, help="worker threads")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("transport", help="parallel-transport a vector along a curve")
    p.add_argument("manifest")
    p.add_argument("--curve", nargs=4, metavar="X", help="four coordinate expressions in s")
    p.add_argument("--closed", action="store_true", help="the curve is a closed loop")
    p.add_argument("--rectangle", nargs=3, metavar=("CENTER", "AXES", "SIDES"),
                   help="coordinate rectangle, e.g. 0,0,0,0 1,2 1,1")
    p.add_argument("--vector", nargs=4, type=float, required=True, metavar="V")
    p.add_argument("--steps", type=int, default=256)
    p.set_defaults(func=cmd_transport)

    p = sub.add_parser("catalog", help="list built-in metric families")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (ManifestError, UnknownCheckError) as err:
        msg = err.args[0] if isinstance(err, UnknownCheckError) else str(err)
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except (SingularMetricError, DomainError, TransportError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
