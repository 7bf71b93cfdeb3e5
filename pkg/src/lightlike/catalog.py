"""Constructors for the metric families admitting (or failing to admit) null parallel fields.

Charts used by the constructors:

==================  =============================  =====================
family              chart (x0, x1, x2, x3)          distinguished field
==================  =============================  =====================
minkowski_null      x0, x1, x2, x3                 d/dx0
pp_wave             x0, x1, x2, x3                 d/dx0
peres               t, x, y, z                     d/dt
plane_wave          eta, x1, x2, x3                d/dx1
robinson_trautman   rho, sigma, xi, eta            none
==================  =============================  =====================
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from .exprcore import (
    ONE,
    ZERO,
    Const,
    Evaluator,
    Expr,
    SampleBox,
    Sym,
    add,
    as_expr,
    diff,
    func,
    is_probably_zero,
    mul,
    parse,
    power,
    subs,
)
from .fields import VectorFieldSpec
from .geometry import RANGE, ChartMetric

NULL_CHART = ("x0", "x1", "x2", "x3")
PERES_CHART = ("t", "x", "y", "z")
PLANE_WAVE_CHART = ("eta", "x1", "x2", "x3")
RT_CHART = ("rho", "sigma", "xi", "eta")

FAMILIES = ("minkowski_null", "pp_wave", "peres", "plane_wave", "robinson_trautman")


class CatalogError(ValueError):
    pass


class Solution(NamedTuple):
    metric: ChartMetric
    field: VectorFieldSpec


class RTSolution(NamedTuple):
    metric: ChartMetric
    H: Expr
    K: Expr


def _expr(value, chart, params) -> Expr:
    if isinstance(value, str):
        return parse(value, chart, params)
    return as_expr(value)


def _box(chart, values: Mapping[str, float] | None, bounds=None, keep=(),
         seed: int = 42, points: int = 200) -> SampleBox:
    bounds = dict(bounds or {c: (-1.0, 1.0) for c in chart})
    return SampleBox(bounds, fixed=dict(values or {}), keep=tuple(keep), seed=seed, points=points)


def _null_frame(g11, g12, g13, g22=-1, g23=0, g33=-1):
    return [[ZERO, ONE, ZERO, ZERO],
            [ONE, g11, g12, g13],
            [ZERO, g12, as_expr(g22), as_expr(g23)],
            [ZERO, g13, as_expr(g23), as_expr(g33)]]


def minkowski(chart: Sequence[str] = PERES_CHART) -> ChartMetric:
    """diag(1, -1, -1, -1) on an inertial chart."""
    m = [[ZERO] * 4 for _ in RANGE]
    for i, s in enumerate((1, -1, -1, -1)):
        m[i][i] = Const(s)
    return ChartMetric(chart, m, name="minkowski")


def minkowski_null_chart() -> ChartMetric:
    """ds^2 = 2 dx0 dx1 - dx2^2 - dx3^2."""
    return ChartMetric(NULL_CHART, _null_frame(ZERO, ZERO, ZERO), name="minkowski_null")


def null_coordinate_map() -> dict[str, Expr]:
    """Inertial coordinates as functions of the null chart.

    Inverse of x0 = (t + x)/sqrt 2, x1 = (t - x)/sqrt 2, which the null
    chart's coordinate change intends (the printed source repeats x0 on the
    left of the second relation; the second one is read as x1).
    """
    x0, x1 = Sym("x0"), Sym("x1")
    r = power(func("sqrt", Const(2)), -1)
    return {"t": mul(r, add(x0, x1)), "x": mul(r, add(x0, mul(Const(-1), x1))),
            "y": Sym("x2"), "z": Sym("x3")}


def pullback(metric: ChartMetric, new_chart: Sequence[str], mapping: Mapping[str, Expr],
             **kw) -> ChartMetric:
    """Metric components in ``new_chart`` given old coordinates as functions of new ones."""
    mapping = {k: as_expr(v) for k, v in mapping.items()}
    if set(mapping) != set(metric.chart):
        raise CatalogError("mapping must give every old coordinate")
    new_chart = tuple(new_chart)
    # rebuild expressions so that the new coordinates are marked as coordinates
    mapping = {k: subs(v, {c: Sym(c, True) for c in new_chart}) for k, v in mapping.items()}
    g_old = [[subs(metric.g[i, j], mapping) for j in RANGE] for i in RANGE]
    jac = [[diff(mapping[metric.chart[i]], new_chart[a]) for a in RANGE] for i in RANGE]
    out = [[None] * 4 for _ in RANGE]
    for a in RANGE:
        for b in range(a, 4):
            terms = [mul(g_old[i][j], jac[i][a], jac[j][b]) for i in RANGE for j in RANGE
                     if g_old[i][j] is not ZERO and jac[i][a] is not ZERO
                     and jac[j][b] is not ZERO]
            out[a][b] = out[b][a] = add(*terms)
    kw.setdefault("box", metric.box)
    return ChartMetric(new_chart, out, metric.params, **kw)


# pp-waves

def harmonic_polynomial(k: int, coefficient="1", part: str = "re",
                        chart: Sequence[str] = NULL_CHART, params: Sequence[str] = ()) -> Expr:
    """Re or Im of c(x1) (x2 + i x3)^k, harmonic in (x2, x3)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if part not in ("re", "im"):
        raise ValueError("part must be 're' or 'im'")
    c = _expr(coefficient, chart, params)
    if c.free_symbols & {chart[0], chart[2], chart[3]}:
        raise CatalogError("the coefficient may depend on x1 only")
    x, y = Sym(chart[2]), Sym(chart[3])
    terms = []
    for j in range(k + 1):
        # binomial term C(k, j) x^(k-j) (i y)^j; i^j is real for even j
        if (j % 2 == 0) != (part == "re"):
            continue
        sign = (-1) ** (j // 2)
        binom = Const(sign * comb(k, j))
        terms.append(mul(binom, power(x, k - j), power(y, j)))
    return mul(c, add(*terms))


@dataclass(frozen=True)
class PPWaveParams:
    """f(x1, x2, x3) arbitrary, phi(x1), h(x1, x2, x3) harmonic in (x2, x3)."""

    f: Expr = ZERO
    phi: Expr = ZERO
    h: Expr = ZERO
    params: tuple[str, ...] = ()
    values: Mapping[str, float] = field(default_factory=dict)

    @classmethod
    def parse(cls, f="0", phi="0", h="0", params: Sequence[str] = (),
              values: Mapping[str, float] | None = None) -> "PPWaveParams":
        params = tuple(params) or tuple(sorted(values or {}))
        return cls(_expr(f, NULL_CHART, params), _expr(phi, NULL_CHART, params),
                   _expr(h, NULL_CHART, params), params, dict(values or {}))

    def validate(self, box: SampleBox) -> None:
        for name, e in (("f", self.f), ("h", self.h)):
            if "x0" in e.free_symbols:
                raise CatalogError(f"{name} must not depend on x0")
        if self.phi.free_symbols & {"x0", "x2", "x3"}:
            raise CatalogError("phi must depend on x1 only")
        lap = add(diff(diff(self.h, "x2"), "x2"), diff(diff(self.h, "x3"), "x3"))
        report = is_probably_zero(lap, box, name="harmonicity")
        if not report.passed:
            raise CatalogError(f"h is not harmonic in (x2, x3): residual {report.max_residual}")


def pp_wave_components(f: Expr, phi: Expr, h: Expr) -> tuple[Expr, Expr, Expr]:
    """(g11, g12, g13) of the general vacuum solution in standard coordinates."""
    x2 = Sym("x2")
    g12 = diff(f, "x2")
    g13 = add(diff(f, "x3"), mul(x2, phi))
    g11 = add(mul(Const(2), diff(f, "x1")), h,
              mul(Const(Fraction(-1, 2)), power(x2, 2), power(phi, 2)))
    return g11, g12, g13


def pp_wave_metric(params: PPWaveParams | None = None, *, f="0", phi="0", h="0",
                   values: Mapping[str, float] | None = None, box: SampleBox | None = None,
                   check: bool = True) -> Solution:
    """Vacuum metric with null parallel field d/dx0; phi = 0 gives the untwisted branch."""
    if params is None:
        params = PPWaveParams.parse(f, phi, h, values=values)
    box = box or _box(NULL_CHART, params.values)
    if check:
        params.validate(box)
    g11, g12, g13 = pp_wave_components(params.f, params.phi, params.h)
    metric = ChartMetric(NULL_CHART, _null_frame(g11, g12, g13), params.params, box=box,
                         name="pp_wave")
    return Solution(metric, VectorFieldSpec.coordinate(metric, 0))


solve_general = pp_wave_metric


def standard_frame_metric(g11, g12, g13, params: Sequence[str] = (),
                          values: Mapping[str, float] | None = None,
                          box: SampleBox | None = None, name: str = "standard_frame") -> ChartMetric:
    """Adapted metric with g22 = g33 = -1, g23 = 0 and free g11, g12, g13 (not necessarily vacuum)."""
    comps = [_expr(v, NULL_CHART, params) for v in (g11, g12, g13)]
    for c in comps:
        if "x0" in c.free_symbols:
            raise CatalogError("adapted-frame components must not depend on x0")
    return ChartMetric(NULL_CHART, _null_frame(*comps), params,
                       box=box or _box(NULL_CHART, values), name=name)


def adapted_metric(g11, g12, g13, g22, g23, g33, params: Sequence[str] = (),
                   values: Mapping[str, float] | None = None, box: SampleBox | None = None,
                   name: str = "adapted") -> ChartMetric:
    """ds^2 = 2 dx0 dx1 + g_ab dx^a dx^b with components independent of x0."""
    comps = [_expr(v, NULL_CHART, params) for v in (g11, g12, g13, g22, g23, g33)]
    for c in comps:
        if "x0" in c.free_symbols:
            raise CatalogError("adapted-frame components must not depend on x0")
    return ChartMetric(NULL_CHART, _null_frame(*comps), params,
                       box=box or _box(NULL_CHART, values), name=name)


# Peres

def peres_metric(f="0", params: Sequence[str] = (), values: Mapping[str, float] | None = None,
                 box: SampleBox | None = None) -> Solution:
    """ds^2 = 2 dt dx - (1 + 2 f(x, y, z)) dx^2 - dy^2 - dz^2."""
    params = tuple(params) or tuple(sorted(values or {}))
    f = _expr(f, PERES_CHART, params)
    if "t" in f.free_symbols:
        raise CatalogError("f must not depend on t")
    g11 = mul(Const(-1), add(ONE, mul(Const(2), f)))
    metric = ChartMetric(PERES_CHART, _null_frame(g11, ZERO, ZERO), params,
                         box=box or _box(PERES_CHART, values), name="peres")
    return Solution(metric, VectorFieldSpec.coordinate(metric, 0))


def peres_original_metric(f="0", params: Sequence[str] = (),
                          values: Mapping[str, float] | None = None,
                          box: SampleBox | None = None) -> ChartMetric:
    """Original form dt^2 - dx^2 - dy^2 - dz^2 - 2 f(x + t, y, z) (dx + dt)^2.

    ``f`` is written over (x, y, z) with x standing for the first argument.
    """
    params = tuple(params) or tuple(sorted(values or {}))
    f = subs(_expr(f, PERES_CHART, params), {"x": add(Sym("x"), Sym("t"))})
    two_f = mul(Const(2), f)
    m = [[ZERO] * 4 for _ in RANGE]
    m[0][0] = add(ONE, mul(Const(-1), two_f))
    m[1][1] = add(Const(-1), mul(Const(-1), two_f))
    m[0][1] = m[1][0] = mul(Const(-1), two_f)
    m[2][2] = m[3][3] = Const(-1)
    return ChartMetric(PERES_CHART, m, params, box=box or _box(PERES_CHART, values),
                       name="peres_original")


def peres_coordinate_map() -> dict[str, Expr]:
    """Original coordinates in terms of the null ones: t = t', x = x' - t'."""
    t, x = Sym("t"), Sym("x")
    return {"t": t, "x": add(x, mul(Const(-1), t)), "y": Sym("y"), "z": Sym("z")}


# plane waves

def plane_wave_metric(g22="-1", g23="0", g33="-1", params: Sequence[str] = (),
                      values: Mapping[str, float] | None = None,
                      box: SampleBox | None = None, check: bool = True) -> Solution:
    """ds^2 = 2 d(eta) dx1 + g_ab(eta) dx^a dx^b; the parallel field is d/dx1."""
    params = tuple(params) or tuple(sorted(values or {}))
    comps = [_expr(v, PLANE_WAVE_CHART, params) for v in (g22, g23, g33)]
    for c in comps:
        if c.free_symbols & {"x1", "x2", "x3"}:
            raise CatalogError("plane-wave block may depend on eta only")
    box = box or _box(PLANE_WAVE_CHART, values)
    if check:
        _check_negative_definite(comps, box)
    a, b, c = comps
    m = [[ZERO, ONE, ZERO, ZERO],
         [ONE, ZERO, ZERO, ZERO],
         [ZERO, ZERO, a, b],
         [ZERO, ZERO, b, c]]
    metric = ChartMetric(PLANE_WAVE_CHART, m, params, box=box, name="plane_wave")
    return Solution(metric, VectorFieldSpec.coordinate(metric, 1))


def _check_negative_definite(block: Sequence[Expr], box: SampleBox) -> None:
    a, b, c = block
    env = box.sample()
    ev = Evaluator(env)
    va, vb, vc = (np.broadcast_to(ev(e), (box.points,)) for e in (a, b, c))
    if not (np.all(va < 0) and np.all(va * vc - vb * vb > 0)):
        raise CatalogError("transverse block is not negative definite on the sample box")


# Robinson-Trautman

@dataclass(frozen=True)
class RTParams:
    """p(xi, eta, sigma) > 0 and m(sigma)."""

    p: Expr
    m: Expr
    params: tuple[str, ...] = ()
    values: Mapping[str, float] = field(default_factory=dict)

    @classmethod
    def parse(cls, p="1", m="0", params: Sequence[str] = (),
              values: Mapping[str, float] | None = None) -> "RTParams":
        params = tuple(params) or tuple(sorted(values or {}))
        return cls(_expr(p, RT_CHART, params), _expr(m, RT_CHART, params), params,
                   dict(values or {}))

    @property
    def H(self) -> Expr:
        return mul(diff(self.p, "sigma"), power(self.p, -1))

    @property
    def K(self) -> Expr:
        lnp = func("log", self.p)
        lap = add(diff(diff(lnp, "xi"), "xi"), diff(diff(lnp, "eta"), "eta"))
        return mul(power(self.p, 2), lap)

    def validate(self, box: SampleBox) -> None:
        if "rho" in self.p.free_symbols:
            raise CatalogError("p must not depend on rho (it is differentiated along sigma)")
        if self.m.free_symbols & {"rho", "xi", "eta"}:
            raise CatalogError("m must depend on sigma only")
        env = box.sample()
        values = np.broadcast_to(Evaluator(env)(self.p), (box.points,))
        if not np.all(values > 0):
            raise CatalogError("p must be positive on the sample box")


def rt_box(values: Mapping[str, float] | None = None, rho=(0.5, 2.0), seed: int = 42,
           points: int = 200) -> SampleBox:
    bounds = {"rho": rho, "sigma": (-1.0, 1.0), "xi": (-1.0, 1.0), "eta": (-1.0, 1.0)}
    return SampleBox(bounds, fixed=dict(values or {}), seed=seed, points=points)


def robinson_trautman_metric(params: RTParams | None = None, *, p="1", m="0",
                             values: Mapping[str, float] | None = None,
                             box: SampleBox | None = None, check: bool = True) -> RTSolution:
    """ds^2 = 2 d(rho) d(sigma) + (K - 2 H rho - 2 m / rho) d(sigma)^2 - rho^2/p^2 (dxi^2 + deta^2)."""
    if params is None:
        params = RTParams.parse(p, m, values=values)
    box = box or rt_box(params.values)
    if check:
        params.validate(box)
    rho = Sym("rho")
    H, K = params.H, params.K
    g11 = add(K, mul(Const(-2), H, rho), mul(Const(-2), params.m, power(rho, -1)))
    gt = mul(Const(-1), power(rho, 2), power(params.p, -2))
    mtx = [[ZERO, ONE, ZERO, ZERO],
           [ONE, g11, ZERO, ZERO],
           [ZERO, ZERO, gt, ZERO],
           [ZERO, ZERO, ZERO, gt]]
    metric = ChartMetric(RT_CHART, mtx, params.params, box=box, name="robinson_trautman",
                         valid={"rho": (0.0, float("inf"))})
    return RTSolution(metric, H, K)


def family_schemas() -> dict[str, dict]:
    """Parameter schema of every built-in family (used by the CLI catalog listing)."""
    return {
        "minkowski_null": {"chart": list(NULL_CHART), "params": {}, "field": "d/dx0"},
        "pp_wave": {"chart": list(NULL_CHART),
                    "params": {"f": "expr in x1,x2,x3", "phi": "expr in x1",
                               "h": "expr in x1,x2,x3 harmonic in x2,x3"},
                    "field": "d/dx0"},
        "peres": {"chart": list(PERES_CHART), "params": {"f": "expr in x,y,z"},
                  "field": "d/dt"},
        "plane_wave": {"chart": list(PLANE_WAVE_CHART),
                       "params": {"g22": "expr in eta", "g23": "expr in eta",
                                  "g33": "expr in eta"},
                       "field": "d/dx1"},
        "robinson_trautman": {"chart": list(RT_CHART),
                              "params": {"p": "positive expr in xi,eta,sigma",
                                         "m": "expr in sigma"},
                              "field": None},
    }
