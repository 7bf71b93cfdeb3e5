"""Metric geometry on a four-dimensional chart.

Conventions (fixed once, calibrated against the Peres metric in the tests):

    Gamma^i_jk   = 1/2 g^il (d_j g_lk + d_k g_lj - d_l g_jk)
    R^i_jkl      = d_k Gamma^i_jl - d_l Gamma^i_jk
                   + Gamma^i_km Gamma^m_jl - Gamma^i_lm Gamma^m_jk
    R_ijkl       = g_im R^m_jkl
    R_jl         = g^ik R_ijkl    (written g^kl R_kilj with renamed indices)
    R            = g^jl R_jl

Component arrays are numpy object arrays of ``Expr``, indexed (i, j, k, l)
row-major, and are marked read-only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .exprcore import (
    ZERO,
    Const,
    Expr,
    SampleBox,
    add,
    as_expr,
    diff,
    is_probably_zero,
    mul,
    parse,
    power,
)

DIM = 4
HALF = Const(Fraction(1, 2))
RANGE = range(DIM)


class GeometryError(ValueError):
    pass


class SingularMetricError(GeometryError):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def _array(rank: int) -> np.ndarray:
    a = np.empty((DIM,) * rank, dtype=object)
    a.fill(ZERO)
    return a


def _prod(a: Expr, b: Expr) -> Expr:
    if a is ZERO or b is ZERO:
        return ZERO
    return mul(a, b)


def default_box(chart: Sequence[str], params: Mapping[str, float] | None = None) -> SampleBox:
    return SampleBox({c: (-1.0, 1.0) for c in chart}, fixed=dict(params or {}))


class ChartMetric:
    """A symmetric 4x4 metric g_ij on a named chart.

    ``box`` is the region the metric's checks sample; ``valid`` maps
    coordinates to open intervals outside of which the metric is singular
    (used to reject transport curves that leave the domain).
    """

    def __init__(self, chart: Sequence[str], components, params: Sequence[str] = (),
                 box: SampleBox | None = None, signature: str = "+---", name: str = "",
                 valid: Mapping[str, tuple[float, float]] | None = None):
        chart = tuple(chart)
        if len(chart) != DIM or len(set(chart)) != DIM:
            raise GeometryError(f"a chart needs four distinct coordinate names, got {chart}")
        self.chart = chart
        self.params = tuple(params)
        g = _array(2)
        for i in RANGE:
            for j in RANGE:
                value = components[i][j]
                if isinstance(value, str):
                    value = parse(value, chart, self.params)
                g[i, j] = as_expr(value)
        for i in RANGE:
            for j in range(i):
                if g[i, j] is not g[j, i]:
                    raise GeometryError(f"metric is not symmetric at ({i}, {j})")
        unknown = set().union(*(e.free_symbols for e in g.flat)) - set(chart) - set(self.params)
        if unknown:
            raise GeometryError(f"metric references undeclared symbols {sorted(unknown)}")
        self.g = _frozen(g)
        self.box = box if box is not None else default_box(chart)
        self.signature = signature
        self.name = name
        self.valid = dict(valid or {})

    @classmethod
    def from_lower_triangle(cls, chart, rows, params=(), **kw) -> "ChartMetric":
        """Build from a lower triangle: ``rows[i]`` has entries g_i0 .. g_ii."""
        full = [[None] * DIM for _ in RANGE]
        for i in RANGE:
            if len(rows[i]) != i + 1:
                raise GeometryError(f"row {i} of a lower triangle needs {i + 1} entries")
            for j in range(i + 1):
                value = rows[i][j]
                if isinstance(value, str):
                    value = parse(value, chart, params)
                full[i][j] = full[j][i] = as_expr(value)
        return cls(chart, full, params, **kw)

    def __getitem__(self, ij) -> Expr:
        return self.g[ij]

    def __repr__(self) -> str:
        label = self.name or "metric"
        return f"<ChartMetric {label} chart={self.chart}>"

    def with_box(self, box: SampleBox) -> "ChartMetric":
        out = ChartMetric(self.chart, self.g, self.params, box, self.signature, self.name,
                          self.valid)
        return out

    # lazily computed, cached geometry
    @cached_property
    def determinant(self) -> Expr:
        return determinant(self.g)

    @cached_property
    def inverse(self) -> np.ndarray:
        return _inverse(self)

    @cached_property
    def metric_derivatives(self) -> np.ndarray:
        """dg[i, j, k] = d_k g_ij."""
        dg = _array(3)
        for i in RANGE:
            for j in range(i, DIM):
                for k in RANGE:
                    dg[i, j, k] = dg[j, i, k] = diff(self.g[i, j], self.chart[k])
        return _frozen(dg)

    @cached_property
    def christoffel(self) -> np.ndarray:
        return _christoffel(self)

    @cached_property
    def riemann_mixed(self) -> np.ndarray:
        return _riemann_mixed(self)

    @cached_property
    def riemann(self) -> np.ndarray:
        return _riemann_covariant(self)

    @cached_property
    def ricci(self) -> np.ndarray:
        return _ricci(self)

    @cached_property
    def scalar(self) -> Expr:
        ginv, ric = self.inverse, self.ricci
        return add(*(_prod(ginv[j, l], ric[j, l]) for j in RANGE for l in RANGE))

    @cached_property
    def curvature(self) -> "CurvatureBundle":
        return CurvatureBundle(self.christoffel, self.riemann, self.ricci, self.scalar)

    @cached_property
    def riemann_raised(self) -> np.ndarray:
        """R^i_jkl obtained by raising the first index of the covariant tensor."""
        ginv, riem = self.inverse, self.riemann
        out = _array(4)
        for i, j, k, l in itertools.product(RANGE, repeat=4):
            out[i, j, k, l] = add(*(_prod(ginv[i, m], riem[m, j, k, l]) for m in RANGE))
        return _frozen(out)


@dataclass(frozen=True)
class CurvatureBundle:
    christoffel: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: Expr


def determinant(m) -> Expr:
    """Cofactor expansion along the first row, skipping structural zeros."""
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return add(_prod(m[0][0], m[1][1]), mul(Const(-1), _prod(m[0][1], m[1][0])))
    terms = []
    for j in range(n):
        if m[0][j] is ZERO:
            continue
        minor = [[m[r][c] for c in range(n) if c != j] for r in range(1, n)]
        sub = determinant(minor)
        if sub is ZERO:
            continue
        sign = Const(1 if j % 2 == 0 else -1)
        terms.append(mul(sign, m[0][j], sub))
    return add(*terms)


def cofactor(m, i: int, j: int) -> Expr:
    n = len(m)
    minor = [[m[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
    sub = determinant(minor)
    return sub if (i + j) % 2 == 0 else mul(Const(-1), sub)


def _inverse(g: ChartMetric) -> np.ndarray:
    det = g.determinant
    check = is_probably_zero(det, g.box, name="metric_determinant")
    if check.passed:
        raise SingularMetricError(f"det(g) vanishes on the sample box of {g!r}")
    inv_det = power(det, -1)
    out = _array(2)
    for i in RANGE:
        for j in range(i, DIM):
            # symmetric matrix: adj_ij = C_ji = C_ij
            c = cofactor(g.g, j, i)
            out[i, j] = out[j, i] = _prod(c, inv_det)
    return _frozen(out)


def inverse_metric(g: ChartMetric) -> np.ndarray:
    """g^ij as closed-form expressions (adjugate over determinant)."""
    return g.inverse


def _christoffel(g: ChartMetric) -> np.ndarray:
    dg, ginv = g.metric_derivatives, g.inverse
    first = _array(3)  # Gamma_l,jk
    for l in RANGE:
        for j in RANGE:
            for k in range(j, DIM):
                s = add(dg[l, k, j], dg[l, j, k], mul(Const(-1), dg[j, k, l]))
                first[l, j, k] = first[l, k, j] = _prod(HALF, s)
    out = _array(3)
    for i in RANGE:
        for j in RANGE:
            for k in range(j, DIM):
                out[i, j, k] = out[i, k, j] = add(
                    *(_prod(ginv[i, l], first[l, j, k]) for l in RANGE))
    return _frozen(out)


def christoffel(g: ChartMetric) -> np.ndarray:
    """Gamma^i_jk, symmetric in (j, k) by construction."""
    return g.christoffel


def _riemann_mixed(g: ChartMetric) -> np.ndarray:
    gam, x = g.christoffel, g.chart
    out = _array(4)
    for i, j in itertools.product(RANGE, repeat=2):
        for k in RANGE:
            for l in range(k + 1, DIM):
                terms = [diff(gam[i, j, l], x[k]), mul(Const(-1), diff(gam[i, j, k], x[l]))]
                for m in RANGE:
                    terms.append(_prod(gam[i, k, m], gam[m, j, l]))
                    p = _prod(gam[i, l, m], gam[m, j, k])
                    if p is not ZERO:
                        terms.append(mul(Const(-1), p))
                r = add(*terms)
                out[i, j, k, l] = r
                out[i, j, l, k] = mul(Const(-1), r)
    return _frozen(out)


def _riemann_covariant(g: ChartMetric) -> np.ndarray:
    up = g.riemann_mixed
    out = _array(4)
    for i, j in itertools.product(RANGE, repeat=2):
        for k in RANGE:
            for l in range(k + 1, DIM):
                r = add(*(_prod(g.g[i, m], up[m, j, k, l]) for m in RANGE))
                out[i, j, k, l] = r
                out[i, j, l, k] = mul(Const(-1), r)
    return _frozen(out)


def riemann_covariant(g: ChartMetric) -> np.ndarray:
    """R_ijkl. Antisymmetry in (k, l) is structural; the other symmetries are not."""
    return g.riemann


def _ricci(g: ChartMetric) -> np.ndarray:
    ginv, riem = g.inverse, g.riemann
    out = _array(2)
    for i in RANGE:
        for j in RANGE:
            out[i, j] = add(*(_prod(ginv[k, l], riem[k, i, l, j])
                              for k in RANGE for l in RANGE))
    return _frozen(out)


def ricci(g: ChartMetric) -> np.ndarray:
    return g.ricci


def scalar_curvature(g: ChartMetric) -> Expr:
    return g.scalar


def curvature(g: ChartMetric) -> CurvatureBundle:
    return g.curvature


def einstein_tensor(g: ChartMetric) -> np.ndarray:
    out = _array(2)
    for i in RANGE:
        for j in RANGE:
            out[i, j] = add(g.ricci[i, j], mul(Const(Fraction(-1, 2)), g.scalar, g.g[i, j]))
    return _frozen(out)


# covariant derivatives

def _check_variance(T: np.ndarray, variance: str) -> None:
    if T.ndim != len(variance) or set(variance) - set("ul"):
        raise GeometryError(f"variance {variance!r} does not match a rank-{T.ndim} array")
    if variance.count("u") > 1 or len(variance) > 5:
        raise GeometryError(f"unsupported valence {variance!r} (at most one upper, "
                            "four lower indices)")


def nabla_component(T: np.ndarray, variance: str, g: ChartMetric, idx: tuple, m: int) -> Expr:
    """(nabla_m T)[idx] for a tensor with index variance string like ``"ulll"``."""
    gam = g.christoffel
    terms = [diff(T[idx], g.chart[m])]
    for p, kind in enumerate(variance):
        a = idx[p]
        for c in RANGE:
            shifted = idx[:p] + (c,) + idx[p + 1:]
            t = T[shifted]
            if t is ZERO:
                continue
            if kind == "u":
                terms.append(_prod(gam[a, m, c], t))
            else:
                prod = _prod(gam[c, m, a], t)
                if prod is not ZERO:
                    terms.append(mul(Const(-1), prod))
    return add(*terms)


def covariant_derivative(T, variance: str, g: ChartMetric) -> np.ndarray:
    """Full covariant derivative; the derivative index is appended last."""
    T = np.asarray(T, dtype=object)
    _check_variance(T, variance)
    out = np.empty(T.shape + (DIM,), dtype=object)
    for idx in itertools.product(RANGE, repeat=T.ndim):
        for m in RANGE:
            out[idx + (m,)] = nabla_component(T, variance, g, idx, m)
    return _frozen(out)


def riemann_divergence(g: ChartMetric) -> np.ndarray:
    """D_i R^i_jkl as a 4x4x4 array (zero on Ricci-flat metrics)."""
    up = g.riemann_raised
    out = _array(3)
    for j, k, l in itertools.product(RANGE, repeat=3):
        out[j, k, l] = add(*(nabla_component(up, "ulll", g, (i, j, k, l), i) for i in RANGE))
    return _frozen(out)


def contracted_bianchi_residual(g: ChartMetric) -> np.ndarray:
    """D_i R^i_jkl - (D_k R_jl - D_l R_jk); vanishes for every Levi-Civita connection."""
    div = riemann_divergence(g)
    ric = g.ricci
    out = _array(3)
    for j, k, l in itertools.product(RANGE, repeat=3):
        dk = nabla_component(ric, "ll", g, (j, l), k)
        dl = nabla_component(ric, "ll", g, (j, k), l)
        out[j, k, l] = add(div[j, k, l], mul(Const(-1), dk), dl)
    return _frozen(out)


def einstein_divergence(g: ChartMetric) -> np.ndarray:
    """2 D^i (R_ij - 1/2 R g_ij); vanishes identically."""
    G = einstein_tensor(g)
    ginv = g.inverse
    out = _array(1)
    for j in RANGE:
        terms = []
        for i in RANGE:
            for k in RANGE:
                if ginv[i, k] is ZERO:
                    continue
                terms.append(_prod(ginv[i, k], nabla_component(G, "ll", g, (i, j), k)))
        out[j] = mul(Const(2), add(*terms))
    return _frozen(out)


def metric_compatibility(g: ChartMetric) -> np.ndarray:
    """nabla_k g_ij; identically zero for the Levi-Civita connection."""
    return covariant_derivative(g.g, "ll", g)


def spatial_subblock(g: ChartMetric) -> np.ndarray:
    """gamma_ab = -g_ab for a, b in {2, 3} on an adapted (null) chart."""
    if not (g.g[0, 0] is ZERO and g.g[0, 1] is not ZERO and g.g[0, 2] is ZERO
            and g.g[0, 3] is ZERO):
        raise GeometryError("spatial_subblock needs an adapted chart with g00=g02=g03=0")
    out = np.empty((2, 2), dtype=object)
    for a in range(2):
        for b in range(2):
            out[a, b] = mul(Const(-1), g.g[a + 2, b + 2])
    return _frozen(out)


def lower_index(g: ChartMetric, vector: Sequence[Expr]) -> list[Expr]:
    return [add(*(_prod(g.g[i, j], as_expr(vector[j])) for j in RANGE)) for i in RANGE]


def raise_index(g: ChartMetric, covector: Sequence[Expr]) -> list[Expr]:
    ginv = g.inverse
    return [add(*(_prod(ginv[i, j], as_expr(covector[j])) for j in RANGE)) for i in RANGE]


def riemann_symmetry_residuals(g: ChartMetric) -> dict[str, list[Expr]]:
    """Residual expressions of the algebraic Riemann symmetries."""
    R = g.riemann
    pairs = list(itertools.product(RANGE, repeat=4))
    return {
        "antisym_first_pair": [add(R[i, j, k, l], R[j, i, k, l]) for i, j, k, l in pairs],
        "antisym_second_pair": [add(R[i, j, k, l], R[i, j, l, k]) for i, j, k, l in pairs],
        "pair_exchange": [add(R[i, j, k, l], mul(Const(-1), R[k, l, i, j]))
                          for i, j, k, l in pairs],
        "first_bianchi": [add(R[i, j, k, l], R[i, k, l, j], R[i, l, j, k])
                          for i, j, k, l in pairs],
    }
