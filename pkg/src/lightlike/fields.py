"""Vector fields on a chart: parallelism, gradient property, causal character."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exprcore import (
    DEFAULT_TOL,
    ZERO,
    CheckReport,
    Const,
    Evaluator,
    Expr,
    SampleBox,
    add,
    as_expr,
    diff,
    mul,
    parse,
    zero_test,
)
from .geometry import DIM, RANGE, ChartMetric, lower_index, raise_index

TIME_LIKE = "time-like"
SPACE_LIKE = "space-like"
LIGHT_LIKE = "light-like"
INDEFINITE = "indefinite"


class VectorFieldSpec:
    """Contravariant components X^i of a vector field on ``metric``'s chart."""

    def __init__(self, components: Sequence, metric: ChartMetric, name: str = "X"):
        if len(components) != DIM:
            raise ValueError("a vector field needs four components")
        comps = []
        for c in components:
            if isinstance(c, str):
                c = parse(c, metric.chart, metric.params)
            comps.append(as_expr(c))
        extra = set().union(*(c.free_symbols for c in comps)) - set(metric.chart) \
            - set(metric.params)
        if extra:
            raise ValueError(f"field components use undeclared symbols {sorted(extra)}")
        self.components = tuple(comps)
        self.metric = metric
        self.name = name

    @classmethod
    def coordinate(cls, metric: ChartMetric, index: int) -> "VectorFieldSpec":
        """The coordinate field d/dx^index."""
        comps = [Const(1) if i == index else ZERO for i in RANGE]
        return cls(comps, metric, name=f"d/d{metric.chart[index]}")

    @classmethod
    def from_covector(cls, covector: Sequence, metric: ChartMetric,
                      name: str = "X") -> "VectorFieldSpec":
        cov = [parse(c, metric.chart, metric.params) if isinstance(c, str) else as_expr(c)
               for c in covector]
        return cls(raise_index(metric, cov), metric, name)

    @property
    def lowered(self) -> list[Expr]:
        return lower_index(self.metric, self.components)

    def __getitem__(self, i: int) -> Expr:
        return self.components[i]

    def __repr__(self) -> str:
        return f"<VectorFieldSpec {self.name} = ({', '.join(map(str, self.components))})>"


def parallel_residual(X: VectorFieldSpec) -> np.ndarray:
    """X^i_{;j} = d_j X^i + Gamma^i_jk X^k, indexed [i, j]."""
    g = X.metric
    gam = g.christoffel
    out = np.empty((DIM, DIM), dtype=object)
    for i in RANGE:
        for j in RANGE:
            terms = [diff(X[i], g.chart[j])]
            for k in RANGE:
                if X[k] is not ZERO and gam[i, j, k] is not ZERO:
                    terms.append(mul(gam[i, j, k], X[k]))
            out[i, j] = add(*terms)
    out.flags.writeable = False
    return out


def gradient_residual(X: VectorFieldSpec) -> np.ndarray:
    """d_j X_i - d_i X_j of the lowered field, indexed [i, j]."""
    g = X.metric
    low = X.lowered
    out = np.empty((DIM, DIM), dtype=object)
    for i in RANGE:
        for j in RANGE:
            out[i, j] = add(diff(low[i], g.chart[j]), mul(Const(-1), diff(low[j], g.chart[i])))
    out.flags.writeable = False
    return out


def norm_squared(X: VectorFieldSpec) -> Expr:
    g = X.metric.g
    return add(*(mul(g[i, j], X[i], X[j]) for i in RANGE for j in RANGE
                 if g[i, j] is not ZERO and X[i] is not ZERO and X[j] is not ZERO))


def integrability_residuals(X: VectorFieldSpec) -> tuple[np.ndarray, np.ndarray]:
    """(R_ijkl X^l, R_jl X^l): necessary conditions for X to be parallel."""
    g = X.metric
    riem, ric = g.riemann, g.ricci
    full = np.empty((DIM,) * 3, dtype=object)
    for i in RANGE:
        for j in RANGE:
            for k in RANGE:
                full[i, j, k] = add(*(mul(riem[i, j, k, l], X[l]) for l in RANGE
                                      if X[l] is not ZERO))
    contracted = np.empty(DIM, dtype=object)
    for j in RANGE:
        contracted[j] = add(*(mul(ric[j, l], X[l]) for l in RANGE if X[l] is not ZERO))
    return full, contracted


def _labels(shape: tuple[int, ...], prefix: str) -> list[str]:
    return [prefix + "".join(map(str, idx)) for idx in np.ndindex(shape)]


def is_parallel(X: VectorFieldSpec, box: SampleBox | None = None,
                tol: float = DEFAULT_TOL) -> CheckReport:
    res = parallel_residual(X)
    return zero_test(list(res.flat), box or X.metric.box, tol, name="parallel_field",
                     labels=_labels(res.shape, "X^i;j "))


def is_gradient(X: VectorFieldSpec, box: SampleBox | None = None,
                tol: float = DEFAULT_TOL) -> CheckReport:
    res = gradient_residual(X)
    return zero_test(list(res.flat), box or X.metric.box, tol, name="gradient_field",
                     labels=_labels(res.shape, "curl "))


def integrability_check(X: VectorFieldSpec, box: SampleBox | None = None,
                        tol: float = DEFAULT_TOL) -> tuple[CheckReport, CheckReport]:
    full, contracted = integrability_residuals(X)
    box = box or X.metric.box
    return (zero_test(list(full.flat), box, tol, name="riemann_contraction",
                      labels=_labels(full.shape, "R_ijkl X^l ")),
            zero_test(list(contracted.flat), box, tol, name="ricci_contraction",
                      labels=_labels(contracted.shape, "R_jl X^l ")))


@dataclass(frozen=True)
class CausalReport:
    character: str
    nontrivial: bool
    report: CheckReport
    witnesses: dict = field(default_factory=dict)


def causal_character(X: VectorFieldSpec, box: SampleBox | None = None,
                     tol: float = DEFAULT_TOL) -> CausalReport:
    """Classify the sign of g(X, X) over the sampled box.

    ``nontrivial`` records whether X itself is nonzero somewhere on the box;
    a vanishing field is never called light-like.
    """
    box = box or X.metric.box
    nn = norm_squared(X)
    report = zero_test([nn], box, tol, name="causal_character", labels=["g(X,X)"])
    env = box.sample()
    ev = Evaluator(env)
    comps = np.array([np.broadcast_to(ev(c), (box.points,)) for c in X.components])
    nontrivial = bool(np.any(np.abs(comps) > tol))
    values = np.broadcast_to(ev(nn), (box.points,))
    pos = np.flatnonzero(values > tol)
    negs = np.flatnonzero(values < -tol)
    witnesses = {}
    if pos.size:
        witnesses["positive"] = box.point(env, int(pos[0]))
    if negs.size:
        witnesses["negative"] = box.point(env, int(negs[0]))
    if report.passed:
        character = LIGHT_LIKE if nontrivial else INDEFINITE
    elif pos.size == box.points:
        character = TIME_LIKE
    elif negs.size == box.points:
        character = SPACE_LIKE
    else:
        character = INDEFINITE
    return CausalReport(character, nontrivial, report, witnesses)
