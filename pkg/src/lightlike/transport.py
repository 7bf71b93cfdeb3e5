"""Numerical parallel transport along prescribed curves, and loop holonomy.

The transport equation dv^i/ds + Gamma^i_jk(x(s)) x'^j(s) v^k = 0 is linear
in v, so the connection is evaluated once, vectorized, at every RK4 stage
point of the fine grid and reused for the coarse Richardson pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .exprcore import ZERO, DomainError, Evaluator, Expr, as_expr, diff, parse
from .geometry import DIM, RANGE, ChartMetric

MIN_STEPS = 16
CLOSURE_TOL = 1e-12
CURVE_SYMBOL = "s"


class TransportError(ValueError):
    """Curve leaves the valid domain or the connection is not finite on it."""


class CurveSpec:
    """A piecewise-smooth curve; each segment maps s in [0, 1] to four coordinates."""

    def __init__(self, components: Sequence, closed: bool = False, *,
                 segments: Sequence[Sequence] | None = None):
        if segments is None:
            segments = [components]
        segs = []
        for seg in segments:
            if len(seg) != DIM:
                raise ValueError("a curve segment needs four coordinate functions")
            exprs = tuple(parse(c, (CURVE_SYMBOL,)) if isinstance(c, str) else as_expr(c)
                          for c in seg)
            extra = set().union(*(e.free_symbols for e in exprs)) - {CURVE_SYMBOL}
            if extra:
                raise ValueError(f"curve uses symbols other than s: {sorted(extra)}")
            segs.append(exprs)
        self.segments = tuple(segs)
        self.closed = bool(closed)
        for a, b in zip(self.segments, self.segments[1:]):
            if np.max(np.abs(_at(a, 1.0) - _at(b, 0.0))) > CLOSURE_TOL:
                raise ValueError("curve segments do not join")
        if self.closed and np.max(np.abs(self.end - self.start)) > CLOSURE_TOL:
            raise ValueError("closed curve does not return to its start")

    @classmethod
    def piecewise(cls, segments: Sequence[Sequence], closed: bool = False) -> "CurveSpec":
        return cls(None, closed, segments=segments)

    @property
    def start(self) -> np.ndarray:
        return _at(self.segments[0], 0.0)

    @property
    def end(self) -> np.ndarray:
        return _at(self.segments[-1], 1.0)

    def reversed(self) -> "CurveSpec":
        from .exprcore import Const, add, mul, subs

        flip = add(Const(1), mul(Const(-1), _s()))
        segs = [tuple(subs(c, {CURVE_SYMBOL: flip}) for c in seg)
                for seg in reversed(self.segments)]
        return CurveSpec.piecewise(segs, self.closed)

    def to_strings(self) -> list[list[str]]:
        return [[str(c) for c in seg] for seg in self.segments]

    def __repr__(self) -> str:
        return f"<CurveSpec {len(self.segments)} segment(s) closed={self.closed}>"


def _s() -> Expr:
    from .exprcore import Sym

    return Sym(CURVE_SYMBOL, True)


def _at(seg, s: float) -> np.ndarray:
    ev = Evaluator({CURVE_SYMBOL: np.array([s])})
    return np.array([float(np.broadcast_to(ev(c), (1,))[0]) for c in seg])


def _lerp(a: float, b: float) -> Expr:
    from .exprcore import Const, add, mul

    if a == b:
        return Const(float(a))
    return add(Const(float(a)), mul(Const(float(b - a)), _s()))


def polygon_loop(vertices: Sequence[Sequence[float]]) -> CurveSpec:
    """Closed polygon through ``vertices`` (straight coordinate segments)."""
    pts = [np.asarray(v, dtype=float) for v in vertices]
    segs = []
    for a, b in zip(pts, pts[1:] + pts[:1]):
        segs.append(tuple(_lerp(a[i], b[i]) for i in RANGE))
    return CurveSpec.piecewise(segs, closed=True)


def rectangle_loop(center: Sequence[float], axes: tuple[int, int],
                   sides: tuple[float, float]) -> CurveSpec:
    """Counter-clockwise coordinate rectangle in the (axes[0], axes[1]) plane.

    Its oriented area bivector is Sigma^{ab} = sides[0] * sides[1] = -Sigma^{ba}.
    """
    a, b = axes
    if a == b:
        raise ValueError("rectangle axes must differ")
    c = np.asarray(center, dtype=float)
    da, db = sides[0] / 2, sides[1] / 2
    corners = []
    for sa, sb in ((-1, -1), (1, -1), (1, 1), (-1, 1)):
        p = c.copy()
        p[a] += sa * da
        p[b] += sb * db
        corners.append(p)
    return polygon_loop(corners)


@dataclass(frozen=True)
class TransportResult:
    initial: np.ndarray
    final: np.ndarray
    curve: CurveSpec
    steps: int
    error_estimate: float
    norm_initial: float
    norm_final: float

    @property
    def deviation(self) -> float:
        return float(np.linalg.norm(self.final - self.initial))

    @property
    def norm_drift(self) -> float:
        return abs(self.norm_final - self.norm_initial)

    def to_dict(self) -> dict:
        return {
            "initial": [float(x) for x in self.initial],
            "final": [float(x) for x in self.final],
            "curve": self.curve.to_strings(),
            "closed": self.curve.closed,
            "steps": self.steps,
            "error_estimate": float(self.error_estimate),
            "deviation": self.deviation,
            "norm_initial": float(self.norm_initial),
            "norm_final": float(self.norm_final),
        }


def _param_env(g: ChartMetric, values: Mapping[str, float] | None) -> dict[str, float]:
    env = dict(g.box.fixed)
    env.update(values or {})
    missing = [p for p in g.params if p not in env]
    if missing:
        raise TransportError(f"no value for parameter(s) {', '.join(missing)}")
    return {k: float(v) for k, v in env.items()}


def _check_domain(g: ChartMetric, coords: Mapping[str, np.ndarray]) -> None:
    for name, (lo, hi) in g.valid.items():
        x = coords[name]
        bad = np.flatnonzero(~((x > lo) & (x < hi)))
        if bad.size:
            raise TransportError(f"curve leaves the domain: {name} = {x[bad[0]]:.6g} "
                                 f"outside ({lo}, {hi})")


class _Connection:
    """Gamma^i_jk x'^j along one segment, on a uniform grid of 4*steps + 1 points."""

    def __init__(self, g: ChartMetric, seg, steps: int, params: Mapping[str, float]):
        n = 4 * steps + 1
        s = np.linspace(0.0, 1.0, n)
        ev = Evaluator({CURVE_SYMBOL: s})
        try:
            x = {c: np.broadcast_to(ev(e), (n,)).astype(float) for c, e in zip(g.chart, seg)}
            xdot = [np.broadcast_to(ev(diff(e, CURVE_SYMBOL)), (n,)) for e in seg]
        except DomainError as err:
            raise TransportError(f"curve is not defined on [0, 1]: {err}") from err
        _check_domain(g, x)
        env = dict(x)
        env.update({k: np.full(n, v) for k, v in params.items()})
        gev = Evaluator(env)
        gam = g.christoffel
        M = np.zeros((n, DIM, DIM))
        try:
            for i in RANGE:
                for j in RANGE:
                    for k in RANGE:
                        if gam[i, j, k] is ZERO:
                            continue
                        M[:, i, k] += np.broadcast_to(gev(gam[i, j, k]), (n,)) * xdot[j]
        except DomainError as err:
            raise TransportError(f"connection undefined on the curve: {err}") from err
        if not np.all(np.isfinite(M)):
            bad = int(np.flatnonzero(~np.isfinite(M).all(axis=(1, 2)))[0])
            raise TransportError(f"non-finite connection at s = {s[bad]:.6g}")
        self.M = M
        self.steps = steps

    def integrate(self, v0: np.ndarray, steps: int) -> np.ndarray:
        stride = 4 * self.steps // (2 * steps)  # grid points per half step
        h = 1.0 / steps
        v = v0.copy()
        for n in range(steps):
            i0 = 2 * n * stride
            m0, mh, m1 = self.M[i0], self.M[i0 + stride], self.M[i0 + 2 * stride]
            k1 = -m0 @ v
            k2 = -mh @ (v + 0.5 * h * k1)
            k3 = -mh @ (v + 0.5 * h * k2)
            k4 = -m1 @ (v + h * k3)
            v = v + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        return v


def _metric_at(g: ChartMetric, point: np.ndarray, params: Mapping[str, float]) -> np.ndarray:
    env = {c: np.array([point[a]]) for a, c in enumerate(g.chart)}
    env.update({k: np.array([v]) for k, v in params.items()})
    ev = Evaluator(env)
    return np.array([[float(np.broadcast_to(ev(g.g[i, j]), (1,))[0]) for j in RANGE]
                     for i in RANGE])


def transport(g: ChartMetric, curve: CurveSpec, v0: Sequence[float], steps: int = 256,
              values: Mapping[str, float] | None = None) -> TransportResult:
    """Parallel-transport ``v0`` along ``curve`` with ``steps`` RK4 steps per segment.

    The error estimate compares against a run with twice the steps.
    """
    if steps < MIN_STEPS:
        raise ValueError(f"steps must be at least {MIN_STEPS}")
    params = _param_env(g, values)
    v0 = np.asarray(v0, dtype=float)
    if v0.shape != (DIM,):
        raise ValueError("v0 must have four components")
    coarse = v0.copy()
    fine = v0.copy()
    for seg in curve.segments:
        conn = _Connection(g, seg, steps, params)
        coarse = conn.integrate(coarse, steps)
        fine = conn.integrate(fine, 2 * steps)
    error = float(np.linalg.norm(coarse - fine)) * 16.0 / 15.0
    g0 = _metric_at(g, curve.start, params)
    g1 = _metric_at(g, curve.end, params)
    return TransportResult(v0, coarse, curve, steps, error, float(v0 @ g0 @ v0),
                           float(coarse @ g1 @ coarse))


def holonomy_deviation(g: ChartMetric, loop: CurveSpec, basis=None, steps: int = 256,
                       values: Mapping[str, float] | None = None) -> np.ndarray:
    """Columns are (final - initial) for each column of ``basis`` transported round ``loop``."""
    if not loop.closed:
        raise ValueError("holonomy needs a closed loop")
    basis = np.eye(DIM) if basis is None else np.asarray(basis, dtype=float)
    out = np.empty_like(basis)
    for c in range(basis.shape[1]):
        res = transport(g, loop, basis[:, c], steps, values)
        out[:, c] = res.final - res.initial
    return out


def holonomy_prediction(g: ChartMetric, point: Sequence[float], axes: tuple[int, int],
                        area: float, values: Mapping[str, float] | None = None) -> np.ndarray:
    """Leading-order holonomy minus identity for a small loop of oriented ``area``.

    Delta v^i = -R^i_jab v^j * area for a counter-clockwise loop in the (a, b) plane.
    """
    params = _param_env(g, values)
    a, b = axes
    env = {c: np.array([point[k]]) for k, c in enumerate(g.chart)}
    env.update({k: np.array([v]) for k, v in params.items()})
    ev = Evaluator(env)
    mixed = g.riemann_mixed
    out = np.zeros((DIM, DIM))
    for i in RANGE:
        for j in RANGE:
            out[i, j] = -area * float(np.broadcast_to(ev(mixed[i, j, a, b]), (1,))[0])
    return out
