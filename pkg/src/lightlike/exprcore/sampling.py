"""Seeded sample boxes and the probabilistic zero-equivalence test."""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from .evaluate import DomainError, Evaluator
from .expr import Expr, additive_terms
from .report import FAIL, PASS, CheckReport

DEFAULT_POINTS = 200
DEFAULT_TOL = 1e-9
DEFAULT_SEED = 42

_OPS = {">=": operator.ge, ">": operator.gt, "<=": operator.le, "<": operator.lt}


@dataclass(frozen=True)
class SampleBox:
    """Region sampled by the zero test.

    ``bounds`` maps a symbol to a closed interval ``(lo, hi)``; ``fixed`` pins
    symbols (usually parameters) to single values. ``keep`` lists half-spaces
    ``(name, op, value)`` that samples must satisfy, e.g. ``("rho", ">=", 0.5)``.
    """

    bounds: Mapping[str, tuple[float, float]]
    fixed: Mapping[str, float] = field(default_factory=dict)
    keep: tuple[tuple[str, str, float], ...] = ()
    seed: int = DEFAULT_SEED
    points: int = DEFAULT_POINTS

    def __post_init__(self):
        for name, (lo, hi) in self.bounds.items():
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise ValueError(f"bad interval for {name!r}: [{lo}, {hi}]")
        for name, value in self.fixed.items():
            if not math.isfinite(value):
                raise ValueError(f"non-finite value for {name!r}")
        if self.points < 1:
            raise ValueError("point count must be at least 1")
        for name, op, _ in self.keep:
            if op not in _OPS:
                raise ValueError(f"unknown comparison {op!r}")
            if name not in self.bounds:
                raise ValueError(f"half-space on unsampled symbol {name!r}")

    @property
    def names(self) -> frozenset[str]:
        return frozenset(self.bounds) | frozenset(self.fixed)

    def with_seed(self, seed: int) -> "SampleBox":
        return replace(self, seed=seed)

    def with_points(self, points: int) -> "SampleBox":
        return replace(self, points=points)

    def with_fixed(self, **values: float) -> "SampleBox":
        return replace(self, fixed={**self.fixed, **values})

    def sample(self) -> dict[str, np.ndarray]:
        """Draw ``points`` samples; identical for identical (box, seed)."""
        rng = np.random.default_rng(self.seed)
        names = sorted(self.bounds)
        kept: list[np.ndarray] = []
        need = self.points
        for _ in range(1000):
            batch = np.column_stack(
                [rng.uniform(self.bounds[n][0], self.bounds[n][1], size=max(need, 16))
                 for n in names]
            ) if names else np.zeros((max(need, 16), 0))
            ok = np.ones(len(batch), dtype=bool)
            for name, op, value in self.keep:
                ok &= _OPS[op](batch[:, names.index(name)], value)
            kept.append(batch[ok])
            need -= int(ok.sum())
            if need <= 0:
                break
        else:
            raise ValueError("half-space constraints reject almost every sample")
        pts = np.concatenate(kept)[: self.points]
        env = {n: pts[:, i].copy() for i, n in enumerate(names)}
        for name, value in self.fixed.items():
            env[name] = np.full(self.points, float(value))
        return env

    def point(self, env: Mapping[str, np.ndarray], index: int) -> dict[str, float]:
        return {k: float(env[k][index]) for k in sorted(env)}


def _check_bound(exprs: Sequence[Expr], box: SampleBox) -> None:
    free = frozenset().union(*(e.free_symbols for e in exprs)) if exprs else frozenset()
    missing = sorted(free - box.names)
    if missing:
        raise KeyError(f"sample box does not bind {missing}")


def residuals(exprs: Sequence[Expr], env: Mapping[str, np.ndarray], n: int,
              evaluator: Evaluator | None = None) -> np.ndarray:
    """Relative residuals |e| / max(1, max |additive term|), shape (len(exprs), n)."""
    ev = evaluator or Evaluator(env)
    out = np.empty((len(exprs), n))
    with np.errstate(all="ignore"):
        for row, e in enumerate(exprs):
            value = np.broadcast_to(ev(e), (n,))
            scale = np.zeros(n)
            for t in additive_terms(e):
                scale = np.maximum(scale, np.abs(np.broadcast_to(ev(t), (n,))))
            r = np.abs(value) / np.maximum(1.0, scale)
            r[~np.isfinite(r)] = np.inf
            out[row] = r
    return out


def zero_test(exprs: Sequence[Expr], box: SampleBox, tol: float = DEFAULT_TOL,
              name: str = "is_probably_zero", labels: Sequence[str] | None = None) -> CheckReport:
    """Joint zero test of several expressions sharing one set of sample points.

    Passes iff every normalized residual is at most ``tol``. The worst
    component is named in the diagnostics; ties go to the lowest point index
    and then the first component.
    """
    exprs = list(exprs)
    labels = list(labels) if labels is not None else [str(i) for i in range(len(exprs))]
    seed = box.seed
    _check_bound(exprs, box)
    env = box.sample()
    try:
        res = residuals(exprs, env, box.points)
    except DomainError as err:
        point = box.point(env, err.index) if err.index is not None else None
        return CheckReport(name, FAIL, None, point, tol, box.points, seed,
                           f"domain error: {err}", details={"domain_error": True})
    if not exprs:
        return CheckReport(name, PASS, 0.0, None, tol, box.points, seed, "nothing to check")
    worst_per_point = res.max(axis=0)
    idx = int(np.argmax(worst_per_point))
    worst = float(worst_per_point[idx])
    comp = int(np.argmax(res[:, idx]))
    status = PASS if worst <= tol else FAIL
    failing = [labels[i] for i in range(len(exprs)) if res[i].max() > tol]
    diag = f"worst component {labels[comp]}"
    if failing:
        shown = ", ".join(failing[:12]) + (" ..." if len(failing) > 12 else "")
        diag += f"; nonzero: {shown}"
    if not math.isfinite(worst):
        diag += "; non-finite value encountered"
    return CheckReport(name, status, worst, box.point(env, idx), tol, box.points, seed, diag,
                       details={"per_component": res.max(axis=1).tolist(), "labels": labels})


def is_probably_zero(e: Expr, box: SampleBox, tol: float = DEFAULT_TOL,
                     name: str = "is_probably_zero") -> CheckReport:
    return zero_test([e], box, tol, name=name, labels=[str(e)[:80]])


def fd_derivative(e: Expr, coord: str, point: Mapping[str, float], step: float = 1e-4) -> float:
    """Fourth-order central difference of ``e`` along ``coord`` at ``point``."""
    missing = sorted(e.free_symbols - point.keys())
    if missing:
        raise KeyError(f"unbound symbols: {missing}")
    x = float(point.get(coord, 0.0))
    offsets = np.array([2.0, 1.0, -1.0, -2.0]) * step
    env = {k: np.full(4, float(v)) for k, v in point.items()}
    env[coord] = x + offsets
    f = np.broadcast_to(Evaluator(env)(e), (4,))
    if not np.all(np.isfinite(f)):
        raise DomainError("non-finite value inside the stencil", e)
    return float((-f[0] + 8.0 * f[1] - 8.0 * f[2] + f[3]) / (12.0 * step))
