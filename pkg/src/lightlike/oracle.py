"""Finite-difference curvature, independent of symbolic differentiation.

Only pointwise evaluation of the metric components is shared with the
symbolic path. Christoffel symbols come from fourth-order central
differences of g, Riemann from fourth-order differences of those.
"""

from __future__ import annotations

from typing import Mapping

import numpy as np

from .exprcore import Evaluator
from .geometry import DIM, ChartMetric

_STENCIL = np.array([2.0, 1.0, -1.0, -2.0])
_WEIGHTS = np.array([-1.0, 8.0, -8.0, 1.0]) / 12.0


def metric_values(g: ChartMetric, coords: np.ndarray, fixed: Mapping[str, float]) -> np.ndarray:
    """g_ij at each row of ``coords`` (shape (n, 4)); returns (n, 4, 4)."""
    n = coords.shape[0]
    env = {name: coords[:, a] for a, name in enumerate(g.chart)}
    env.update({k: np.full(n, float(v)) for k, v in fixed.items()})
    ev = Evaluator(env)
    out = np.empty((n, DIM, DIM))
    for i in range(DIM):
        for j in range(i, DIM):
            out[:, i, j] = out[:, j, i] = np.broadcast_to(ev(g.g[i, j]), (n,))
    return out


def _fd(fn, coords: np.ndarray, step: float) -> np.ndarray:
    """Derivatives of ``fn`` along every coordinate; derivative axis appended last."""
    n = coords.shape[0]
    shifted = []
    for k in range(DIM):
        for s in _STENCIL:
            c = coords.copy()
            c[:, k] += s * step
            shifted.append(c)
    values = fn(np.concatenate(shifted))
    values = values.reshape((DIM, len(_STENCIL), n) + values.shape[1:])
    deriv = np.tensordot(_WEIGHTS, values, axes=([0], [1])) / step
    return np.moveaxis(deriv, 0, -1)


def christoffel_fd(g: ChartMetric, coords: np.ndarray, fixed: Mapping[str, float],
                   step: float = 1e-3) -> np.ndarray:
    """Gamma^i_jk at each point, shape (n, 4, 4, 4)."""
    gv = metric_values(g, coords, fixed)
    dg = _fd(lambda c: metric_values(g, c, fixed), coords, step)  # [n, i, j, k] = d_k g_ij
    first = 0.5 * (np.einsum("nlkj->nljk", dg) + dg - np.einsum("njkl->nljk", dg))
    ginv = np.linalg.inv(gv)
    return np.einsum("nil,nljk->nijk", ginv, first)


def riemann_fd(g: ChartMetric, coords: np.ndarray, fixed: Mapping[str, float] | None = None,
               step: float = 1e-3) -> np.ndarray:
    """Covariant R_ijkl at each point, shape (n, 4, 4, 4, 4), same convention as geometry."""
    fixed = dict(fixed or {})
    gam = christoffel_fd(g, coords, fixed, step)
    dgam = _fd(lambda c: christoffel_fd(g, c, fixed, step), coords, step)  # [n,i,j,l,k] = d_k G^i_jl
    mixed = (np.einsum("nijlk->nijkl", dgam) - dgam
             + np.einsum("nikm,nmjl->nijkl", gam, gam)
             - np.einsum("nilm,nmjk->nijkl", gam, gam))
    gv = metric_values(g, coords, fixed)
    return np.einsum("nim,nmjkl->nijkl", gv, mixed)


def ricci_fd(g: ChartMetric, coords: np.ndarray, fixed: Mapping[str, float] | None = None,
             step: float = 1e-3) -> np.ndarray:
    fixed = dict(fixed or {})
    riem = riemann_fd(g, coords, fixed, step)
    ginv = np.linalg.inv(metric_values(g, coords, fixed))
    return np.einsum("nkl,nkilj->nij", ginv, riem)


def sample_coords(g: ChartMetric, points: int | None = None, seed: int | None = None):
    """Coordinates (n, 4) and fixed parameter values drawn from the metric's box."""
    box = g.box
    if points is not None:
        box = box.with_points(points)
    if seed is not None:
        box = box.with_seed(seed)
    env = box.sample()
    coords = np.column_stack([np.broadcast_to(env[c], (box.points,)) for c in g.chart])
    fixed = {k: float(np.asarray(v).flat[0]) for k, v in env.items()
             if k not in g.chart and k in box.fixed}
    return coords, fixed, env
