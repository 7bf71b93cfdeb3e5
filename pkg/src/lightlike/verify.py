"""Named checks over metrics and fields, each producing a CheckReport.

Every check samples its own box stream: the seed is the master seed plus a
CRC of the check name, so results do not depend on which checks run or in
what order.
"""

from __future__ import annotations

import itertools
import zlib
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .catalog import RTParams, RTSolution
from .exprcore import (
    DEFAULT_TOL,
    ERROR,
    FAIL,
    PASS,
    ZERO,
    CheckReport,
    Const,
    Evaluator,
    Expr,
    SampleBox,
    add,
    diff,
    mul,
    power,
    zero_test,
)
from .fields import (
    LIGHT_LIKE,
    VectorFieldSpec,
    causal_character,
    integrability_residuals,
    parallel_residual,
    gradient_residual,
)
from .geometry import (
    DIM,
    RANGE,
    ChartMetric,
    GeometryError,
    contracted_bianchi_residual,
    einstein_divergence,
    einstein_tensor,
    metric_compatibility,
    riemann_divergence,
    riemann_symmetry_residuals,
    spatial_subblock,
)

DEFAULT_KAPPA = 1.0
NULL_THRESHOLD = 1e-8


def derived_seed(master: int, check: str) -> int:
    return (int(master) + zlib.crc32(check.encode("utf-8"))) % 2**32


def check_box(box: SampleBox, check: str, seed: int | None = None,
              points: int | None = None) -> SampleBox:
    """Per-check sample box with a seed derived from the master seed and the name."""
    master = box.seed if seed is None else seed
    out = box.with_seed(derived_seed(master, check))
    return out.with_points(points) if points is not None else out


def _labels(shape, prefix: str) -> list[str]:
    return [prefix + "".join(map(str, idx)) for idx in np.ndindex(*shape)]


def _error(name: str, box: SampleBox, tol: float, message: str) -> CheckReport:
    return CheckReport(name, ERROR, None, None, tol, box.points, box.seed, message)


def combine(name: str, reports: Sequence[CheckReport], box: SampleBox, tol: float,
            extra: str = "") -> CheckReport:
    """Fold sub-reports into one: error beats fail beats pass; worst residual wins."""
    statuses = [r.status for r in reports]
    status = ERROR if ERROR in statuses else FAIL if FAIL in statuses else PASS
    worst = None
    point = None
    for r in reports:
        if r.max_residual is None:
            continue
        if worst is None or r.max_residual > worst:
            worst, point = r.max_residual, r.argmax_point
    failing = [r for r in reports if not r.passed]
    if failing and any(r.max_residual is None for r in failing):
        worst = None
    parts = [f"{r.check}: {r.status}" + (f" ({r.diagnostics})" if not r.passed else "")
             for r in reports]
    diag = "; ".join(parts)
    if extra:
        diag = extra + "; " + diag
    details = {"domain_error": True} if any(r.details.get("domain_error") for r in reports) \
        else {}
    return CheckReport(name, status, worst, point, tol, box.points, box.seed, diag, details)


# adapted-chart structure

def is_adapted(g: ChartMetric) -> bool:
    """g00 = g02 = g03 = 0, g01 = 1 and nothing depends on x0."""
    gg = g.g
    if not (gg[0, 0] is ZERO and gg[0, 2] is ZERO and gg[0, 3] is ZERO and gg[0, 1].is_one):
        return False
    return all(g.chart[0] not in e.free_symbols for e in gg.flat)


def is_standard_frame(g: ChartMetric) -> bool:
    gg = g.g
    minus_one = Const(-1)
    return is_adapted(g) and gg[2, 2] is minus_one and gg[3, 3] is minus_one \
        and gg[2, 3] is ZERO


def reduced_vacuum_residuals(g: ChartMetric) -> dict[str, Expr]:
    """The four conditions equivalent to Ricci flatness on an adapted chart."""
    R, gg = g.riemann, g.g
    trace = add(mul(gg[3, 3], R[1, 2, 1, 2]), mul(Const(-2), gg[2, 3], R[1, 2, 1, 3]),
                mul(gg[2, 2], R[1, 3, 1, 3]))
    return {"R_1223": R[1, 2, 2, 3], "R_1323": R[1, 3, 2, 3],
            "g33 R_1212 - 2 g23 R_1213 + g22 R_1313": trace, "R_2323": R[2, 3, 2, 3]}


def field_equation_residuals(g: ChartMetric) -> dict[str, Expr]:
    """The three second-order PDEs for (g11, g12, g13) in the standard frame."""
    x1, x2, x3 = g.chart[1:]
    g11, g12, g13 = g.g[1, 1], g.g[1, 2], g.g[1, 3]

    def d(e, *cs):
        for c in cs:
            e = diff(e, c)
        return e

    twist = add(d(g13, x2), mul(Const(-1), d(g12, x3)))
    return {
        "twist_x2": add(d(g13, x2, x2), mul(Const(-1), d(g12, x2, x3))),
        "twist_x3": add(d(g13, x2, x3), mul(Const(-1), d(g12, x3, x3))),
        "g11_equation": add(d(g11, x2, x2), d(g11, x3, x3),
                            mul(Const(-2), add(d(g12, x1, x2), d(g13, x1, x3))),
                            power(twist, 2)),
    }


def reduced_vacuum_check(g: ChartMetric, tol: float = DEFAULT_TOL, seed: int | None = None,
                         points: int | None = None) -> CheckReport:
    name = "reduced_vacuum"
    box = check_box(g.box, name, seed, points)
    if not is_adapted(g):
        return _error(name, box, tol, "metric is not in the adapted null form")
    reduced = reduced_vacuum_residuals(g)
    red = zero_test(list(reduced.values()), box, tol, name=name, labels=list(reduced))
    full = zero_test(list(g.ricci.flat), box, tol, name="ricci_flat",
                     labels=_labels((4, 4), "R_"))
    if red.passed != full.passed:
        return replace(red, status=ERROR, diagnostics=(
            f"reduced conditions {red.status} but full Ricci {full.status}: "
            f"{red.diagnostics} / {full.diagnostics}"))
    return replace(red, diagnostics=f"{red.diagnostics}; full Ricci agrees ({full.status})")


def closed_form_components(g: ChartMetric) -> dict[str, Expr]:
    """Curvature components in the standard frame written through g11, g12, g13."""
    x1, x2, x3 = g.chart[1:]
    g11, g12, g13 = g.g[1, 1], g.g[1, 2], g.g[1, 3]

    def d(e, *cs):
        for c in cs:
            e = diff(e, c)
        return e

    half, quarter = Const(Fraction(1, 2)), Const(Fraction(-1, 4))
    twist_sq = power(add(d(g13, x2), mul(Const(-1), d(g12, x3))), 2)
    return {
        "R_2323": ZERO,
        "R_1223": mul(half, add(d(g13, x2, x2), mul(Const(-1), d(g12, x2, x3)))),
        "R_1323": mul(half, add(d(g13, x2, x3), mul(Const(-1), d(g12, x3, x3)))),
        "R_1212": add(mul(half, add(mul(Const(2), d(g12, x1, x2)), mul(Const(-1), d(g11, x2, x2)))),
                      mul(quarter, twist_sq)),
        "R_1313": add(mul(half, add(mul(Const(2), d(g13, x1, x3)), mul(Const(-1), d(g11, x3, x3)))),
                      mul(quarter, twist_sq)),
        "R_1213": mul(half, add(d(g13, x1, x2), d(g12, x1, x3), mul(Const(-1), d(g11, x2, x3)))),
    }


_CLOSED_INDEX = {"R_2323": (2, 3, 2, 3), "R_1223": (1, 2, 2, 3), "R_1323": (1, 3, 2, 3),
                 "R_1212": (1, 2, 1, 2), "R_1313": (1, 3, 1, 3), "R_1213": (1, 2, 1, 3)}


def closed_form_curvature_check(g: ChartMetric, tol: float = DEFAULT_TOL,
                                seed: int | None = None, points: int | None = None) -> CheckReport:
    name = "closed_form_curvature"
    box = check_box(g.box, name, seed, points)
    if not is_standard_frame(g):
        return _error(name, box, tol, "metric is not in the standard frame (g22=g33=-1, g23=0)")
    closed = closed_form_components(g)
    R = g.riemann
    diffs = [add(R[_CLOSED_INDEX[k]], mul(Const(-1), v)) for k, v in closed.items()]
    return zero_test(diffs, box, tol, name=name, labels=[f"{k} - closed form" for k in closed])


def cauchy_riemann_residuals(r1212: Expr, r1213: Expr, r1313: Expr,
                             x2: str = "x2", x3: str = "x3") -> dict[str, Expr]:
    """Trace, divergence and Cauchy-Riemann combinations of the transverse curvature."""
    neg = lambda e: mul(Const(-1), e)  # noqa: E731
    return {
        "R_1212 + R_1313": add(r1212, r1313),
        "div_2": add(diff(r1212, x2), diff(r1213, x3)),
        "div_3": add(diff(r1213, x2), diff(r1313, x3)),
        "cr_1": add(diff(r1213, x2), neg(diff(r1212, x3))),
        "cr_2": add(diff(r1213, x3), diff(r1212, x2)),
    }


def cauchy_riemann_check(g: ChartMetric, tol: float = DEFAULT_TOL, seed: int | None = None,
                         points: int | None = None) -> CheckReport:
    name = "cauchy_riemann"
    box = check_box(g.box, name, seed, points)
    if not is_standard_frame(g):
        return _error(name, box, tol, "metric is not in the standard frame")
    vac = zero_test(list(g.ricci.flat), box, tol, name="ricci_flat")
    if not vac.passed:
        return _error(name, box, tol, f"precondition failed: metric is not Ricci-flat "
                                      f"(residual {vac.max_residual})")
    R = g.riemann
    res = cauchy_riemann_residuals(R[1, 2, 1, 2], R[1, 2, 1, 3], R[1, 3, 1, 3],
                                   g.chart[2], g.chart[3])
    return zero_test(list(res.values()), box, tol, name=name, labels=list(res))


# stress-energy

def stress_energy(g: ChartMetric, kappa: float = DEFAULT_KAPPA) -> np.ndarray:
    """T_ij = (R_ij - R g_ij / 2) / kappa."""
    if kappa == 0:
        raise ValueError("kappa must be nonzero")
    G = einstein_tensor(g)
    inv = Const(1 / kappa) if not float(kappa).is_integer() else Const(Fraction(1, int(kappa)))
    out = np.empty((DIM, DIM), dtype=object)
    for i in RANGE:
        for j in RANGE:
            out[i, j] = mul(inv, G[i, j])
    out.flags.writeable = False
    return out


def stress_energy_reconstruct(g: ChartMetric, kappa: float = DEFAULT_KAPPA,
                              field: VectorFieldSpec | None = None, tol: float = DEFAULT_TOL,
                              seed: int | None = None, points: int | None = None):
    """Return (T_ij, report). With a verified parallel field the report asserts T = 0."""
    name = "stress_energy"
    box = check_box(g.box, name, seed, points)
    T = stress_energy(g, kappa)
    labels = _labels((4, 4), "T_")
    if field is None:
        rep = zero_test(list(T.flat), box, tol, name=name, labels=labels)
        return T, replace(rep, diagnostics="no parallel field supplied; " + rep.diagnostics)
    par = zero_test(list(parallel_residual(field).flat), box, tol, name="parallel_field")
    if not par.passed:
        return T, _error(name, box, tol, f"field {field.name} is not parallel "
                                         f"(residual {par.max_residual})")
    rep = zero_test(list(T.flat), box, tol, name=name, labels=labels)
    return T, replace(rep, diagnostics=f"field {field.name} parallel; " + rep.diagnostics)


@dataclass(frozen=True)
class FluidState:
    """Perfect fluid: energy density, pressure and a unit time-like 4-velocity."""

    energy: Expr
    pressure: Expr
    velocity: VectorFieldSpec

    def validate(self, box: SampleBox | None = None, tol: float = DEFAULT_TOL) -> CheckReport:
        u = self.velocity
        norm = add(*(mul(u.metric.g[i, j], u[i], u[j]) for i in RANGE for j in RANGE), Const(-1))
        return zero_test([norm], box or u.metric.box, tol, name="fluid_normalization",
                         labels=["g(u,u) - 1"])

    def stress_energy(self) -> np.ndarray:
        u_low = self.velocity.lowered
        g = self.velocity.metric.g
        s = add(self.pressure, self.energy)
        out = np.empty((DIM, DIM), dtype=object)
        for i in RANGE:
            for j in RANGE:
                out[i, j] = add(mul(s, u_low[i], u_low[j]), mul(Const(-1), self.pressure, g[i, j]))
        return out


def fluid_relations(fluid: FluidState, X: VectorFieldSpec,
                    kappa: float = DEFAULT_KAPPA) -> dict[str, Expr]:
    """Quantities in the argument that a parallel field forces a fluid source to vanish.

    ``trace``: g^ij T_ij - (eps - 3p), an identity for any unit u.
    ``contracted``: -kappa/2 (eps + 3p) u_i X^i, zero whenever R_jl X^l = 0.
    Its two factors are reported separately; the energy conditions that turn
    ``eps + 3p = 0`` into ``eps = p = 0`` are not checked.
    """
    g = fluid.velocity.metric
    T = fluid.stress_energy()
    ginv = g.inverse
    eps, p = fluid.energy, fluid.pressure
    trace = add(*(mul(ginv[i, j], T[i, j]) for i in RANGE for j in RANGE
                  if ginv[i, j] is not ZERO),
                mul(Const(-1), add(eps, mul(Const(-3), p))))
    u_dot_x = add(*(mul(u_i, x) for u_i, x in zip(fluid.velocity.lowered, X.components)))
    eps3p = add(eps, mul(Const(3), p))
    return {
        "trace": trace,
        "contracted": mul(Const(-kappa / 2), eps3p, u_dot_x),
        "eps_plus_3p": eps3p,
        "u_dot_X": u_dot_x,
    }


# null space of the Riemann contraction

@dataclass(frozen=True)
class NullSpace:
    basis: np.ndarray  # (dimension, 4), orthonormal rows
    dimension: int
    point_dimensions: tuple[int, ...]
    seed: int
    points: int

    def angle_to(self, vector: Sequence[float]) -> float:
        """Angle between ``vector`` and the null space (radians)."""
        v = np.asarray(vector, dtype=float)
        v = v / np.linalg.norm(v)
        if self.dimension == 0:
            return float(np.pi / 2)
        proj = self.basis.T @ (self.basis @ v)
        return float(np.arccos(np.clip(np.linalg.norm(proj), -1.0, 1.0)))


def _null_basis(A: np.ndarray, rel: float) -> np.ndarray:
    _, s, vt = np.linalg.svd(A)
    threshold = rel * (s[0] + 1e-300) if s.size else 0.0
    rank = int(np.sum(s > threshold))
    return vt[rank:]


def parallel_null_space(g: ChartMetric, box: SampleBox | None = None,
                        threshold: float = NULL_THRESHOLD) -> NullSpace:
    """Vectors v with R_ijkl v^l = 0 at every sampled point."""
    box = box or g.box
    env = box.sample()
    ev = Evaluator(env)
    R = np.empty((box.points, DIM, DIM, DIM, DIM))
    for idx in itertools.product(RANGE, repeat=4):
        R[(slice(None),) + idx] = np.broadcast_to(ev(g.riemann[idx]), (box.points,))
    complements = []
    dims = []
    for n in range(box.points):
        A = R[n].reshape(DIM**3, DIM)
        N = _null_basis(A, threshold)
        dims.append(N.shape[0])
        complements.append(np.eye(DIM) - N.T @ N)
    basis = _null_basis(np.vstack(complements), threshold)
    return NullSpace(basis, basis.shape[0], tuple(dims), box.seed, box.points)


def null_space_check(g: ChartMetric, expected: int, name: str = "null_space",
                     direction: Sequence[float] | None = None, angle_tol: float = 1e-6,
                     tol: float = DEFAULT_TOL, seed: int | None = None,
                     points: int | None = None) -> CheckReport:
    box = check_box(g.box, name, seed, points)
    ns = parallel_null_space(g, box)
    residual = float(abs(ns.dimension - expected))
    diag = f"null space dimension {ns.dimension} (expected {expected})"
    ok = ns.dimension == expected
    if ok and direction is not None and expected > 0:
        angle = ns.angle_to(direction)
        diag += f"; angle to {list(direction)} = {angle:.3e}"
        ok = angle <= angle_tol
        residual = angle if ok else max(angle, residual)
    return CheckReport(name, PASS if ok else FAIL, residual, None, tol, box.points, box.seed, diag)


# Robinson-Trautman

def rt_field_equation_residual(params: RTParams) -> Expr:
    """Laplacian of K minus (4/p^2)(d/dsigma - 3H) m."""
    K, H, p, m = params.K, params.H, params.p, params.m
    lap = add(diff(diff(K, "xi"), "xi"), diff(diff(K, "eta"), "eta"))
    rhs = mul(Const(4), power(p, -2), add(diff(m, "sigma"), mul(Const(-3), H, m)))
    return add(lap, mul(Const(-1), rhs))


def rt_field_equation_check(params: RTParams, box: SampleBox, tol: float = DEFAULT_TOL,
                            seed: int | None = None, points: int | None = None) -> CheckReport:
    name = "rt_field_equation"
    box = check_box(box, name, seed, points)
    return zero_test([rt_field_equation_residual(params)], box, tol, name=name,
                     labels=["lap K - 4/p^2 (d_sigma - 3H) m"])


def rt_flatness_check(params: RTParams, solution: RTSolution | None = None,
                      tol: float = DEFAULT_TOL, seed: int | None = None,
                      points: int | None = None) -> CheckReport:
    """All Riemann components vanish when dp/dsigma = 0, K const (and m = 0)."""
    from .catalog import robinson_trautman_metric

    solution = solution or robinson_trautman_metric(params)
    g = solution.metric
    name = "rt_flatness"
    box = check_box(g.box, name, seed, points)
    pre = zero_test([diff(params.p, "sigma"), diff(solution.K, "xi"), diff(solution.K, "eta"),
                     diff(solution.K, "sigma")], box, tol, name="rt_flatness_preconditions",
                    labels=["dp/dsigma", "dK/dxi", "dK/deta", "dK/dsigma"])
    if not pre.passed:
        return _error(name, box, tol, f"constraint violated: {pre.diagnostics}")
    idx = independent_riemann_indices()
    rep = zero_test([g.riemann[i] for i in idx], box, tol, name=name,
                    labels=["R_" + "".join(map(str, i)) for i in idx])
    return rep


def independent_riemann_indices() -> list[tuple[int, int, int, int]]:
    """The 20 algebraically independent index sets (i<j, k<l, (ij) <= (kl), Bianchi-reduced)."""
    pairs = [(i, j) for i in RANGE for j in RANGE if i < j]
    out = [(a + b) for n, a in enumerate(pairs) for b in pairs[n:]]
    out.remove((0, 3, 1, 2))  # fixed by the first Bianchi identity
    return out


def rt_obstruction_check(g: ChartMetric, tol: float = DEFAULT_TOL, seed: int | None = None,
                         points: int | None = None) -> CheckReport:
    """A curved Robinson-Trautman metric admits no nonzero parallel vector.

    A flat member (null space of dimension 4) is the trivial exception and passes.
    """
    name = "rt_obstruction"
    box = check_box(g.box, name, seed, points)
    ns = parallel_null_space(g, box)
    ok = ns.dimension in (0, DIM)
    diag = f"null space dimension {ns.dimension}"
    if ns.dimension == DIM:
        diag += " (flat member)"
    return CheckReport(name, PASS if ok else FAIL, 0.0 if ok else float(ns.dimension), None,
                       tol, box.points, box.seed, diag)


# two-dimensional flatness of the transverse block

def gaussian_curvature(gamma, u: str, v: str) -> Expr:
    """Gaussian curvature of E du^2 + 2F du dv + G dv^2 (Brioschi formula)."""
    E, F, G = gamma[0][0], gamma[0][1], gamma[1][1]
    half = Const(Fraction(1, 2))
    neg = lambda e: mul(Const(-1), e)  # noqa: E731
    Eu, Ev, Fu, Fv, Gu, Gv = (diff(E, u), diff(E, v), diff(F, u), diff(F, v), diff(G, u),
                              diff(G, v))
    from .geometry import determinant

    m1 = [[add(neg(mul(half, diff(Ev, v))), diff(Fu, v), neg(mul(half, diff(Gu, u)))),
           mul(half, Eu), add(Fu, neg(mul(half, Ev)))],
          [add(Fv, neg(mul(half, Gu))), E, F],
          [mul(half, Gv), F, G]]
    m2 = [[ZERO, mul(half, Ev), mul(half, Gu)],
          [mul(half, Ev), E, F],
          [mul(half, Gu), F, G]]
    denom = add(mul(E, G), neg(power(F, 2)))
    return mul(add(determinant(m1), neg(determinant(m2))), power(denom, -2))


def two_dim_flatness_check(gamma, box: SampleBox, u: str = "x2", v: str = "x3",
                           tol: float = DEFAULT_TOL, seed: int | None = None,
                           points: int | None = None) -> CheckReport:
    name = "two_dim_flatness"
    box = check_box(box, name, seed, points)
    E, F, G = gamma[0][0], gamma[0][1], gamma[1][1]
    if gamma[1][0] is not F:
        return _error(name, box, tol, "block is not symmetric")
    env = box.sample()
    ev = Evaluator(env)
    e, f, gg = (np.broadcast_to(ev(x), (box.points,)) for x in (E, F, G))
    if not (np.all(e > 0) and np.all(e * gg - f * f > 0)):
        return _error(name, box, tol, "block is not positive definite on the box")
    return zero_test([gaussian_curvature(gamma, u, v)], box, tol, name=name,
                     labels=["gaussian curvature"])


# generic checks used by the suite runner

def ricci_flat_check(g, tol=DEFAULT_TOL, seed=None, points=None) -> CheckReport:
    box = check_box(g.box, "ricci_flat", seed, points)
    return zero_test(list(g.ricci.flat), box, tol, name="ricci_flat", labels=_labels((4, 4), "R_"))


def inverse_metric_check(g, tol=DEFAULT_TOL, seed=None, points=None) -> CheckReport:
    name = "inverse_metric"
    box = check_box(g.box, name, seed, points)
    ginv = g.inverse
    res = []
    for i in RANGE:
        for j in RANGE:
            s = add(*(mul(ginv[i, k], g.g[k, j]) for k in RANGE))
            res.append(add(s, Const(-1)) if i == j else s)
    return zero_test(res, box, tol, name=name, labels=_labels((4, 4), "g^ik g_kj - delta "))


def riemann_symmetries_check(g, tol=DEFAULT_TOL, seed=None, points=None) -> CheckReport:
    name = "riemann_symmetries"
    box = check_box(g.box, name, seed, points)
    groups = riemann_symmetry_residuals(g)
    exprs, labels = [], []
    for key, values in groups.items():
        exprs += values
        labels += [f"{key} {''.join(map(str, idx))}" for idx in itertools.product(RANGE, repeat=4)]
    return zero_test(exprs, box, tol, name=name, labels=labels)


def metric_compatibility_check(g, tol=DEFAULT_TOL, seed=None, points=None) -> CheckReport:
    name = "metric_compatibility"
    box = check_box(g.box, name, seed, points)
    res = metric_compatibility(g)
    return zero_test(list(res.flat), box, tol, name=name, labels=_labels(res.shape, "D g_"))


def bianchi_divergence_check(g, tol=DEFAULT_TOL, seed=None, points=None) -> CheckReport:
    name = "bianchi_divergence"
    box = check_box(g.box, name, seed, points)
    res = riemann_divergence(g)
    return zero_test(list(res.flat), box, tol, name=name, labels=_labels(res.shape, "D_i R^i_"))


def contracted_bianchi_check(g, tol=DEFAULT_TOL, seed=None, points=None) -> CheckReport:
    name = "contracted_bianchi"
    box = check_box(g.box, name, seed, points)
    res = list(contracted_bianchi_residual(g).flat) + list(einstein_divergence(g).flat)
    labels = _labels((4, 4, 4), "D_i R^i_jkl - D_k R_jl + D_l R_jk ") + \
        _labels((4,), "2 D^i G_ij ")
    return zero_test(res, box, tol, name=name, labels=labels)


def parallel_field_check(X: VectorFieldSpec, tol=DEFAULT_TOL, seed=None,
                         points=None) -> CheckReport:
    """Parallel, gradient, light-like and both integrability conditions for X."""
    name = "parallel_field"
    box = check_box(X.metric.box, name, seed, points)
    full, contracted = integrability_residuals(X)
    subs = [
        zero_test(list(parallel_residual(X).flat), box, tol, name="covariantly_constant",
                  labels=_labels((4, 4), "X^i;j ")),
        zero_test(list(gradient_residual(X).flat), box, tol, name="gradient",
                  labels=_labels((4, 4), "curl ")),
        zero_test(list(full.flat), box, tol, name="riemann_contraction",
                  labels=_labels((4, 4, 4), "R_ijkl X^l ")),
        zero_test(list(contracted.flat), box, tol, name="ricci_contraction",
                  labels=_labels((4,), "R_jl X^l ")),
    ]
    causal = causal_character(X, box, tol)
    light = causal.report
    if causal.character != LIGHT_LIKE:
        light = replace(light, status=FAIL, diagnostics=f"field is {causal.character}")
    subs.append(light.renamed("light_like"))
    return combine(name, subs, box, tol, extra=f"field {X.name}")


def reduced_chart_flatness_check(g: ChartMetric, tol=DEFAULT_TOL, seed=None,
                                 points=None) -> CheckReport:
    """Gaussian curvature of the transverse block of an adapted metric."""
    name = "two_dim_flatness"
    try:
        gamma = spatial_subblock(g)
    except GeometryError as err:
        box = check_box(g.box, name, seed, points)
        return _error(name, box, tol, str(err))
    return two_dim_flatness_check([[gamma[0, 0], gamma[0, 1]], [gamma[1, 0], gamma[1, 1]]],
                                  g.box, g.chart[2], g.chart[3], tol, seed, points)


curvature_closed_form_check = closed_form_curvature_check


def inverse_closed_form_residuals(g: ChartMetric) -> dict[str, Expr]:
    """Determinant and inverse-metric identities of the adapted null form."""
    gg, ginv, det = g.g, g.inverse, g.determinant
    neg = lambda e: mul(Const(-1), e)  # noqa: E731
    rdet = power(det, -1)
    return {
        "det - (g23^2 - g22 g33)": add(det, neg(power(gg[2, 3], 2)), mul(gg[2, 2], gg[3, 3])),
        "g^01 - 1": add(ginv[0, 1], Const(-1)),
        "g^11": ginv[1, 1],
        "g^12": ginv[1, 2],
        "g^13": ginv[1, 3],
        "g^22 + g33/det": add(ginv[2, 2], mul(gg[3, 3], rdet)),
        "g^33 + g22/det": add(ginv[3, 3], mul(gg[2, 2], rdet)),
        "g^23 - g23/det": add(ginv[2, 3], neg(mul(gg[2, 3], rdet))),
    }


def inverse_closed_form_check(g: ChartMetric, tol: float = DEFAULT_TOL, seed=None,
                              points=None) -> CheckReport:
    """Closed-form inverse of an adapted metric, plus det < 0 on the box."""
    name = "inverse_closed_form"
    box = check_box(g.box, name, seed, points)
    if not is_adapted(g):
        return _error(name, box, tol, "metric is not in the adapted null form")
    res = inverse_closed_form_residuals(g)
    rep = zero_test(list(res.values()), box, tol, name=name, labels=list(res))
    det = np.broadcast_to(Evaluator(box.sample())(g.determinant), (box.points,))
    if rep.passed and not np.all(det < 0):
        return replace(rep, status=FAIL, diagnostics="determinant is not negative on the box")
    return rep


# suite registry

@dataclass(frozen=True)
class Subject:
    """Everything a suite run may look at: the metric plus optional family data."""

    metric: ChartMetric
    fields: tuple[VectorFieldSpec, ...] = ()
    rt: RTParams | None = None
    family: str = ""


@dataclass(frozen=True)
class SuiteCheck:
    name: str
    applies: Callable[[Subject], bool]
    run: Callable[[Subject, float, int | None, int | None], CheckReport]
    doc: str = ""


def _always(_: Subject) -> bool:
    return True


def _adapted(s: Subject) -> bool:
    return is_adapted(s.metric)


def _standard(s: Subject) -> bool:
    return is_standard_frame(s.metric)


def _vacuum(s: Subject) -> bool:
    g = s.metric
    return zero_test(list(g.ricci.flat), check_box(g.box, "ricci_flat")).passed


def _vacuum_standard(s: Subject) -> bool:
    return is_standard_frame(s.metric) and _vacuum(s)


def _has_fields(s: Subject) -> bool:
    return bool(s.fields)


def _is_rt(s: Subject) -> bool:
    return s.rt is not None


def _rt_trivial_branch(s: Subject) -> bool:
    if s.rt is None:
        return False
    box = check_box(s.metric.box, "rt_flatness")
    K = s.rt.K
    exprs = [s.rt.m, diff(s.rt.p, "sigma"), diff(K, "xi"), diff(K, "eta"), diff(K, "sigma")]
    return zero_test(exprs, box).passed


def _field_check(s: Subject, tol, seed, points) -> CheckReport:
    reports = [parallel_field_check(X, tol, seed, points) for X in s.fields]
    if len(reports) == 1:
        return reports[0]
    box = check_box(s.metric.box, "parallel_field", seed, points)
    return combine("parallel_field", reports, box, tol)


def _stress_check(s: Subject, tol, seed, points) -> CheckReport:
    reports = [stress_energy_reconstruct(s.metric, DEFAULT_KAPPA, X, tol, seed, points)[1]
               for X in s.fields]
    if len(reports) == 1:
        return reports[0]
    box = check_box(s.metric.box, "stress_energy", seed, points)
    return combine("stress_energy", reports, box, tol)


def _null_check(s: Subject, tol, seed, points) -> CheckReport:
    """Every declared field lies in the common null space of R_ijkl(.)v^l."""
    name = "null_space"
    box = check_box(s.metric.box, name, seed, points)
    ns = parallel_null_space(s.metric, box)
    worst = 0.0
    parts = [f"null space dimension {ns.dimension}"]
    ev = Evaluator(box.sample())
    for X in s.fields:
        vals = np.array([np.broadcast_to(ev(c), (box.points,)) for c in X.components]).T
        angles = [ns.angle_to(v) for v in vals if np.linalg.norm(v) > 0]
        a = max(angles) if angles else float(np.pi / 2)
        parts.append(f"max angle of {X.name} = {a:.3e}")
        worst = max(worst, a)
    ok = ns.dimension >= 1 and worst <= 1e-6
    return CheckReport(name, PASS if ok else FAIL, worst, None, tol, box.points, box.seed,
                       "; ".join(parts))


def _metric_check(fn):
    return lambda s, tol, seed, points: fn(s.metric, tol, seed, points)


SUITE: dict[str, SuiteCheck] = {c.name: c for c in (
    SuiteCheck("bianchi_divergence", _vacuum, _metric_check(bianchi_divergence_check),
               "D_i R^i_jkl = 0 where Ricci vanishes"),
    SuiteCheck("cauchy_riemann", _vacuum_standard, _metric_check(cauchy_riemann_check),
               "trace, divergence and Cauchy-Riemann relations of the transverse curvature"),
    SuiteCheck("closed_form_curvature", _standard, _metric_check(closed_form_curvature_check),
               "engine curvature equals the standard-frame closed forms"),
    SuiteCheck("contracted_bianchi", _always, _metric_check(contracted_bianchi_check),
               "contracted Bianchi identity and divergence-free Einstein tensor"),
    SuiteCheck("inverse_closed_form", _adapted, _metric_check(inverse_closed_form_check),
               "determinant and inverse of the adapted null form"),
    SuiteCheck("inverse_metric", _always, _metric_check(inverse_metric_check),
               "g^ik g_kj = delta"),
    SuiteCheck("metric_compatibility", _always, _metric_check(metric_compatibility_check),
               "D_k g_ij = 0"),
    SuiteCheck("null_space", _has_fields, _null_check,
               "declared fields lie in the null space of the Riemann contraction"),
    SuiteCheck("parallel_field", _has_fields, _field_check,
               "declared fields are parallel, gradient and light-like"),
    SuiteCheck("reduced_vacuum", _adapted, _metric_check(reduced_vacuum_check),
               "reduced vacuum conditions, cross-checked against the full Ricci tensor"),
    SuiteCheck("ricci_flat", _always, _metric_check(ricci_flat_check), "R_jl = 0"),
    SuiteCheck("riemann_symmetries", _always, _metric_check(riemann_symmetries_check),
               "algebraic symmetries and first Bianchi identity"),
    SuiteCheck("rt_field_equation", _is_rt,
               lambda s, tol, seed, points: rt_field_equation_check(s.rt, s.metric.box, tol,
                                                                    seed, points),
               "Robinson-Trautman field equation for K and m"),
    SuiteCheck("rt_flatness", _rt_trivial_branch,
               lambda s, tol, seed, points: rt_flatness_check(
                   s.rt, RTSolution(s.metric, s.rt.H, s.rt.K), tol, seed, points),
               "the trivial Robinson-Trautman branch is flat"),
    SuiteCheck("rt_obstruction", _is_rt, _metric_check(rt_obstruction_check),
               "curved Robinson-Trautman metrics admit no parallel vector"),
    SuiteCheck("stress_energy", _has_fields, _stress_check,
               "a parallel field forces the reconstructed stress-energy to vanish"),
    SuiteCheck("two_dim_flatness", _adapted, _metric_check(reduced_chart_flatness_check),
               "the transverse 2x2 block is flat"),
)}

CHECK_NAMES = tuple(sorted(SUITE))


class UnknownCheckError(KeyError):
    pass


def select_checks(subject: Subject, suite: str = "all") -> list[SuiteCheck]:
    """Checks to run, sorted by name; ``all`` keeps only those that apply."""
    if suite == "all":
        return [SUITE[n] for n in CHECK_NAMES if SUITE[n].applies(subject)]
    names = [n.strip() for n in suite.split(",") if n.strip()]
    unknown = [n for n in names if n not in SUITE]
    if unknown:
        raise UnknownCheckError(f"unknown check(s): {', '.join(unknown)}")
    return [SUITE[n] for n in sorted(set(names))]


def run_check(check: SuiteCheck, subject: Subject, tol: float = DEFAULT_TOL,
              seed: int | None = None, points: int | None = None) -> CheckReport:
    try:
        return check.run(subject, tol, seed, points)
    except (ArithmeticError, ValueError) as err:
        box = check_box(subject.metric.box, check.name, seed, points)
        return _error(check.name, box, tol, f"{type(err).__name__}: {err}")


def run_suite(subject: Subject, suite: str = "all", tol: float = DEFAULT_TOL,
              seed: int | None = None, points: int | None = None,
              threads: int = 1) -> list[CheckReport]:
    """Run the selected checks and return reports sorted by check name."""
    checks = select_checks(subject, suite)
    if threads <= 1 or len(checks) <= 1:
        reports = [run_check(c, subject, tol, seed, points) for c in checks]
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(lambda c: run_check(c, subject, tol, seed, points), checks))
    return sorted(reports, key=lambda r: r.check)
