"""Acceptance criteria, one test each, at their stated tolerances.

Every test prints a single ``criterion N: PASS|FAIL`` line to the terminal
(visible even without ``-s``) before asserting.
"""

import json
from functools import lru_cache
from pathlib import Path

import numpy as np

from exprfuzz import random_point, random_source
from lightlike.catalog import (
    PPWaveParams,
    adapted_metric,
    harmonic_polynomial,
    peres_metric,
    pp_wave_metric,
    robinson_trautman_metric,
    standard_frame_metric,
)
from lightlike.cli import main
from lightlike.exprcore import Const, Evaluator, diff, fd_derivative, parse, to_string, zero_test
from lightlike.oracle import riemann_fd, sample_coords
from lightlike.transport import rectangle_loop, transport
from lightlike.verify import (
    bianchi_divergence_check,
    cauchy_riemann_check,
    closed_form_curvature_check,
    contracted_bianchi_check,
    inverse_closed_form_check,
    parallel_null_space,
    stress_energy_reconstruct,
)

TOL = 1e-9
POINTS = 200
MANIFESTS = Path(__file__).resolve().parent.parent / "manifests"
NULL = ("x0", "x1", "x2", "x3")
RT = ("rho", "sigma", "xi", "eta")


def verdict(capsys, n, ok, detail=""):
    with capsys.disabled():
        print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def values(expr, env):
    n = len(next(iter(env.values())))
    return np.broadcast_to(np.asarray(Evaluator(env)(expr), dtype=float), (n,))


@lru_cache(maxsize=None)
def family():
    """Ten seeded vacuum pp-waves covering the polynomial and trig branches."""
    rng = np.random.default_rng(2024)
    coeffs = ("1", "cos(x1)", "1 + x1^2", "2 - sin(x1)")
    out = []
    for k in range(10):
        a, b = (int(v) for v in rng.integers(1, 4, size=2))
        if k % 2:
            f = f"sin({a}*x1)*x2^2 + cos(x3)*x2/{b}"
        else:
            f = f"{a}*x1*x2*x3 + {b}*x2^2*x3 - x1^3"
        phi = ["0", f"{rng.uniform(0.2, 1.5):.3f}", "sin(x1)"][k % 3]
        h = harmonic_polynomial(int(rng.integers(0, 5)), coeffs[k % 4], "re" if k % 4 < 2 else "im")
        out.append(pp_wave_metric(PPWaveParams.parse(f, phi, to_string(h))))
    return tuple(out)


def test_criterion_1_vacuum_family(capsys):
    worst, bad = 0.0, []
    for k, sol in enumerate(family()):
        rep = zero_test(list(sol.metric.ricci.flat), sol.metric.box, TOL)
        worst = max(worst, rep.max_residual)
        if not rep.passed:
            bad.append(k)
    verdict(capsys, 1, not bad, f"10 pp-waves, worst Ricci residual {worst:.2e}, failing {bad}")


def test_criterion_2_sign_calibration(capsys):
    f_src = "x*y^2*z + sin(y)*z^2 + y^3"
    g = peres_metric(f_src).metric
    f = parse(f_src, g.chart)
    fyy, fzz, fyz = diff(diff(f, "y"), "y"), diff(diff(f, "z"), "z"), diff(diff(f, "y"), "z")
    expected = {(1, 2, 1, 2): fyy, (1, 3, 1, 3): fzz, (1, 2, 1, 3): fyz, (1, 3, 1, 2): fyz}
    R = g.riemann
    rel = zero_test([R[k] - v for k, v in expected.items()], g.box, TOL)
    env = g.box.sample()
    worst_other = 0.0
    for idx in np.ndindex(4, 4, 4, 4):
        i, j, k, l = idx
        # the four pairs above, up to the antisymmetries of each index pair
        canon = (min(i, j), max(i, j), min(k, l), max(k, l))
        if canon in expected and i != j and k != l:
            continue
        worst_other = max(worst_other, float(np.max(np.abs(values(R[idx], env)))))
    ok = rel.passed and worst_other <= TOL
    verdict(capsys, 2, ok, f"relative {rel.max_residual:.2e}, other components {worst_other:.2e}")


def test_criterion_3_closed_form_curvature(capsys):
    rng = np.random.default_rng(3)
    worst, bad = 0.0, 0
    for _ in range(5):
        a, b, c = (int(v) for v in rng.integers(1, 5, size=3))
        g = standard_frame_metric(f"{a}*x1*x2^2 + sin(x3)*x1 + x2^{c}*x3",
                                  f"x1^2*x3/{b} + x2*x3 + cos(x1*x2)",
                                  f"cos(x1)*x2^{c} + x3 + {a}*x1*x3^2")
        rep = closed_form_curvature_check(g, TOL, points=POINTS)
        worst = max(worst, rep.max_residual)
        bad += not rep.passed
    verdict(capsys, 3, bad == 0, f"5 standard-frame metrics, worst residual {worst:.2e}")


def test_criterion_4_inverse_closed_forms(capsys):
    rng = np.random.default_rng(4)
    worst, bad = 0.0, 0
    for _ in range(5):
        a, b, c = (int(v) for v in rng.integers(1, 4, size=3))
        g = adapted_metric(f"{a}*x1*x2 + sin(x3)", f"x3*x1/{b}", "x2^2 + x1",
                           f"-2 - x1^2/{c}", f"x2*x3/{a + 4}", "-1 - x3^2 - x1^2/5")
        rep = inverse_closed_form_check(g, tol=1e-12, points=POINTS)
        worst = max(worst, rep.max_residual)
        bad += not rep.passed
    verdict(capsys, 4, bad == 0, f"5 adapted metrics, worst residual {worst:.2e}")


def test_criterion_5_robinson_trautman_components(capsys):
    sol = robinson_trautman_metric(p="1 + (xi^2 + eta^2)/4", m="m0", values={"m0": 0.5})
    g, K = sol.metric, sol.K
    rho, m = parse("rho", RT), parse("m0", RT, ("m0",))
    p = parse("1 + (xi^2 + eta^2)/4", RT)
    two = Const(2)
    R = g.riemann
    quoted = {
        "R_0101": (R[0, 1, 0, 1], two * m / rho ** 3),
        "R_0112": (R[0, 1, 1, 2], -diff(K, "xi") / (two * rho)),
        "R_0113": (R[0, 1, 1, 3], -diff(K, "eta") / (two * rho)),
        "R_1202": (R[1, 2, 0, 2], -m / (rho * p ** 2)),
        "R_1303": (R[1, 3, 0, 3], -m / (rho * p ** 2)),
        "R_1223": (R[1, 2, 2, 3], rho * diff(K, "eta") / (two * p ** 2)),
        "R_1323": (R[1, 3, 2, 3], diff(K, "xi") / (two * p ** 2)),
        "R_2323": (R[2, 3, 2, 3], -m * rho / p ** 4),
    }
    failing = [name for name, (engine, printed) in quoted.items()
               if not zero_test([engine - printed], g.box, 1e-8).passed]
    coords, fixed, env = sample_coords(g, points=20, seed=5)
    fd = riemann_fd(g, coords, fixed)
    fd_err = 0.0
    for idx in ((1, 2, 1, 2), (1, 2, 1, 3), (1, 3, 1, 3)):
        exact = values(R[idx], env)
        fd_err = max(fd_err, float(np.max(np.abs(exact - fd[(slice(None),) + idx])
                                          / np.maximum(1.0, np.abs(exact)))))
    ok = not failing and fd_err <= 1e-5
    detail = f"quoted components failing {failing or 'none'}, FD oracle error {fd_err:.2e}"
    if failing == ["R_2323"]:
        detail += " (engine and FD oracle give -2 m rho / p^4; the quoted form is off by 2)"
    verdict(capsys, 5, ok, detail)


def test_criterion_6_null_spaces(capsys):
    rt = robinson_trautman_metric(p="1 + (xi^2 + eta^2)/4", m="m0", values={"m0": 0.5}).metric
    rt_dim = parallel_null_space(rt).dimension
    dims, angles = [], []
    for sol in family():
        g = sol.metric
        if zero_test(list(g.riemann.flat), g.box, TOL).passed:
            continue
        ns = parallel_null_space(g)
        dims.append(ns.dimension)
        angles.append(ns.angle_to((1, 0, 0, 0)) if ns.dimension == 1 else np.inf)
    ok = rt_dim == 0 and dims and set(dims) == {1} and max(angles) <= 1e-6
    verdict(capsys, 6, ok, f"RT dimension {rt_dim}; {len(dims)} curved pp-waves, dimensions "
                           f"{sorted(set(dims))}, worst angle {max(angles):.1e}")


def test_criterion_7_rt_flat_branch(capsys):
    sol = robinson_trautman_metric(p="1 + (xi^2 + eta^2)/4", m="0")
    g = sol.metric
    k_one = zero_test([sol.K - Const(1)], g.box, TOL).passed
    env = g.box.sample()
    worst = max(float(np.max(np.abs(values(e, env)))) for e in g.riemann.flat)
    verdict(capsys, 7, k_one and worst <= TOL, f"K = 1: {k_one}, max |R_ijkl| {worst:.2e}")


def test_criterion_8_stress_energy_vanishes(capsys):
    worst, bad = 0.0, 0
    for sol in family():
        _, rep = stress_energy_reconstruct(sol.metric, field=sol.field, tol=TOL, points=POINTS)
        worst = max(worst, rep.max_residual)
        bad += not rep.passed
    verdict(capsys, 8, bad == 0, f"worst T_ij residual {worst:.2e}")


def test_criterion_9_cauchy_riemann(capsys):
    worst, bad = 0.0, 0
    for sol in family():
        rep = cauchy_riemann_check(sol.metric, TOL, points=POINTS)
        worst = max(worst, rep.max_residual)
        bad += not rep.passed
    verdict(capsys, 9, bad == 0, f"trace, divergence and Cauchy-Riemann worst {worst:.2e}")


def test_criterion_10_bianchi(capsys):
    worst, bad = 0.0, 0
    for sol in family():
        rep = bianchi_divergence_check(sol.metric, 1e-8, points=POINTS)
        worst = max(worst, rep.max_residual)
        bad += not rep.passed
    witnesses = [
        standard_frame_metric("x2^2 + x1*x3", "x1*x3^2", "sin(x2)"),
        robinson_trautman_metric(p="1 + xi^2/3 + sigma*eta/5", m="1 + sigma/4").metric,
    ]
    non_vacuum = [not zero_test(list(w.ricci.flat), w.box, TOL).passed for w in witnesses]
    contracted = [contracted_bianchi_check(w, 1e-7, points=POINTS) for w in witnesses]
    ok = bad == 0 and all(non_vacuum) and all(r.passed for r in contracted)
    cworst = max(r.max_residual for r in contracted)
    verdict(capsys, 10, ok, f"divergence worst {worst:.2e}; contracted identity on "
                            f"non-vacuum witnesses {cworst:.2e}")


def test_criterion_11_differentiation_oracle(capsys):
    rng = np.random.default_rng(11)
    worst, bad = 0.0, 0
    for _ in range(1000):
        e = parse(random_source(rng), NULL, ("c",))
        coord = str(rng.choice(NULL))
        pt = random_point(rng)
        exact = float(np.asarray(Evaluator({k: np.array([v]) for k, v in pt.items()})(
            diff(e, coord))).reshape(-1)[0])
        err = abs(exact - fd_derivative(e, coord, pt, 1e-4)) / max(1.0, abs(exact))
        worst = max(worst, err)
        bad += err > 1e-5
    verdict(capsys, 11, bad == 0, f"1000 triples, worst relative error {worst:.2e}")


def test_criterion_12_holonomy(capsys):
    g = pp_wave_metric(f="x1*x2*x3", phi="0", h="x2^2 - x3^2").metric
    rng = np.random.default_rng(12)
    null_worst, deviating, ratios = 0.0, 0, []
    for k in range(10):
        axes = (1, 2) if k % 2 == 0 else (1, 3)
        sides = rng.uniform(0.71, 1.2, size=2)
        center = rng.uniform(-0.5, 0.5, size=4)
        assert sides.prod() >= 0.5
        loop = rectangle_loop(center, axes, tuple(sides))
        null_worst = max(null_worst, transport(g, loop, (1, 0, 0, 0)).deviation)
        probe = transport(g, loop, (0, 0, 1, 1)).deviation
        deviating += probe >= 1e-4
        half = transport(g, rectangle_loop(center, axes, tuple(sides / 2)), (0, 0, 1, 1))
        ratios.append(probe / half.deviation)
    ok = null_worst <= 1e-7 and deviating >= 8 and all(abs(r - 4) <= 0.4 for r in ratios)
    verdict(capsys, 12, ok, f"null return {null_worst:.1e}, probe deviates on {deviating}/10, "
                            f"halving ratio {min(ratios):.3f}-{max(ratios):.3f}")


def test_criterion_13_determinism(capsys):
    manifest = str(MANIFESTS / "pp_wave.json")
    outs = []
    for threads in ("1", "1", "8"):
        code = main(["check", manifest, "--suite", "all", "--json", "--threads", threads])
        outs.append((code, capsys.readouterr().out))
    lines = [json.loads(x) for x in outs[0][1].splitlines()]
    ok = outs[0] == outs[1] == outs[2] and len(lines) > 0
    verdict(capsys, 13, ok, f"{len(lines)} reports, byte-identical across runs and 1 vs 8 threads")
