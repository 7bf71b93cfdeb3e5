import numpy as np
import pytest

from lightlike.catalog import (
    adapted_metric,
    minkowski,
    minkowski_null_chart,
    peres_metric,
    standard_frame_metric,
)
from lightlike.exprcore import ZERO, Const, parse, zero_test
from lightlike.geometry import (
    ChartMetric,
    GeometryError,
    SingularMetricError,
    contracted_bianchi_residual,
    covariant_derivative,
    einstein_divergence,
    metric_compatibility,
    riemann_divergence,
    riemann_symmetry_residuals,
    spatial_subblock,
)
from lightlike.oracle import ricci_fd, riemann_fd, sample_coords


def flat(arr):
    return list(np.asarray(arr).flat)


def vanishes(g, exprs, tol=1e-9):
    return zero_test(list(exprs), g.box, tol)


def test_minkowski_inverse_and_connection():
    g = minkowski()
    assert all(g.inverse[i, j] is g.g[i, j] for i in range(4) for j in range(4))
    assert all(e is ZERO for e in g.christoffel.flat)
    assert all(e is ZERO for e in g.riemann.flat)
    assert g.scalar is ZERO


def test_construction_checks():
    with pytest.raises(GeometryError):
        ChartMetric(("t", "x", "y", "z"), [["1", "x", "0", "0"], ["0", "-1", "0", "0"],
                                           ["0", "0", "-1", "0"], ["0", "0", "0", "-1"]])
    with pytest.raises(Exception):
        ChartMetric(("t", "x", "y", "z"), [["1", "0", "0", "0"], ["0", "-1", "0", "0"],
                                           ["0", "0", "-q", "0"], ["0", "0", "0", "-1"]])
    singular = ChartMetric(("t", "x", "y", "z"), [["1", "1", "0", "0"], ["1", "1", "0", "0"],
                                                  ["0", "0", "-1", "0"], ["0", "0", "0", "-1"]])
    with pytest.raises(SingularMetricError):
        singular.inverse


def test_inverse_closed_forms_adapted_chart():
    g = adapted_metric("x1*x2", "x3", "x2*x1", "-2 - x1^2", "x2/3", "-1 - x3^2")
    ginv, det = g.inverse, g.determinant
    gg = g.g
    res = [ginv[0, 1] - Const(1), ginv[1, 1], ginv[1, 2], ginv[1, 3],
           ginv[2, 2] + gg[3, 3] / det, ginv[3, 3] + gg[2, 2] / det, ginv[2, 3] - gg[2, 3] / det,
           det - (gg[2, 3] ** 2 - gg[2, 2] * gg[3, 3])]
    assert vanishes(g, res, 1e-12).passed


def test_christoffel_examples(schwarzschild_rt, generic_pp_wave):
    rho = parse("rho", ("rho", "sigma", "xi", "eta"))
    g = schwarzschild_rt.metric
    assert vanishes(g, [g.christoffel[2, 2, 0] - 1 / rho]).passed
    gp = generic_pp_wave.metric
    assert all(gp.christoffel[i, j, 0] is ZERO for i in range(4) for j in range(4))
    for i in range(4):
        for j in range(4):
            for k in range(4):
                assert g.christoffel[i, j, k] is g.christoffel[i, k, j]


def test_peres_components_are_calibrated():
    """The Riemann convention reproduces R_1212 = f_yy, R_1313 = f_zz, R_1213 = f_yz."""
    g = peres_metric("x*y^2*z + y^3 - 3*y*z^2 + sin(x)*y*z").metric
    f = parse("x*y^2*z + y^3 - 3*y*z^2 + sin(x)*y*z", g.chart)
    from lightlike.exprcore import diff

    R = g.riemann
    assert vanishes(g, [R[1, 2, 1, 2] - diff(diff(f, "y"), "y"),
                        R[1, 3, 1, 3] - diff(diff(f, "z"), "z"),
                        R[1, 2, 1, 3] - diff(diff(f, "y"), "z")]).passed


def test_rt_mass_component(schwarzschild_rt):
    g = schwarzschild_rt.metric
    m0, rho = parse("m0", g.chart, ("m0",)), parse("rho", g.chart)
    assert vanishes(g, [g.riemann[0, 1, 0, 1] - 2 * m0 / rho ** 3]).passed


def test_riemann_symmetries(generic_pp_wave, schwarzschild_rt, peres_harmonic):
    for sol in (generic_pp_wave, schwarzschild_rt, peres_harmonic):
        g = sol.metric
        for name, exprs in riemann_symmetry_residuals(g).items():
            assert vanishes(g, exprs).passed, name


def test_engine_matches_fd_oracle(generic_pp_wave, schwarzschild_rt):
    from lightlike.exprcore import Evaluator

    for sol in (generic_pp_wave, schwarzschild_rt):
        g = sol.metric
        coords, fixed, env = sample_coords(g, points=20, seed=3)
        ev = Evaluator(env)
        sym = np.array([np.broadcast_to(ev(e), (20,)) for e in g.riemann.flat]).T.reshape(20, 4, 4, 4, 4)
        fd = riemann_fd(g, coords, fixed)
        assert np.max(np.abs(fd - sym)) < 1e-6


def test_peres_nonharmonic_ricci_via_oracle():
    g = peres_metric("y^2").metric
    coords, fixed, _ = sample_coords(g, points=10, seed=1)
    ric = ricci_fd(g, coords, fixed)
    # R_11 = g^22 R_2121 + g^33 R_3131 = -(f_yy + f_zz) = -2
    assert np.allclose(ric[:, 1, 1], -2.0, atol=1e-6)
    assert g.ricci[1, 1] is Const(-2)


def test_ricci_flat_examples(generic_pp_wave, peres_harmonic):
    from lightlike.catalog import pp_wave_metric

    for g in (generic_pp_wave.metric, peres_harmonic.metric,
              pp_wave_metric(f="x1*x2*x3", h="x2*x3").metric, minkowski()):
        assert vanishes(g, g.ricci.flat).passed


def test_covariant_derivative_examples(generic_pp_wave, schwarzschild_rt):
    g = generic_pp_wave.metric
    X = np.array([Const(1), ZERO, ZERO, ZERO], dtype=object)
    X_low = np.array([g.g[i, 0] for i in range(4)], dtype=object)
    assert vanishes(g, flat(covariant_derivative(X, "u", g))).passed
    assert vanishes(g, flat(covariant_derivative(X_low, "l", g))).passed
    gr = schwarzschild_rt.metric
    assert vanishes(gr, flat(metric_compatibility(gr))).passed
    m = minkowski()
    const = np.array([Const(1), Const(2), Const(3), Const(4)], dtype=object)
    assert all(e is ZERO for e in covariant_derivative(const, "u", m).flat)
    with pytest.raises(Exception):
        covariant_derivative(np.zeros((4,) * 6, dtype=object), "llllll", m)


def test_riemann_divergence(generic_pp_wave, schwarzschild_rt):
    for g in (generic_pp_wave.metric, schwarzschild_rt.metric, minkowski()):
        assert vanishes(g, flat(riemann_divergence(g)), 1e-8).passed


def test_contracted_bianchi_nonvacuum():
    g = peres_metric("y^2 + x*z^3").metric
    assert not vanishes(g, flat(riemann_divergence(g))).passed
    assert vanishes(g, flat(contracted_bianchi_residual(g)), 1e-7).passed
    assert vanishes(g, flat(einstein_divergence(g)), 1e-7).passed


def test_spatial_subblock(schwarzschild_rt):
    for g in (standard_frame_metric("x2^2", "x1", "0"), minkowski_null_chart()):
        gam = spatial_subblock(g)
        assert gam[0, 0] is Const(1) and gam[1, 1] is Const(1) and gam[0, 1] is ZERO
    g = schwarzschild_rt.metric
    gam = spatial_subblock(g)
    expected = parse("rho^2/(1 + (xi^2 + eta^2)/4)^2", g.chart)
    assert vanishes(g, [gam[0, 0] - expected, gam[1, 1] - expected, gam[0, 1]]).passed
    with pytest.raises(GeometryError):
        spatial_subblock(minkowski())


def test_bundle_is_read_only(generic_pp_wave):
    g = generic_pp_wave.metric
    with pytest.raises(ValueError):
        g.riemann[0, 0, 0, 0] = ZERO
    assert g.curvature.riemann is g.riemann
