import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lightlike.catalog import minkowski, minkowski_null_chart, peres_metric, pp_wave_metric
from lightlike.transport import (
    CurveSpec,
    TransportError,
    holonomy_deviation,
    holonomy_prediction,
    polygon_loop,
    rectangle_loop,
    transport,
)


@pytest.fixture(scope="module")
def twisted():
    return pp_wave_metric(f="x1*x2*x3", phi="1", h="x2^2 - x3^2").metric


def test_flat_loop_has_no_holonomy():
    g = minkowski()
    loop = rectangle_loop((0, 0, 0, 0), (1, 2), (1.0, 0.7))
    assert np.max(np.abs(holonomy_deviation(g, loop))) <= 1e-10
    circle = CurveSpec(["0", "cos(6.283185307179586*s)", "sin(6.283185307179586*s)", "0"], closed=True)
    res = transport(g, circle, (1, 2, 3, 4))
    assert res.deviation <= 1e-10


def test_parallel_field_is_invariant(generic_pp_wave):
    g = generic_pp_wave.metric
    curve = CurveSpec(["s", "sin(s)", "s^2 - 0.5", "0.3*s"])
    res = transport(g, curve, (1, 0, 0, 0))
    assert np.max(np.abs(res.final - res.initial)) <= 1e-10


def test_norm_is_conserved(twisted):
    curve = CurveSpec(["0.2*s", "0.5*cos(3*s)", "0.4*sin(2*s)", "s - 0.5"])
    res = transport(twisted, curve, (0.3, 1.0, -0.5, 0.8), steps=1024)
    assert res.norm_drift <= 1e-8


def test_reversal_inverts_transport(twisted):
    curve = CurveSpec(["0.1", "s", "s^2", "0.5*s"])
    out = transport(twisted, curve, (0, 0, 1, 1)).final
    back = transport(twisted, curve.reversed(), out).final
    assert np.allclose(back, (0, 0, 1, 1), atol=1e-10)


def test_holonomy_scales_with_area(twisted):
    devs = []
    for side in (0.4, 0.2):
        loop = rectangle_loop((0, 0, 0, 0), (1, 2), (side, side))
        devs.append(np.linalg.norm(holonomy_deviation(twisted, loop)[:, 2:].sum(axis=1)))
    assert devs[0] / devs[1] == pytest.approx(4.0, rel=0.1)


def test_holonomy_matches_curvature(twisted):
    side = 0.1
    loop = rectangle_loop((0, 0, 0, 0), (1, 3), (side, side))
    measured = holonomy_deviation(twisted, loop)
    predicted = holonomy_prediction(twisted, (0, 0, 0, 0), (1, 3), side * side)
    assert np.max(np.abs(measured - predicted)) <= 0.1 * np.max(np.abs(predicted))


def test_null_direction_is_annihilated(twisted):
    loop = rectangle_loop((0, 0.1, 0.2, -0.1), (1, 2), (0.8, 0.9))
    d = holonomy_deviation(twisted, loop, basis=np.array([[1.0], [0], [0], [0]]))
    assert np.max(np.abs(d)) <= 1e-10


def test_domain_exit_is_reported(schwarzschild_rt):
    curve = CurveSpec(["1 - 2*s", "0", "0", "0"])
    with pytest.raises(TransportError, match="rho"):
        transport(schwarzschild_rt.metric, curve, (1, 0, 0, 0))


def test_argument_errors():
    g = minkowski_null_chart()
    with pytest.raises(ValueError):
        transport(g, CurveSpec(["s", "0", "0", "0"]), (1, 0, 0, 0), steps=8)
    with pytest.raises(ValueError):
        CurveSpec(["s", "0", "0", "0"], closed=True)
    with pytest.raises(ValueError):
        holonomy_deviation(g, CurveSpec(["s", "0", "0", "0"]))
    with pytest.raises(ValueError):
        CurveSpec(["s", "t", "0", "0"])
    with pytest.raises(ValueError):
        CurveSpec(["s", "0", "0"])
    assert polygon_loop([(0, 0, 0, 0), (1, 0, 0, 0), (1, 1, 0, 0)]).closed


def test_error_estimate_is_small(twisted):
    res = transport(twisted, CurveSpec(["0", "s", "s", "0"]), (0, 0, 1, 1), steps=64)
    assert res.error_estimate < 1e-8
    assert res.to_dict()["steps"] == 64


@settings(max_examples=20, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=4, max_size=4))
def test_transport_is_linear(v):
    g = peres_metric("y^2 - z^2").metric
    curve = CurveSpec(["s", "0.5*s", "0.3", "s^2"])
    a = transport(g, curve, v, steps=32).final
    b = transport(g, curve, 2 * np.asarray(v), steps=32).final
    assert np.allclose(b, 2 * a, atol=1e-10)


def test_twisted_holonomy_approaches_area_law(twisted):
    # the twist makes the connection grow with x2, so the ratio tends to 4 only as loops shrink
    center = np.array([0.1, -0.2, 0.3, 0.05])
    devs = [transport(twisted, rectangle_loop(center, (1, 2), (s, 0.8 * s)), (0, 0, 1, 1)).deviation
            for s in (1.0, 0.5, 0.25, 0.125)]
    gaps = [abs(a / b - 4) for a, b in zip(devs, devs[1:])]
    assert gaps[0] > gaps[1] > gaps[2] and gaps[2] < 0.2
