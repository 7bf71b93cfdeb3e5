import pytest

from lightlike.catalog import minkowski, peres_metric
from lightlike.exprcore import zero_test
from lightlike.fields import (
    INDEFINITE,
    LIGHT_LIKE,
    SPACE_LIKE,
    TIME_LIKE,
    VectorFieldSpec,
    causal_character,
    gradient_residual,
    integrability_check,
    integrability_residuals,
    is_gradient,
    is_parallel,
    parallel_residual,
)


def test_null_field_on_pp_wave_is_parallel(generic_pp_wave):
    X = generic_pp_wave.field
    assert is_parallel(X).passed
    assert is_gradient(X).passed
    assert all(r.passed for r in integrability_check(X))
    assert causal_character(X).character == LIGHT_LIKE


def test_constant_field_on_minkowski():
    g = minkowski()
    X = VectorFieldSpec(["1", "2", "-1", "0.5"], g)
    assert is_parallel(X).passed
    assert all(r.passed for r in integrability_check(X))


def test_rho_direction_is_not_parallel_on_rt(schwarzschild_rt):
    g = schwarzschild_rt.metric
    X = VectorFieldSpec.coordinate(g, 0)
    rep = is_parallel(X)
    assert not rep.passed
    # the (2, 2) entry of X^i;j is Gamma^2_20 = 1/rho
    res = parallel_residual(X)[2, 2]
    assert zero_test([res - g.christoffel[2, 2, 0]], g.box).passed


def test_gradient_examples():
    g = minkowski()
    # lowered gradient of phi = t*x + y^2: X_i = d_i phi
    grad = VectorFieldSpec.from_covector(["x", "t", "2*y", "0"], g)
    assert is_gradient(grad).passed
    curl = VectorFieldSpec.from_covector(["0", "0", "z", "0"], g)
    rep = is_gradient(curl)
    assert not rep.passed
    assert str(gradient_residual(curl)[2, 3]) == "1"


def test_causal_character_examples(schwarzschild_rt):
    assert causal_character(VectorFieldSpec.coordinate(minkowski(), 0)).character == TIME_LIKE
    assert causal_character(VectorFieldSpec.coordinate(minkowski(), 1)).character == SPACE_LIKE
    g = schwarzschild_rt.metric
    X = VectorFieldSpec(["0", "0", "1", "xi"], g)
    assert causal_character(X).character == SPACE_LIKE
    mixed = VectorFieldSpec(["1", "2*x", "0", "0"], minkowski())
    cr = causal_character(mixed)
    assert cr.character == INDEFINITE
    assert set(cr.witnesses) == {"positive", "negative"}


def test_zero_field_is_never_light_like():
    cr = causal_character(VectorFieldSpec(["0", "0", "0", "0"], minkowski()))
    assert not cr.nontrivial and cr.character != LIGHT_LIKE


def test_integrability_fails_for_x1_on_peres():
    g = peres_metric("y^2 - z^2").metric
    full, contracted = integrability_check(VectorFieldSpec.coordinate(g, 1))
    assert not full.passed


def test_parallel_chain_on_catalog_pairs(generic_pp_wave, peres_harmonic):
    """parallel => gradient and both integrability conditions, pair by pair."""
    from lightlike.catalog import plane_wave_metric

    pairs = [generic_pp_wave, peres_harmonic,
             plane_wave_metric("-(1 + 0.1*sin(eta))^2", "0", "-(1 - 0.1*sin(eta))^2"),
             peres_metric("y^2")]
    for sol in pairs:
        X = sol.field
        assert is_parallel(X).passed
        assert is_gradient(X).passed
        assert all(r.passed for r in integrability_check(X))


def test_ricci_contraction_vanishes_even_off_vacuum():
    sol = peres_metric("y^2 + x*z")
    g = sol.metric
    assert not zero_test(list(g.ricci.flat), g.box).passed
    _, contracted = integrability_residuals(sol.field)
    assert zero_test(list(contracted), g.box).passed


def test_component_validation():
    g = minkowski()
    with pytest.raises(ValueError):
        VectorFieldSpec(["1", "0", "0"], g)
    with pytest.raises(Exception):
        VectorFieldSpec(["q", "0", "0", "0"], g)
