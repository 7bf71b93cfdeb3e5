import numpy as np
import pytest

from lightlike.catalog import (
    minkowski,
    minkowski_null_chart,
    peres_metric,
    pp_wave_metric,
    robinson_trautman_metric,
)


@pytest.fixture(scope="session")
def generic_pp_wave():
    """A curved vacuum pp-wave using every ingredient of the family."""
    return pp_wave_metric(f="x1*x2*x3 + cos(x1)*x2^2", phi="sin(x1)", h="x2^3 - 3*x2*x3^2")


@pytest.fixture(scope="session")
def schwarzschild_rt():
    return robinson_trautman_metric(p="1 + (xi^2 + eta^2)/4", m="m0", values={"m0": 0.5})


@pytest.fixture(scope="session")
def peres_harmonic():
    return peres_metric("y^2 - z^2 + x*y*z")


@pytest.fixture(scope="session")
def flat_charts():
    return [minkowski(), minkowski_null_chart()]


def values_at(g, env, expr, n=None):
    from lightlike.exprcore import Evaluator

    n = n or len(next(iter(env.values())))
    return np.broadcast_to(Evaluator(env)(expr), (n,))
