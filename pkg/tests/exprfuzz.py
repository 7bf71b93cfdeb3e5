"""Random expression strings over the grammar, kept finite on [-1, 1]^4."""

from __future__ import annotations

import numpy as np

CHART = ("x0", "x1", "x2", "x3")
PARAMS = ("c",)
_UNARY = ("sin", "cos", "sinh", "cosh", "exp", "tan", "log", "sqrt")


def random_source(rng: np.random.Generator, depth: int = 3) -> str:
    """An expression string whose value and derivatives stay moderate on the unit box.

    log and sqrt get arguments of the form 1 + u^2, tan gets u/4, and
    divisors are 1 + u^2, so nothing leaves its domain.
    """
    if depth <= 0 or rng.random() < 0.2:
        r = rng.random()
        if r < 0.6:
            return str(rng.choice(CHART))
        if r < 0.7:
            return "c"
        return str(int(rng.integers(1, 6)))
    kind = rng.integers(0, 6)
    a = random_source(rng, depth - 1)
    if kind == 0:
        return f"({a} + {random_source(rng, depth - 1)})"
    if kind == 1:
        return f"({a} - {random_source(rng, depth - 1)})"
    if kind == 2:
        return f"({a})*({random_source(rng, depth - 1)})"
    if kind == 3:
        return f"({a})/(1 + ({random_source(rng, depth - 1)})^2)"
    if kind == 4:
        return f"({a})^{int(rng.integers(-1, 4)) if 'x' not in a else int(rng.integers(0, 4))}"
    fn = str(rng.choice(_UNARY))
    if fn in ("log", "sqrt"):
        return f"{fn}(1 + ({a})^2)"
    if fn == "tan":
        return f"tan(({a})/4)"
    if fn in ("exp", "sinh", "cosh"):
        return f"{fn}(({a})/(1 + ({a})^2))"
    return f"{fn}({a})"


def random_point(rng: np.random.Generator) -> dict[str, float]:
    pt = {c: float(rng.uniform(-1, 1)) for c in CHART}
    pt["c"] = float(rng.uniform(0.5, 1.5))
    return pt
