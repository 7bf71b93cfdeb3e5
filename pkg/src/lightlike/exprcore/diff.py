"""Exact symbolic partial derivatives."""

from __future__ import annotations

from fractions import Fraction

from .expr import (
    ONE,
    ZERO,
    Add,
    Const,
    Expr,
    Func,
    Mul,
    Pow,
    Sym,
    add,
    func,
    mul,
    power,
)

_HALF = Const(Fraction(1, 2))


def diff(e: Expr, coord: str) -> Expr:
    """Partial derivative of ``e`` with respect to the coordinate ``coord``.

    Results are memoized on the node, so differentiating a large DAG touches
    each distinct subtree once per coordinate.
    """
    if coord not in e.free_symbols:
        return ZERO
    hit = e._dcache.get(coord)
    if hit is not None:
        return hit
    out = _diff(e, coord)
    e._dcache[coord] = out
    return out


def _diff(e: Expr, c: str) -> Expr:
    if isinstance(e, Sym):
        return ONE if e.name == c else ZERO
    if isinstance(e, Add):
        return add(*(diff(t, c) for t in e.terms))
    if isinstance(e, Mul):
        fs = e.factors
        terms = []
        for i, f in enumerate(fs):
            df = diff(f, c)
            if df is ZERO:
                continue
            terms.append(mul(*fs[:i], df, *fs[i + 1:]))
        return add(*terms)
    if isinstance(e, Pow):
        db = diff(e.base, c)
        return mul(Const(e.exp), power(e.base, e.exp - 1), db)
    if isinstance(e, Func):
        da = diff(e.arg, c)
        return mul(_outer_derivative(e), da)
    raise TypeError(f"cannot differentiate {type(e).__name__}")


def _outer_derivative(e: Func) -> Expr:
    a = e.arg
    name = e.name
    if name == "sin":
        return func("cos", a)
    if name == "cos":
        return mul(Const(-1), func("sin", a))
    if name == "tan":
        return add(ONE, power(e, 2))
    if name == "sinh":
        return func("cosh", a)
    if name == "cosh":
        return func("sinh", a)
    if name == "exp":
        return e
    if name == "log":
        return power(a, -1)
    if name == "sqrt":
        return mul(_HALF, power(e, -1))
    raise ValueError(f"unknown function {name!r}")


def gradient(e: Expr, coords) -> list[Expr]:
    return [diff(e, c) for c in coords]
