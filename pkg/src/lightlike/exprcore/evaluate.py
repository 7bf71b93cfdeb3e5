"""Vectorized floating-point evaluation of expression DAGs."""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

from .expr import Add, Const, Expr, Func, Mul, Pow, Sym


class DomainError(ArithmeticError):
    """Raised when a subexpression leaves its real domain at a sample point."""

    def __init__(self, kind: str, expr: Expr, index: int | None = None):
        self.kind = kind
        self.expr = expr
        self.index = index
        where = "" if index is None else f" (sample {index})"
        super().__init__(f"{kind} in {expr}{where}")


_UNARY = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
}


def _first(mask) -> int | None:
    idx = np.flatnonzero(np.atleast_1d(mask))
    return int(idx[0]) if idx.size else None


class Evaluator:
    """Evaluates many expressions over the same points, sharing subresults.

    ``env`` maps every symbol name to a float or a 1-d array; all arrays must
    have the same length.
    """

    def __init__(self, env: Mapping[str, object]):
        self.env = {k: np.asarray(v, dtype=float) for k, v in env.items()}
        self._memo: dict[int, np.ndarray] = {}
        # keep evaluated nodes alive so ids stay unique for the memo's lifetime
        self._alive: list[Expr] = []

    def __call__(self, e: Expr) -> np.ndarray:
        return self._eval(e)

    def many(self, exprs: Iterable[Expr]) -> list[np.ndarray]:
        return [self._eval(e) for e in exprs]

    def _eval(self, e: Expr):
        hit = self._memo.get(id(e))
        if hit is not None:
            return hit
        out = self._compute(e)
        self._memo[id(e)] = out
        self._alive.append(e)
        return out

    def _compute(self, e: Expr):
        if isinstance(e, Const):
            return np.float64(e.value)
        if isinstance(e, Sym):
            try:
                return self.env[e.name]
            except KeyError:
                raise KeyError(f"symbol {e.name!r} is not bound") from None
        with np.errstate(all="ignore"):
            if isinstance(e, Add):
                acc = self._eval(e.terms[0])
                for t in e.terms[1:]:
                    acc = acc + self._eval(t)
                return acc
            if isinstance(e, Mul):
                acc = self._eval(e.factors[0])
                for f in e.factors[1:]:
                    acc = acc * self._eval(f)
                return acc
            if isinstance(e, Pow):
                b = self._eval(e.base)
                if e.exp < 0:
                    bad = b == 0
                    if np.any(bad):
                        raise DomainError("division by zero", e, _first(bad))
                return b ** e.exp if e.exp > 0 else 1.0 / b ** (-e.exp)
            if isinstance(e, Func):
                a = self._eval(e.arg)
                if e.name == "log" and np.any(a <= 0):
                    raise DomainError("log of non-positive value", e, _first(a <= 0))
                if e.name == "sqrt" and np.any(a < 0):
                    raise DomainError("sqrt of negative value", e, _first(a < 0))
                return _UNARY[e.name](a)
        raise TypeError(f"cannot evaluate {type(e).__name__}")


def evaluate(e: Expr, point: Mapping[str, float]) -> float:
    """Evaluate ``e`` at a single point mapping every free symbol to a real."""
    missing = sorted(e.free_symbols - point.keys())
    if missing:
        raise KeyError(f"unbound symbols: {missing}")
    env = {k: float(point[k]) for k in e.free_symbols}
    return float(Evaluator(env)(e))


def evaluate_array(exprs: Sequence[Expr], env: Mapping[str, object]) -> np.ndarray:
    """Evaluate a sequence of expressions; returns shape (len(exprs), n_points)."""
    ev = Evaluator(env)
    n = max((np.size(v) for v in ev.env.values()), default=1)
    return np.array([np.broadcast_to(ev(e), (n,)) for e in exprs], dtype=float)
