"""Infix printer whose output re-parses to the same tree."""

from __future__ import annotations

from fractions import Fraction

from .expr import Add, Const, Expr, Func, Mul, Pow, Sym


def _num(value) -> str:
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return repr(float(value))


def _is_atom(e: Expr) -> bool:
    if isinstance(e, (Sym, Func)):
        return True
    return isinstance(e, Const) and isinstance(e.value, Fraction) and e.value >= 0 \
        and e.value.denominator == 1


def _wrap(e: Expr, text: str) -> str:
    return text if _is_atom(e) else f"({text})"


def _pow_text(base: Expr, n: int) -> str:
    b = _wrap(base, to_string(base))
    return b if n == 1 else f"{b}^{n}"


def _mul_text(coeff, factors) -> str:
    """Print ``coeff * prod(factors)`` with ``coeff`` assumed non-negative."""
    num, den = [], []
    for f in factors:
        if isinstance(f, Pow) and f.exp < 0:
            den.append(_pow_text(f.base, -f.exp))
        elif isinstance(f, Pow):
            num.append(_pow_text(f.base, f.exp))
        elif isinstance(f, Add):
            num.append(f"({to_string(f)})")
        else:
            num.append(to_string(f))
    if coeff != 1 or not num:
        num.insert(0, _num(coeff))
    text = "*".join(num)
    for d in den:
        text += "/" + d
    return text


def _signed(e: Expr) -> tuple[bool, str]:
    """Return (is_negative, text of the absolute value)."""
    if isinstance(e, Const):
        return e.value < 0, _num(abs(e.value))
    if isinstance(e, Mul):
        c, _ = e.split_coefficient()
        rest = e.factors[1:] if isinstance(e.factors[0], Const) else e.factors
        return c < 0, _mul_text(abs(c), rest)
    if isinstance(e, Pow) and e.exp < 0:
        return False, _mul_text(1, (e,))
    if isinstance(e, Pow):
        return False, _pow_text(e.base, e.exp)
    if isinstance(e, Add):
        return False, _add_text(e)
    return False, to_string(e)


def _add_text(e: Add) -> str:
    terms = [t for t in e.terms if not isinstance(t, Const)]
    terms += [t for t in e.terms if isinstance(t, Const)]
    parts = []
    for i, t in enumerate(terms):
        negative, text = _signed(t)
        if i == 0:
            parts.append(("-" if negative else "") + text)
        else:
            parts.append((" - " if negative else " + ") + text)
    return "".join(parts)


def to_string(e: Expr) -> str:
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Func):
        return f"{e.name}({to_string(e.arg)})"
    if isinstance(e, Add):
        return _add_text(e)
    negative, text = _signed(e)
    return "-" + text if negative else text
