"""Immutable expression trees with a light canonicalizing simplifier.

Nodes are hash-consed: two structurally equal trees are the same object, so
equality is identity and per-node caches (free symbols, derivatives) are
shared by every tree that contains the node.

Canonical form produced by the constructors:

* ``Add`` and ``Mul`` are n-ary, flattened and sorted by a content key.
* ``Mul`` carries at most one leading numeric coefficient (never 0 or 1).
* ``Add`` terms with the same non-numeric body are collected.
* ``Mul`` factors with the same base are collected into integer powers.
* Division is ``Pow(x, -1)``; subtraction and negation multiply by ``-1``.

Nothing else is done: no expansion, no factoring, no function identities.
"""

from __future__ import annotations

import threading
import weakref
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Union

FUNCTIONS = ("sin", "cos", "tan", "sinh", "cosh", "exp", "log", "sqrt")

Number = Union[Fraction, float]

_intern_lock = threading.Lock()
_intern: "weakref.WeakValueDictionary[tuple, Expr]" = weakref.WeakValueDictionary()


def _norm_number(value) -> Number:
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value)
    value = float(value)
    if value == 0.0:
        return Fraction(0)
    if value.is_integer() and abs(value) < 2**53:
        return Fraction(int(value))
    return value


class Expr:
    """Base class for expression nodes. Use the module-level constructors."""

    __slots__ = ("_key", "_hash", "_free", "_dcache", "__weakref__")

    rank = -1

    @property
    def children(self) -> tuple["Expr", ...]:
        return ()

    @property
    def free_symbols(self) -> frozenset[str]:
        return self._free

    @property
    def sort_key(self) -> tuple:
        return self._key

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        return self is other

    def __ne__(self, other) -> bool:
        return self is not other

    def __lt__(self, other: "Expr") -> bool:
        return self._key < other._key

    # arithmetic sugar; ints, floats and Fractions are coerced
    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return add(self, neg(as_expr(other)))

    def __rsub__(self, other):
        return add(as_expr(other), neg(self))

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        return mul(self, power(as_expr(other), -1))

    def __rtruediv__(self, other):
        return mul(as_expr(other), power(self, -1))

    def __neg__(self):
        return neg(self)

    def __pos__(self):
        return self

    def __pow__(self, n):
        if not isinstance(n, int) or isinstance(n, bool):
            raise TypeError("only integer exponents are supported")
        return power(self, n)

    def __str__(self) -> str:
        from .printer import to_string

        return to_string(self)

    def __repr__(self) -> str:
        return f"Expr({str(self)!r})"

    @property
    def is_zero(self) -> bool:
        return isinstance(self, Const) and self.value == 0

    @property
    def is_one(self) -> bool:
        return isinstance(self, Const) and self.value == 1


def symbol_roles(e: Expr) -> tuple[list[str], list[str]]:
    coords, params = set(), set()
    stack = [e]
    seen = set()
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        if isinstance(node, Sym):
            (coords if node.is_coord else params).add(node.name)
        stack.extend(node.children)
    return sorted(coords), sorted(params)


def _make(cls, ident: tuple, init):
    with _intern_lock:
        node = _intern.get(ident)
        if node is None:
            node = object.__new__(cls)
            init(node)
            node._hash = hash(ident)
            node._dcache = {}
            _intern[ident] = node
        return node


class Const(Expr):
    __slots__ = ("value",)
    rank = 0

    def __new__(cls, value):
        value = _norm_number(value)

        def init(node):
            node.value = value
            node._key = (0, value)
            node._free = frozenset()

        return _make(cls, (cls, type(value), value), init)

    def __float__(self) -> float:
        return float(self.value)


class Sym(Expr):
    """A coordinate (``is_coord``) or a named parameter."""

    __slots__ = ("name", "is_coord")
    rank = 1

    def __new__(cls, name: str, is_coord: bool = True):
        def init(node):
            node.name = name
            node.is_coord = is_coord
            node._key = (1, name, not is_coord)
            node._free = frozenset((name,))

        return _make(cls, (cls, name, is_coord), init)


class Pow(Expr):
    __slots__ = ("base", "exp")
    rank = 2

    def __new__(cls, base: Expr, exp: int):
        def init(node):
            node.base = base
            node.exp = exp
            node._key = (2, base._key, exp)
            node._free = base._free

        return _make(cls, (cls, id(base), exp), init)

    @property
    def children(self):
        return (self.base,)


class Mul(Expr):
    __slots__ = ("factors",)
    rank = 3

    def __new__(cls, factors: tuple[Expr, ...]):
        def init(node):
            node.factors = factors
            node._key = (3, tuple(f._key for f in factors))
            node._free = frozenset().union(*(f._free for f in factors))

        return _make(cls, (cls, tuple(id(f) for f in factors)), init)

    @property
    def children(self):
        return self.factors

    def split_coefficient(self) -> tuple[Number, Expr]:
        first = self.factors[0]
        if isinstance(first, Const):
            rest = self.factors[1:]
            return first.value, rest[0] if len(rest) == 1 else Mul(rest)
        return Fraction(1), self


class Func(Expr):
    __slots__ = ("name", "arg")
    rank = 4

    def __new__(cls, name: str, arg: Expr):
        if name not in FUNCTIONS:
            raise ValueError(f"unknown function {name!r}")

        def init(node):
            node.name = name
            node.arg = arg
            node._key = (4, name, arg._key)
            node._free = arg._free

        return _make(cls, (cls, name, id(arg)), init)

    @property
    def children(self):
        return (self.arg,)


class Add(Expr):
    __slots__ = ("terms",)
    rank = 5

    def __new__(cls, terms: tuple[Expr, ...]):
        def init(node):
            node.terms = terms
            node._key = (5, tuple(t._key for t in terms))
            node._free = frozenset().union(*(t._free for t in terms))

        return _make(cls, (cls, tuple(id(t) for t in terms)), init)

    @property
    def children(self):
        return self.terms


ZERO = Const(0)
ONE = Const(1)
MINUS_ONE = Const(-1)


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    return Const(value)


def _split_term(t: Expr) -> tuple[Number, Expr | None]:
    if isinstance(t, Const):
        return t.value, None
    if isinstance(t, Mul):
        return t.split_coefficient()
    return Fraction(1), t


def _with_coefficient(c: Number, body: Expr) -> Expr:
    if c == 1:
        return body
    if isinstance(body, Mul):
        return Mul((Const(c),) + body.factors)
    return Mul((Const(c), body))


def add(*terms: Expr) -> Expr:
    const: Number = Fraction(0)
    buckets: dict[Expr, Number] = {}
    stack = list(reversed(terms))
    while stack:
        t = stack.pop()
        if isinstance(t, Add):
            stack.extend(reversed(t.terms))
            continue
        c, body = _split_term(t)
        if body is None:
            const += c
        else:
            buckets[body] = buckets.get(body, 0) + c
    out = [_with_coefficient(c, b) for b, c in buckets.items() if c != 0]
    if const != 0:
        out.append(Const(const))
    if not out:
        return ZERO
    if len(out) == 1:
        return out[0]
    out.sort(key=lambda t: _term_order(t))
    return Add(tuple(out))


def _term_order(t: Expr) -> tuple:
    c, body = _split_term(t)
    return (0, c) if body is None else (1, body._key, c)


def _fold_pow(c: Number, n: int) -> Number | None:
    if c == 0 and n < 0:
        return None
    return c**n


def mul(*factors: Expr) -> Expr:
    coeff: Number = Fraction(1)
    powers: dict[Expr, int] = {}
    stack = list(reversed(factors))
    while stack:
        f = stack.pop()
        if isinstance(f, Mul):
            stack.extend(reversed(f.factors))
            continue
        if isinstance(f, Const):
            coeff *= f.value
            continue
        if isinstance(f, Pow):
            base, n = f.base, f.exp
        else:
            base, n = f, 1
        powers[base] = powers.get(base, 0) + n
    if coeff == 0:
        return ZERO
    out = []
    for base, n in powers.items():
        if n == 0:
            continue
        p = power(base, n)
        if isinstance(p, Const):
            coeff *= p.value
        else:
            out.append(p)
    if coeff == 0:
        return ZERO
    out.sort(key=lambda f: f._key)
    if coeff != 1:
        if not out:
            return Const(coeff)
        out.insert(0, Const(coeff))
    if not out:
        return ONE
    if len(out) == 1:
        return out[0]
    return Mul(tuple(out))


def power(base: Expr, n: int) -> Expr:
    if n == 0:
        return ONE
    if n == 1:
        return base
    if isinstance(base, Const):
        folded = _fold_pow(base.value, n)
        if folded is not None:
            return Const(folded)
        return Pow(base, n)
    if isinstance(base, Pow):
        return power(base.base, base.exp * n)
    if isinstance(base, Mul):
        c, body = base.split_coefficient()
        if c != 1 and _fold_pow(c, n) is not None:
            return mul(Const(_fold_pow(c, n)), power(body, n))
    return Pow(base, n)


def neg(e: Expr) -> Expr:
    return mul(MINUS_ONE, e)


def func(name: str, arg: Expr) -> Expr:
    if isinstance(arg, Const):
        if arg.value == 0:
            if name in ("sin", "tan", "sinh", "sqrt"):
                return ZERO
            if name in ("cos", "cosh", "exp"):
                return ONE
        elif arg.value == 1 and name in ("log", "sqrt"):
            return ONE if name == "sqrt" else ZERO
    return Func(name, arg)


def sym(name: str, is_coord: bool = True) -> Expr:
    return Sym(name, is_coord)


def sum_of(terms: Iterable[Expr]) -> Expr:
    return add(*terms)


def product_of(factors: Iterable[Expr]) -> Expr:
    return mul(*factors)


def rebuild(e: Expr, children: tuple[Expr, ...]) -> Expr:
    """Rebuild ``e`` with new children through the simplifying constructors."""
    if isinstance(e, Add):
        return add(*children)
    if isinstance(e, Mul):
        return mul(*children)
    if isinstance(e, Pow):
        return power(children[0], e.exp)
    if isinstance(e, Func):
        return func(e.name, children[0])
    return e


def subs(e: Expr, mapping: Mapping[str, Expr]) -> Expr:
    """Replace symbols by expressions, re-simplifying on the way up."""
    mapping = {k: as_expr(v) for k, v in mapping.items()}
    if not (e.free_symbols & mapping.keys()):
        return e
    memo: dict[int, Expr] = {}

    def walk(node: Expr) -> Expr:
        hit = memo.get(id(node))
        if hit is not None:
            return hit
        if not (node.free_symbols & mapping.keys()):
            out = node
        elif isinstance(node, Sym):
            out = mapping[node.name]
        else:
            out = rebuild(node, tuple(walk(c) for c in node.children))
        memo[id(node)] = out
        return out

    return walk(e)


def node_count(e: Expr) -> int:
    """Number of distinct nodes in the DAG rooted at ``e``."""
    seen = set()
    stack = [e]
    while stack:
        n = stack.pop()
        if id(n) in seen:
            continue
        seen.add(id(n))
        stack.extend(n.children)
    return len(seen)


def additive_terms(e: Expr) -> tuple[Expr, ...]:
    return e.terms if isinstance(e, Add) else (e,)
