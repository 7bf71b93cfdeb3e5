"""Expression language: parsing, printing, differentiation, evaluation, zero testing."""

from .diff import diff, gradient
from .evaluate import DomainError, Evaluator, evaluate, evaluate_array
from .expr import (
    FUNCTIONS,
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
    additive_terms,
    as_expr,
    func,
    mul,
    neg,
    node_count,
    power,
    subs,
    sym,
    symbol_roles,
)
from .parser import ExprError, LexError, ParseError, UnknownSymbolError, parse, tokenize
from .printer import to_string
from .report import ERROR, FAIL, PASS, REPORT_FIELDS, CheckReport
from .sampling import (
    DEFAULT_POINTS,
    DEFAULT_SEED,
    DEFAULT_TOL,
    SampleBox,
    fd_derivative,
    is_probably_zero,
    residuals,
    zero_test,
)

diff_fd_oracle = fd_derivative
eval_expr = evaluate

__all__ = [
    "Add",
    "CheckReport",
    "Const",
    "DEFAULT_POINTS",
    "DEFAULT_SEED",
    "DEFAULT_TOL",
    "DomainError",
    "ERROR",
    "Evaluator",
    "Expr",
    "ExprError",
    "FAIL",
    "FUNCTIONS",
    "Func",
    "LexError",
    "Mul",
    "ONE",
    "PASS",
    "ParseError",
    "Pow",
    "REPORT_FIELDS",
    "SampleBox",
    "Sym",
    "UnknownSymbolError",
    "ZERO",
    "add",
    "additive_terms",
    "as_expr",
    "diff",
    "diff_fd_oracle",
    "eval_expr",
    "evaluate",
    "evaluate_array",
    "fd_derivative",
    "func",
    "gradient",
    "is_probably_zero",
    "mul",
    "neg",
    "node_count",
    "parse",
    "power",
    "residuals",
    "subs",
    "sym",
    "symbol_roles",
    "to_string",
    "tokenize",
    "zero_test",
]
