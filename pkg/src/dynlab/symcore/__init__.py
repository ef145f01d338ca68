"""A small computer-algebra core: parse, differentiate, simplify, evaluate."""
from .calculus import (
    central_difference,
    default_step,
    differentiate,
    numeric_derivative,
    subs,
    substitute_function,
)
from .errors import DomainError, ParseError, SymcoreError, UnboundSymbolError
from .evaluate import Binding, evaluate, lambdify
from .nodes import (
    ONE,
    ZERO,
    Add,
    Const,
    Expr,
    Fn,
    Func,
    Mul,
    Pow,
    Sym,
    add,
    as_expr,
    cos,
    exp,
    ln,
    mul,
    negate,
    power,
    sin,
    sqrt,
    symbols,
)
from .parser import parse_expr
from .render import render
from .simplify import expand, simplify

__all__ = [
    "Add", "Binding", "Const", "DomainError", "Expr", "Fn", "Func", "Mul", "ONE",
    "ParseError", "Pow", "Sym", "SymcoreError", "UnboundSymbolError", "ZERO",
    "add", "as_expr", "central_difference", "cos", "default_step", "differentiate",
    "evaluate", "exp", "expand", "lambdify", "ln", "mul", "negate",
    "numeric_derivative", "parse_expr", "power", "render", "simplify", "sin",
    "sqrt", "subs", "substitute_function", "symbols",
]
