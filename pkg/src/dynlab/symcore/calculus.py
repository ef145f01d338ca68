"""Symbolic differentiation, substitution and the finite-difference oracle."""
from __future__ import annotations

from functools import lru_cache
from typing import Callable, Mapping, Sequence

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
    mul,
    negate,
    power,
    rebuild,
    sin,
)


@lru_cache(maxsize=200_000)
def _d(e: Expr, var: str) -> Expr:
    if var not in e.free_symbols():
        return ZERO
    if isinstance(e, Sym):
        return ONE if e.name == var else ZERO
    if isinstance(e, Add):
        return add(*(_d(t, var) for t in e.terms))
    if isinstance(e, Mul):
        fs = e.factors
        terms = []
        for i, f in enumerate(fs):
            df = _d(f, var)
            if df.is_zero():
                continue
            terms.append(mul(*fs[:i], df, *fs[i + 1:]))
        return add(*terms)
    if isinstance(e, Pow):
        q = e.exponent
        return mul(Const(q), power(e.base, Const(q - 1)), _d(e.base, var))
    if isinstance(e, Func):
        a = e.arg
        da = _d(a, var)
        if e.name == "sin":
            return mul(cos(a), da)
        if e.name == "cos":
            return negate(mul(sin(a), da))
        if e.name == "exp":
            return mul(e, da)
        if e.name == "ln":
            return mul(da, power(a, -1))
    if isinstance(e, Fn):
        terms = []
        for i, arg in enumerate(e.args):
            da = _d(arg, var)
            if da.is_zero():
                continue
            orders = list(e.derivs)
            orders[i] += 1
            terms.append(mul(da, Fn(e.name, e.args, tuple(orders))))
        return add(*terms)
    raise TypeError(f"cannot differentiate {type(e).__name__}")


def differentiate(e: Expr, var: str | Sym, order: int = 1) -> Expr:
    """Exact derivative of ``e`` with respect to the symbol ``var``."""
    name = var.name if isinstance(var, Sym) else var
    for _ in range(order):
        e = _d(e, name)
    return e


def subs(e: Expr, mapping: Mapping[str, object]) -> Expr:
    """Replace symbols by expressions (or numbers), re-canonicalizing."""
    repl = {k: as_expr(v) for k, v in mapping.items()}
    if not repl:
        return e
    cache: dict[Expr, Expr] = {}

    def walk(node: Expr) -> Expr:
        hit = cache.get(node)
        if hit is not None:
            return hit
        if isinstance(node, Sym):
            out = repl.get(node.name, node)
        elif not (node.free_symbols() & repl.keys()):
            out = node
        else:
            out = rebuild(node, (walk(c) for c in node.children))
        cache[node] = out
        return out

    return walk(e)


def substitute_function(e: Expr, name: str, params: Sequence[str], body) -> Expr:
    """Replace the opaque function ``name`` by a concrete definition.

    ``body`` is written in terms of the formal ``params``; derivatives of the
    opaque function become derivatives of ``body`` evaluated at the actual
    arguments.
    """
    body = as_expr(body)
    params = tuple(params)
    cache: dict[Expr, Expr] = {}

    def walk(node: Expr) -> Expr:
        hit = cache.get(node)
        if hit is not None:
            return hit
        if isinstance(node, Fn) and node.name == name:
            if len(node.args) != len(params):
                raise ValueError(
                    f"{name} takes {len(node.args)} arguments, definition has {len(params)}"
                )
            d = body
            for p, order in zip(params, node.derivs):
                d = differentiate(d, p, order)
            args = [walk(a) for a in node.args]
            out = subs(d, dict(zip(params, args)))
        elif name not in node.functions():
            out = node
        else:
            out = rebuild(node, (walk(c) for c in node.children))
        cache[node] = out
        return out

    return walk(e)


def default_step(x: float) -> float:
    return 1e-4 * max(1.0, abs(x))


def central_difference(f: Callable[[float], float], x: float, h: float | None = None) -> float:
    """Fourth-order central difference of a scalar callable at ``x``."""
    if h is None:
        h = default_step(x)
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)


def numeric_derivative(e: Expr, var: str | Sym, binding: Mapping[str, float], h: float | None = None) -> float:
    from .evaluate import evaluate

    name = var.name if isinstance(var, Sym) else var
    if name not in binding:
        from .errors import UnboundSymbolError

        raise UnboundSymbolError(name)
    point = dict(binding)

    def f(x):
        point[name] = x
        return evaluate(e, point)

    return central_difference(f, float(binding[name]), h)
