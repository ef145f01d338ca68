"""Numeric evaluation: a tree-walking evaluator and a compiled fast path."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .errors import DomainError, SymcoreError, UnboundSymbolError
from .nodes import Add, Const, Expr, Fn, Func, Mul, Pow, Sym

Binding = Mapping[str, float]


def _pow(base: float, q) -> float:
    if isinstance(q, Fraction) and q.denominator == 1:
        n = q.numerator
        if base == 0.0 and n < 0:
            raise DomainError("division by zero")
        return base**n
    if base < 0.0:
        raise DomainError(f"fractional power of negative value {base!r}")
    if base == 0.0 and q < 0:
        raise DomainError("division by zero")
    return base ** float(q)


def _ln(x: float) -> float:
    if x <= 0.0:
        raise DomainError(f"ln of non-positive value {x!r}")
    return math.log(x)


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError as exc:
        raise DomainError(f"exp overflow at {x!r}") from exc


_FUNCS = {"sin": math.sin, "cos": math.cos, "exp": _exp, "ln": _ln}


def evaluate(e: Expr, binding: Binding) -> float:
    """Evaluate ``e`` with every free symbol bound to a number.

    Raises :class:`UnboundSymbolError` for a missing symbol and
    :class:`DomainError` when the value leaves the reals.
    """
    cache: dict[Expr, float] = {}

    def ev(node: Expr) -> float:
        hit = cache.get(node)
        if hit is not None:
            return hit
        if isinstance(node, Const):
            val = float(node.value)
        elif isinstance(node, Sym):
            try:
                val = float(binding[node.name])
            except KeyError:
                raise UnboundSymbolError(node.name) from None
        elif isinstance(node, Add):
            val = math.fsum(ev(t) for t in node.terms)
        elif isinstance(node, Mul):
            val = 1.0
            for f in node.factors:
                val *= ev(f)
        elif isinstance(node, Pow):
            val = _pow(ev(node.base), node.exponent)
        elif isinstance(node, Func):
            val = _FUNCS[node.name](ev(node.arg))
        elif isinstance(node, Fn):
            raise SymcoreError(
                f"opaque function {node.name!r} has no numeric definition; substitute one first"
            )
        else:
            raise TypeError(f"cannot evaluate {type(node).__name__}")
        if not math.isfinite(val):
            raise DomainError(f"non-finite value while evaluating {node}")
        cache[node] = val
        return val

    return ev(e)


# --------------------------------------------------------------------------
# compiled evaluation for grid sweeps
# --------------------------------------------------------------------------


def _codegen(e: Expr, names: dict[str, str], lines: list[str], memo: dict[Expr, str]) -> str:
    hit = memo.get(e)
    if hit is not None:
        return hit
    if isinstance(e, Const):
        return repr(float(e.value))
    if isinstance(e, Sym):
        try:
            return names[e.name]
        except KeyError:
            raise UnboundSymbolError(e.name) from None
    if isinstance(e, Fn):
        raise SymcoreError(f"opaque function {e.name!r} has no numeric definition")
    if isinstance(e, Add):
        parts = [_codegen(t, names, lines, memo) for t in e.terms]
        code = " + ".join(parts)
    elif isinstance(e, Mul):
        parts = [_codegen(f, names, lines, memo) for f in e.factors]
        code = " * ".join(parts)
    elif isinstance(e, Pow):
        base = _codegen(e.base, names, lines, memo)
        q = e.exponent
        if isinstance(q, Fraction) and q.denominator == 1 and q > 0:
            code = f"{base} ** {q.numerator}"
        elif isinstance(q, Fraction) and q.denominator == 1:
            code = f"1.0 / ({base} ** {-q.numerator})"
        else:
            code = f"_pow({base}, {float(q)!r})"
    elif isinstance(e, Func):
        code = f"_{e.name}({_codegen(e.arg, names, lines, memo)})"
    else:
        raise TypeError(f"cannot compile {type(e).__name__}")
    var = f"t{len(lines)}"
    lines.append(f"    {var} = {code}")
    memo[e] = var
    return var


def lambdify(e: Expr, params: Sequence[str]) -> Callable[..., float]:
    """Compile ``e`` into a Python function of the positional ``params``."""
    names = {p: f"a{i}" for i, p in enumerate(params)}
    lines: list[str] = []
    result = _codegen(e, names, lines, {})
    args = ", ".join(names[p] for p in params)
    src = f"def _f({args}):\n" + "\n".join(lines) + f"\n    return float({result})\n"
    env = {
        "_pow": lambda b, q: _pow(b, q),
        "_sin": math.sin,
        "_cos": math.cos,
        "_exp": _exp,
        "_ln": _ln,
    }
    exec(compile(src, "<dynlab-lambdify>", "exec"), env)
    raw = env["_f"]

    def fn(*values: float) -> float:
        try:
            val = raw(*values)
        except ZeroDivisionError as exc:
            raise DomainError("division by zero") from exc
        except OverflowError as exc:
            raise DomainError(str(exc)) from exc
        if not math.isfinite(val):
            raise DomainError("non-finite value")
        return val

    fn.source = src
    return fn
