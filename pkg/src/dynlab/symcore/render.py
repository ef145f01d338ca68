"""Render expressions back to the ASCII grammar accepted by ``parse_expr``."""
from __future__ import annotations

from fractions import Fraction

from .nodes import Add, Const, Expr, Fn, Func, Mul, Pow, Sym

_ADD, _MUL, _POW, _ATOM = 1, 2, 3, 4


def _num(value) -> str:
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return repr(float(value))


def _prec(e: Expr) -> int:
    if isinstance(e, Add):
        return _ADD
    if isinstance(e, Mul):
        return _MUL
    if isinstance(e, Pow):
        return _POW
    if isinstance(e, Const):
        v = e.value
        if v < 0 or (isinstance(v, Fraction) and v.denominator != 1):
            return _MUL
        if isinstance(v, float) and ("e" in repr(v)):
            return _MUL
    return _ATOM


def _wrap(e: Expr, min_prec: int) -> str:
    text = render(e)
    return f"({text})" if _prec(e) < min_prec else text


def _exponent(q) -> str:
    if isinstance(q, Fraction) and q.denominator == 1 and q >= 0:
        return str(q.numerator)
    return f"({_num(q)})"


def _render_fn(e: Fn) -> str:
    text = f"{e.name}({', '.join(render(a) for a in e.args)})"
    for arg, order in zip(e.args, e.derivs):
        if order == 0:
            continue
        var = render(arg)
        text = f"diff({text}, {var})" if order == 1 else f"diff({text}, {var}, {order})"
    return text


def _render_mul(e: Mul) -> str:
    factors = list(e.factors)
    coeff = Fraction(1)
    if isinstance(factors[0], Const):
        coeff = factors.pop(0).value
    negative = coeff < 0
    coeff = -coeff if negative else coeff
    num: list[str] = []
    den: list[str] = []
    if isinstance(coeff, Fraction):
        if coeff.numerator != 1:
            num.append(str(coeff.numerator))
        if coeff.denominator != 1:
            den.append(str(coeff.denominator))
    elif coeff != 1:
        num.append(_wrap(Const(coeff), _ATOM))
    for f in factors:
        if isinstance(f, Pow) and f.exponent < 0:
            inv = f.base if f.exponent == -1 else Pow(f.base, -f.exponent)
            den.append(inv)
        else:
            num.append(_wrap(f, _MUL + 1) if not isinstance(f, str) else f)
    text = "*".join(num) if num else "1"
    if den:
        if len(den) == 1:
            d = den[0]
            text += "/" + (d if isinstance(d, str) else _wrap(d, _POW))
        else:
            parts = [d if isinstance(d, str) else _wrap(d, _MUL + 1) for d in den]
            text += "/(" + "*".join(parts) + ")"
    return ("-" + text) if negative else text


def render(e: Expr) -> str:
    if isinstance(e, Const):
        return _num(e.value)
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Fn):
        return _render_fn(e)
    if isinstance(e, Func):
        return f"{e.name}({render(e.arg)})"
    if isinstance(e, Pow):
        if e.exponent < 0:
            return _render_mul(Mul((e,)))
        if e.exponent == Fraction(1, 2):
            return f"sqrt({render(e.base)})"
        return f"{_wrap(e.base, _ATOM)}^{_exponent(e.exponent)}"
    if isinstance(e, Mul):
        return _render_mul(e)
    if isinstance(e, Add):
        out = render(e.terms[0])
        for term in e.terms[1:]:
            text = render(term)
            if text.startswith("-"):
                out += " - " + text[1:]
            else:
                out += " + " + text
        return out
    raise TypeError(f"cannot render {type(e).__name__}")
