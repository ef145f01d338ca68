"""Expansion and rewrite-based simplification.

The constructors already fold constants and collect like terms; this module
adds distribution of products over sums and a small rewrite rule set, run to
a fixed point so that ``simplify`` is idempotent.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .nodes import (
    ONE,
    ZERO,
    Add,
    Const,
    Expr,
    Func,
    Mul,
    Pow,
    _split_coeff,
    add,
    exp,
    mul,
    power,
    rebuild,
)

MAX_EXPAND_POWER = 12


def _product_of_sums(parts: list[Expr]) -> Expr:
    acc: list[Expr] = [ONE]
    for part in parts:
        terms = part.terms if isinstance(part, Add) else (part,)
        acc = [mul(a, t) for a in acc for t in terms]
        acc = list(_terms(add(*acc)))
    return add(*acc)


def _terms(e: Expr) -> tuple[Expr, ...]:
    return e.terms if isinstance(e, Add) else (e,)


@lru_cache(maxsize=100_000)
def expand(e: Expr) -> Expr:
    """Distribute products over sums and expand small positive integer powers of sums."""
    if not e.children:
        return e
    children = [expand(c) for c in e.children]
    if isinstance(e, Pow):
        base = children[0]
        q = e.exponent
        if (
            isinstance(base, Add)
            and isinstance(q, Fraction)
            and q.denominator == 1
            and 1 < q.numerator <= MAX_EXPAND_POWER
        ):
            return _product_of_sums([base] * q.numerator)
        return power(base, Const(q))
    if isinstance(e, Mul):
        rebuilt = mul(*children)
        if not isinstance(rebuilt, Mul):
            return expand(rebuilt) if rebuilt != e else rebuilt
        factors = []
        for f in rebuilt.factors:
            if isinstance(f, Pow) and isinstance(f.base, Add):
                f = expand(f) if f.exponent > 0 else f
            factors.append(f)
        if not any(isinstance(f, Add) for f in factors):
            return mul(*factors)
        return _product_of_sums(factors)
    return rebuild(e, children)


def _pythagorean(e: Add) -> Expr:
    """Rewrite ``a*sin(u)^2*M + b*cos(u)^2*M`` to ``b*M + (a-b)*sin(u)^2*M``."""
    sin_terms: dict[tuple[Expr, Expr], tuple[int, Fraction]] = {}
    cos_terms: dict[tuple[Expr, Expr], tuple[int, Fraction]] = {}
    for idx, term in enumerate(e.terms):
        coeff, rest = _split_coeff(term)
        if rest is None:
            continue
        factors = rest.factors if isinstance(rest, Mul) else (rest,)
        for j, f in enumerate(factors):
            if (
                isinstance(f, Pow)
                and f.exponent == 2
                and isinstance(f.base, Func)
                and f.base.name in ("sin", "cos")
            ):
                others = mul(*factors[:j], *factors[j + 1:])
                key = (f.base.arg, others)
                table = sin_terms if f.base.name == "sin" else cos_terms
                table.setdefault(key, (idx, coeff))
    matched = [k for k in cos_terms if k in sin_terms]
    if not matched:
        return e
    used: set[int] = set()
    new_terms: list[Expr] = []
    for key in matched:
        si, sc = sin_terms[key]
        ci, cc = cos_terms[key]
        if si in used or ci in used or si == ci:
            continue
        used.update((si, ci))
        arg, others = key
        s2 = power(Func("sin", arg), 2)
        new_terms.append(mul(Const(cc), others))
        new_terms.append(mul(Const(sc - cc), s2, others))
    if not used:
        return e
    rest = [t for i, t in enumerate(e.terms) if i not in used]
    return add(*rest, *new_terms)


MAX_ZERO_TEST_TERMS = 80


def _cancels_to_zero(e: Add) -> bool:
    """Multiply a sum through by its common denominator and test for zero."""
    denominators: dict[Expr, Fraction] = {}
    for term in e.terms:
        factors = term.factors if isinstance(term, Mul) else (term,)
        for f in factors:
            if isinstance(f, Pow) and f.exponent < 0 and not isinstance(f.base, Const):
                q = -f.exponent
                if not (isinstance(q, Fraction) and q.denominator == 1):
                    return False
                denominators[f.base] = max(denominators.get(f.base, 0), q)
    if not denominators or len(e.terms) > MAX_ZERO_TEST_TERMS:
        return False
    lcd = mul(*(power(b, Const(q)) for b, q in denominators.items()))
    numerator = expand(add(*(mul(t, lcd) for t in e.terms)))
    if isinstance(numerator, Add) and len(numerator.terms) > 4 * MAX_ZERO_TEST_TERMS:
        return False
    if isinstance(numerator, Add):
        numerator = _pythagorean(numerator)
    return numerator.is_zero()


def _merge_exponentials(e: Mul) -> Expr:
    """exp(a) * exp(b) -> exp(a + b); integer powers of exp are already folded."""
    exps, rest = [], []
    for f in e.factors:
        if isinstance(f, Func) and f.name == "exp":
            exps.append(f.arg)
        else:
            rest.append(f)
    if len(exps) < 2:
        return e
    return mul(*rest, exp(expand(add(*exps))))


def _rewrite(e: Expr) -> Expr:
    if not e.children:
        return e
    out = rebuild(e, (_rewrite(c) for c in e.children))
    if isinstance(out, Mul):
        out = _merge_exponentials(out)
    if isinstance(out, Add):
        out = _pythagorean(out)
    if isinstance(out, Add) and _cancels_to_zero(out):
        return ZERO
    return out


def simplify(e: Expr, max_rounds: int = 20) -> Expr:
    """Expand, collect and rewrite until the expression stops changing."""
    current = e
    for _ in range(max_rounds):
        nxt = _rewrite(expand(current))
        if nxt == current:
            return current
        current = nxt
    return current
