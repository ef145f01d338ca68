"""Expression tree nodes and their canonicalizing constructors.

Nodes are immutable and hashable.  Every public constructor (``add``,
``mul``, ``power``, ``sin`` ...) returns a node in canonical form: sums and
products are flattened, like terms and like bases are collected, numeric
coefficients are folded, and operands are sorted by a deterministic key.
Two expressions built from the same algebraic content therefore compare
structurally equal, which is what makes ``simplify`` testable for
idempotence.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Union

from .errors import DomainError

Number = Union[Fraction, float]

UNARY_FUNCTIONS = ("sin", "cos", "exp", "ln")


def _number(value) -> Number:
    if isinstance(value, bool):
        raise TypeError("booleans are not expression constants")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise DomainError(f"non-finite constant {value!r}")
        if value.is_integer():
            return Fraction(int(value))
        return value
    raise TypeError(f"cannot make a constant from {type(value).__name__}")


def _is_int(q: Number) -> bool:
    return isinstance(q, Fraction) and q.denominator == 1


class Expr:
    """Base class of every node."""

    __slots__ = ("_args", "_hash", "_key", "_free", "_funcs")

    def __init__(self, *args):
        object.__setattr__(self, "_args", args)
        object.__setattr__(self, "_hash", hash((type(self).__name__, args)))
        object.__setattr__(self, "_key", None)
        object.__setattr__(self, "_free", None)
        object.__setattr__(self, "_funcs", None)

    # structural identity -------------------------------------------------
    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Expr):
            return NotImplemented
        return (
            type(self) is type(other)
            and self._hash == other._hash
            and self._args == other._args
        )

    def __hash__(self):
        return self._hash

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @property
    def sort_key(self) -> tuple:
        if self._key is None:
            object.__setattr__(self, "_key", self._make_key())
        return self._key

    def _make_key(self) -> tuple:  # pragma: no cover - abstract
        raise NotImplementedError

    @property
    def children(self) -> tuple["Expr", ...]:
        return ()

    # arithmetic sugar ----------------------------------------------------
    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return add(self, negate(as_expr(other)))

    def __rsub__(self, other):
        return add(as_expr(other), negate(self))

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        return mul(self, power(as_expr(other), -1))

    def __rtruediv__(self, other):
        return mul(as_expr(other), power(self, -1))

    def __pow__(self, other):
        return power(self, as_expr(other))

    def __rpow__(self, other):
        return power(as_expr(other), self)

    def __neg__(self):
        return negate(self)

    def __str__(self):
        from .render import render

        return render(self)

    def __repr__(self):
        return f"{type(self).__name__}({self})"

    # traversal -----------------------------------------------------------
    def free_symbols(self) -> frozenset[str]:
        if self._free is None:
            if isinstance(self, Sym):
                out = frozenset((self.name,))
            else:
                out = frozenset().union(*(c.free_symbols() for c in self.children))
            object.__setattr__(self, "_free", out)
        return self._free

    def functions(self) -> frozenset[str]:
        """Names of opaque (unspecified) functions appearing in the tree."""
        if self._funcs is None:
            out = frozenset().union(*(c.functions() for c in self.children))
            if isinstance(self, Fn):
                out = out | {self.name}
            object.__setattr__(self, "_funcs", out)
        return self._funcs

    def is_zero(self) -> bool:
        return isinstance(self, Const) and self.value == 0


class Const(Expr):
    __slots__ = ()

    def __init__(self, value):
        super().__init__(_number(value))

    @property
    def value(self) -> Number:
        return self._args[0]

    def _make_key(self):
        return (0, self.value)


class Sym(Expr):
    __slots__ = ()

    def __init__(self, name: str):
        if not isinstance(name, str) or not name:
            raise ValueError("symbol name must be a non-empty string")
        super().__init__(name)

    @property
    def name(self) -> str:
        return self._args[0]

    def _make_key(self):
        return (1, self.name)


class Fn(Expr):
    """Named but unspecified function such as Omega(r, s).

    ``derivs`` counts how many times the function has been differentiated
    with respect to each positional argument.
    """

    __slots__ = ()

    def __init__(self, name: str, args: tuple[Expr, ...], derivs: tuple[int, ...] | None = None):
        args = tuple(args)
        if derivs is None:
            derivs = (0,) * len(args)
        derivs = tuple(int(d) for d in derivs)
        if len(derivs) != len(args):
            raise ValueError("derivative orders must match argument count")
        super().__init__(name, args, derivs)

    @property
    def name(self) -> str:
        return self._args[0]

    @property
    def args(self) -> tuple[Expr, ...]:
        return self._args[1]

    @property
    def derivs(self) -> tuple[int, ...]:
        return self._args[2]

    @property
    def children(self):
        return self.args

    def _make_key(self):
        return (2, self.name, tuple(a.sort_key for a in self.args), self.derivs)


class Func(Expr):
    """One of the elementary unary functions sin, cos, exp, ln."""

    __slots__ = ()

    def __init__(self, name: str, arg: Expr):
        if name not in UNARY_FUNCTIONS:
            raise ValueError(f"unknown function {name!r}")
        super().__init__(name, arg)

    @property
    def name(self) -> str:
        return self._args[0]

    @property
    def arg(self) -> Expr:
        return self._args[1]

    @property
    def children(self):
        return (self.arg,)

    def _make_key(self):
        return (3, self.name, self.arg.sort_key)


class Pow(Expr):
    """``base ** exponent`` with a rational (or float) exponent."""

    __slots__ = ()

    def __init__(self, base: Expr, exponent: Number):
        super().__init__(base, _number(exponent))

    @property
    def base(self) -> Expr:
        return self._args[0]

    @property
    def exponent(self) -> Number:
        return self._args[1]

    @property
    def children(self):
        return (self.base,)

    def _make_key(self):
        return (4, self.base.sort_key, self.exponent)


class Mul(Expr):
    __slots__ = ()

    def __init__(self, factors: tuple[Expr, ...]):
        super().__init__(tuple(factors))

    @property
    def factors(self) -> tuple[Expr, ...]:
        return self._args[0]

    @property
    def children(self):
        return self.factors

    def _make_key(self):
        return (5, tuple(f.sort_key for f in self.factors))


class Add(Expr):
    __slots__ = ()

    def __init__(self, terms: tuple[Expr, ...]):
        super().__init__(tuple(terms))

    @property
    def terms(self) -> tuple[Expr, ...]:
        return self._args[0]

    @property
    def children(self):
        return self.terms

    def _make_key(self):
        return (6, tuple(t.sort_key for t in self.terms))


ZERO = Const(0)
ONE = Const(1)
NEG_ONE = Const(-1)


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, str):
        return Sym(value)
    return Const(value)


def symbols(names: str) -> tuple[Sym, ...]:
    return tuple(Sym(n) for n in names.replace(",", " ").split())


# --------------------------------------------------------------------------
# canonical constructors
# --------------------------------------------------------------------------


def _split_coeff(term: Expr) -> tuple[Number, Expr | None]:
    """Split a term into numeric coefficient and the remaining monomial."""
    if isinstance(term, Const):
        return term.value, None
    if isinstance(term, Mul) and isinstance(term.factors[0], Const):
        rest = term.factors[1:]
        return term.factors[0].value, rest[0] if len(rest) == 1 else Mul(rest)
    return Fraction(1), term


def _scaled(coeff: Number, rest: Expr) -> Expr:
    if coeff == 1:
        return rest
    if isinstance(rest, Mul):
        return Mul((Const(coeff),) + rest.factors)
    return Mul((Const(coeff), rest))


def add(*terms) -> Expr:
    constant: Number = Fraction(0)
    collected: dict[Expr, Number] = {}
    stack = [as_expr(t) for t in reversed(terms)]
    while stack:
        term = stack.pop()
        if isinstance(term, Add):
            stack.extend(reversed(term.terms))
            continue
        coeff, rest = _split_coeff(term)
        if rest is None:
            constant += coeff
        else:
            collected[rest] = collected.get(rest, 0) + coeff
    out = [
        _scaled(c, rest)
        for rest, c in sorted(collected.items(), key=lambda kv: kv[0].sort_key)
        if c != 0
    ]
    if constant != 0:
        out.insert(0, Const(constant))
    if not out:
        return Const(constant)
    if len(out) == 1:
        return out[0]
    return Add(tuple(out))


def _base_exp(factor: Expr) -> tuple[Expr, Number]:
    if isinstance(factor, Pow):
        return factor.base, factor.exponent
    return factor, Fraction(1)


def _const_power(base: Number, exponent: Number) -> Expr | None:
    """Exact power of a numeric constant, or None when it is irrational."""
    if base == 0:
        if exponent < 0:
            raise DomainError("division by zero")
        return ZERO if exponent != 0 else ONE
    if isinstance(base, float) or isinstance(exponent, float):
        if base < 0 and not float(exponent).is_integer():
            raise DomainError(f"fractional power of negative constant {base}")
        return Const(float(base) ** float(exponent))
    if exponent.denominator == 1:
        return Const(base ** exponent.numerator)
    if base < 0:
        if exponent.denominator % 2 == 0:
            raise DomainError(f"even root of negative constant {base}")
        return None
    root = exponent.denominator
    num = _int_root(base.numerator, root)
    den = _int_root(base.denominator, root)
    if num is None or den is None:
        return None
    return Const(Fraction(num, den) ** exponent.numerator)


def _int_root(n: int, k: int) -> int | None:
    r = round(n ** (1.0 / k))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == n:
            return cand
    return None


def mul(*factors) -> Expr:
    coeff: Number = Fraction(1)
    powers: dict[Expr, Number] = {}
    stack = [as_expr(f) for f in reversed(factors)]
    while stack:
        factor = stack.pop()
        if isinstance(factor, Mul):
            stack.extend(reversed(factor.factors))
            continue
        if isinstance(factor, Const):
            coeff *= factor.value
            continue
        base, exp_ = _base_exp(factor)
        powers[base] = powers.get(base, 0) + exp_
    if coeff == 0:
        return ZERO
    out = []
    for base, exp_ in powers.items():
        if exp_ == 0:
            continue
        if isinstance(base, Const):
            folded = _const_power(base.value, exp_)
            if folded is not None:
                coeff *= folded.value
                continue
        node = base if exp_ == 1 else power(base, exp_)
        if isinstance(node, Const):
            coeff *= node.value
        elif isinstance(node, Mul):
            # power() may distribute over a product; fold it back in.
            c, rest = _split_coeff(node)
            coeff *= c
            out.extend(rest.factors if isinstance(rest, Mul) else (rest,))
        else:
            out.append(node)
    if coeff == 0:
        return ZERO
    if len(out) != len({_base_exp(f)[0] for f in out}):
        return mul(Const(coeff), *out)
    out.sort(key=lambda f: _base_exp(f)[0].sort_key + (_base_exp(f)[1],))
    if not out:
        return Const(coeff)
    if coeff == 1 and len(out) == 1:
        return out[0]
    if coeff == 1:
        return Mul(tuple(out))
    return Mul((Const(coeff),) + tuple(out))


def negate(e: Expr) -> Expr:
    return mul(NEG_ONE, e)


def power(base, exponent) -> Expr:
    base = as_expr(base)
    exponent = as_expr(exponent)
    if not isinstance(exponent, Const):
        # symbolic exponent: b^e = exp(e ln b)
        if isinstance(base, Func) and base.name == "exp":
            return exp(mul(exponent, base.arg))
        return exp(mul(exponent, ln(base)))
    q = exponent.value
    if q == 0:
        return ONE
    if q == 1:
        return base
    if isinstance(base, Const):
        folded = _const_power(base.value, q)
        return folded if folded is not None else Pow(base, q)
    integral = _is_int(q) or (isinstance(q, float) and q.is_integer())
    if isinstance(base, Pow):
        inner = base.exponent
        if integral or not _is_int(inner):
            return power(base.base, inner * q)
        return Pow(base, q)
    if isinstance(base, Mul) and integral:
        return mul(*(power(f, q) for f in base.factors))
    if isinstance(base, Func) and base.name == "exp" and integral:
        return exp(mul(Const(q), base.arg))
    return Pow(base, q)


def sqrt(e) -> Expr:
    return power(e, Const(Fraction(1, 2)))


def _is_negated(e: Expr) -> bool:
    c, _ = _split_coeff(e)
    return c < 0


def sin(e) -> Expr:
    e = as_expr(e)
    if e.is_zero():
        return ZERO
    if _is_negated(e) and not isinstance(e, Const):
        return negate(Func("sin", negate(e)))
    return Func("sin", e)


def cos(e) -> Expr:
    e = as_expr(e)
    if e.is_zero():
        return ONE
    if _is_negated(e) and not isinstance(e, Const):
        return Func("cos", negate(e))
    return Func("cos", e)


def exp(e) -> Expr:
    e = as_expr(e)
    if e.is_zero():
        return ONE
    if isinstance(e, Func) and e.name == "ln":
        return e.arg
    return Func("exp", e)


def ln(e) -> Expr:
    e = as_expr(e)
    if isinstance(e, Const):
        if e.value <= 0:
            raise DomainError(f"ln of non-positive constant {e.value}")
        if e.value == 1:
            return ZERO
    if isinstance(e, Func) and e.name == "exp":
        return e.arg
    return Func("ln", e)


FUNCTION_BUILDERS = {"sin": sin, "cos": cos, "exp": exp, "ln": ln, "sqrt": sqrt}


def apply_function(name: str, arg: Expr) -> Expr:
    return FUNCTION_BUILDERS[name](arg)


def rebuild(node: Expr, children: Iterable[Expr]) -> Expr:
    """Reconstruct ``node`` with new children through the canonical constructors."""
    children = tuple(children)
    if isinstance(node, (Const, Sym)):
        return node
    if isinstance(node, Add):
        return add(*children)
    if isinstance(node, Mul):
        return mul(*children)
    if isinstance(node, Pow):
        return power(children[0], Const(node.exponent))
    if isinstance(node, Func):
        return apply_function(node.name, children[0])
    if isinstance(node, Fn):
        return Fn(node.name, children, node.derivs)
    raise TypeError(f"unknown node {type(node).__name__}")
