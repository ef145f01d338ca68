"""Recursive-descent parser for the ASCII expression grammar.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' unary)?
    atom   := NUMBER | NAME | NAME '(' args ')' | '(' expr ')'

Built-in functions are sin, cos, exp, ln, sqrt and ``diff(expr, var[, n])``.
Opaque functions (``Omega(r, s)``) must be declared by the caller.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import ParseError
from .nodes import FUNCTION_BUILDERS, Const, Expr, Fn, Sym, add, as_expr, mul, negate, power

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^(),])"
    r")"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad, text)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, functions, bindings):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.functions = functions
        self.bindings = bindings

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return ParseError(message, tok[2], self.text)

    def expect(self, value):
        tok = self.take()
        if tok[1] != value or tok[0] not in ("op",):
            raise self.error(f"expected {value!r}", tok)
        return tok

    def parse(self) -> Expr:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        e = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected token {self.peek()[1]!r}")
        return e

    def expr(self):
        left = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            right = self.term()
            left = add(left, right) if op == "+" else add(left, negate(right))
        return left

    def term(self):
        left = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            right = self.unary()
            left = mul(left, right) if op == "*" else mul(left, power(right, -1))
        return left

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            operand = self.unary()
            return negate(operand) if tok[1] == "-" else operand
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^", self.peek()[2]):
            self.take()
            return power(base, self.unary())
        return base

    def args(self):
        self.expect("(")
        out = [self.expr()]
        while self.peek()[1] == "," and self.peek()[0] == "op":
            self.take()
            out.append(self.expr())
        self.expect(")")
        return out

    def atom(self):
        tok = self.take()
        kind, value, pos = tok
        if kind == "num":
            return Const(Fraction(value))
        if kind == "op" and value == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "name":
            if self.peek()[1] == "(" and self.peek()[0] == "op":
                return self.call(tok)
            if value in self.bindings:
                return self.bindings[value]
            return Sym(value)
        if kind == "end":
            raise self.error("unexpected end of expression", tok)
        raise self.error(f"unexpected token {value!r}", tok)

    def call(self, tok):
        name = tok[1]
        if name == "diff":
            return self.diff(tok)
        if name in FUNCTION_BUILDERS:
            args = self.args()
            if len(args) != 1:
                raise self.error(f"{name} takes exactly one argument", tok)
            return FUNCTION_BUILDERS[name](args[0])
        if name in self.functions:
            args = self.args()
            arity = self.functions[name]
            if arity is not None and len(args) != arity:
                raise self.error(f"{name} takes {arity} arguments, got {len(args)}", tok)
            return Fn(name, tuple(args))
        raise self.error(f"unknown function {name!r}", tok)

    def diff(self, tok):
        from .calculus import differentiate

        args = self.args()
        if len(args) not in (2, 3):
            raise self.error("diff takes (expr, var) or (expr, var, n)", tok)
        var = args[1]
        if not isinstance(var, Sym):
            raise self.error("diff variable must be a symbol", tok)
        order = 1
        if len(args) == 3:
            n = args[2]
            if not (isinstance(n, Const) and isinstance(n.value, Fraction)
                    and n.value.denominator == 1 and n.value >= 1):
                raise self.error("diff order must be a positive integer", tok)
            order = int(n.value)
        e = args[0]
        for _ in range(order):
            e = differentiate(e, var.name)
        return e


def parse_expr(
    text: str,
    functions: Iterable[str] | Mapping[str, int | None] = (),
    bindings: Mapping[str, object] | None = None,
) -> Expr:
    """Parse ``text`` into a canonical expression tree.

    ``functions`` declares opaque function names (optionally with arity).
    ``bindings`` substitutes expressions for symbol names while parsing, so
    that ``diff`` sees the substituted expression.
    """
    if not isinstance(text, str):
        raise TypeError("expression text must be a string")
    if isinstance(functions, Mapping):
        fmap = dict(functions)
    else:
        fmap = {name: None for name in functions}
    clash = set(fmap) & (set(FUNCTION_BUILDERS) | {"diff"})
    if clash:
        raise ValueError(f"cannot redeclare built-in functions {sorted(clash)}")
    bound = {k: as_expr(v) for k, v in (bindings or {}).items()}
    return _Parser(text, fmap, bound).parse()
