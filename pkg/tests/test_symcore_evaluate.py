import math

import pytest
from hypothesis import given, settings, strategies as st

from dynlab.symcore import (
    Const,
    DomainError,
    Sym,
    SymcoreError,
    UnboundSymbolError,
    evaluate,
    lambdify,
    parse_expr,
)
from strategies import bindings, exprs


def test_examples():
    assert evaluate(parse_expr("r^2"), {"r": 3}) == 9
    assert evaluate(parse_expr("1 - kappa*r*cos(theta)"), {"kappa": 0.1, "r": 1, "theta": 0}) == pytest.approx(0.9)


def test_division_by_zero_is_a_domain_error():
    with pytest.raises(DomainError):
        evaluate(parse_expr("Omega0/r"), {"Omega0": 1, "r": 0})


@pytest.mark.parametrize("text", ["ln(r)", "ln(r - 1)", "sqrt(r - 2)"])
def test_other_domain_errors(text):
    with pytest.raises(DomainError):
        evaluate(parse_expr(text), {"r": 0.0 if text == "ln(r)" else 1.0})


def test_unbound_symbol_is_an_error_never_a_default():
    with pytest.raises(UnboundSymbolError) as info:
        evaluate(parse_expr("r + kappa"), {"r": 1})
    assert info.value.name == "kappa"


def test_opaque_function_cannot_be_evaluated():
    e = parse_expr("Omega(r)", functions=["Omega"])
    with pytest.raises(SymcoreError):
        evaluate(e, {"r": 1})


def test_ln_of_nonpositive_constant_is_rejected_at_construction():
    with pytest.raises(DomainError):
        parse_expr("ln(-1)")


def test_expressions_are_immutable_and_hashable():
    e = parse_expr("r + s")
    with pytest.raises(AttributeError):
        e._args = ()
    assert hash(e) == hash(parse_expr("s + r"))
    assert {e: 1}[parse_expr("s+r")] == 1
    assert Sym("r") != Const(1)


@settings(max_examples=100)
@given(exprs(), bindings)
def test_lambdify_agrees_with_tree_walk(e, b):
    try:
        ref = evaluate(e, b)
    except (DomainError, OverflowError):
        return
    f = lambdify(e, ("r", "s", "theta"))
    got = f(b["r"], b["s"], b["theta"])
    assert got == pytest.approx(ref, rel=1e-12, abs=1e-12) or (math.isnan(ref) and math.isnan(got))
