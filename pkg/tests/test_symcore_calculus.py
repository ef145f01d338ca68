import math

import numpy as np

import pytest
from hypothesis import assume, given, settings

from dynlab.symcore import (
    DomainError,
    Fn,
    Sym,
    central_difference,
    default_step,
    differentiate,
    evaluate,
    numeric_derivative,
    parse_expr,
    simplify,
    substitute_function,
    subs,
)
from strategies import VARS, bindings, exprs


def test_power_rule():
    assert differentiate(parse_expr("r^2"), "r") == parse_expr("2*r")


def test_quotient_rule():
    assert differentiate(parse_expr("Omega0/r"), "r") == parse_expr("-Omega0/r^2")


def test_ricca_factor_derivative_matches_finite_difference():
    e = parse_expr("1 - kappa*r*cos(theta)")
    d = differentiate(e, "r")
    assert d == parse_expr("-kappa*cos(theta)")
    b = {"r": 0.5, "theta": 1.0, "kappa": 0.1}
    assert abs(evaluate(d, b) - numeric_derivative(e, "r", b)) < 1e-8


def test_higher_order_and_chain_rule():
    e = parse_expr("exp(sin(r*s))")
    d2 = differentiate(e, "r", 2)
    b = {"r": 0.7, "s": 1.3}
    fd = central_difference(lambda x: evaluate(differentiate(e, "r"), {**b, "r": x}), 0.7)
    assert evaluate(d2, b) == pytest.approx(fd, rel=1e-9)


def test_opaque_function_derivative_stays_symbolic_until_substituted():
    om = Fn("Omega", (Sym("r"), Sym("s")))
    e = differentiate(om**2, "r")
    assert e.functions() == {"Omega"}
    concrete = substitute_function(e, "Omega", ("r", "s"), parse_expr("r*s + 1"))
    assert simplify(concrete - parse_expr("2*s*(r*s + 1)")).is_zero()


def test_numeric_derivative_examples():
    assert numeric_derivative(parse_expr("r^2"), "r", {"r": 3.0}, h=1e-3) == pytest.approx(6.0, abs=1e-8)
    assert numeric_derivative(parse_expr("Omega0/r"), "r", {"r": 1.0, "Omega0": 1.0}, h=1e-4) == pytest.approx(-1.0, abs=1e-7)
    assert numeric_derivative(parse_expr("5"), "r", {"r": 2.0}) == 0.0


def test_numeric_derivative_propagates_domain_errors():
    with pytest.raises(DomainError):
        numeric_derivative(parse_expr("ln(r)"), "r", {"r": 1e-5})


def test_default_step_scales_with_magnitude():
    assert default_step(0.5) == 1e-4
    assert default_step(-300.0) == pytest.approx(3e-2)


def test_central_difference_handles_array_valued_functions():
    out = central_difference(lambda x: np.array([x**2, math.sin(x)]), 1.0)
    assert out[0] == pytest.approx(2.0, abs=1e-10)
    assert out[1] == pytest.approx(math.cos(1.0), abs=1e-10)


def test_subs_with_numbers_and_expressions():
    e = parse_expr("a*r + b")
    assert subs(e, {"a": 2, "b": parse_expr("s")}) == parse_expr("2*r + s")


@settings(max_examples=200)
@given(exprs(), bindings, __import__("hypothesis").strategies.sampled_from(VARS))
def test_symbolic_derivative_matches_finite_difference(e, b, var):
    try:
        value = evaluate(differentiate(e, var), b)
        fd = numeric_derivative(e, var, b)
    except (DomainError, OverflowError):
        assume(False)
    assume(math.isfinite(value) and abs(value) < 1e8)
    assert abs(value - fd) < 1e-6 * (1 + abs(value))
