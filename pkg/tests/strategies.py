"""Hypothesis strategies for random expression trees over r, s, theta."""
from fractions import Fraction

from hypothesis import strategies as st

from dynlab.symcore import Const, Sym, add, cos, exp, ln, mul, power, sin

VARS = ("r", "s", "theta")

consts = st.builds(
    lambda n, d: Const(Fraction(n, d)),
    st.integers(-3, 3),
    st.sampled_from([1, 2, 3, 4]),
)
syms = st.sampled_from(VARS).map(Sym)
leaves = st.one_of(consts, syms, syms)


def _positive(e):
    # bounded away from zero on any real input
    return add(Const(Fraction(3, 2)), sin(e))


@st.composite
def exprs(draw, depth=6):
    """A random tree of depth at most ``depth``, built to stay finite on [0.5, 1.5]^3."""
    if depth <= 1:
        return draw(leaves)
    kind = draw(st.sampled_from(["leaf", "add", "mul", "sin", "cos", "exp", "pow", "inv", "ln"]))
    sub = exprs(depth=depth - 1)
    if kind == "leaf":
        return draw(leaves)
    if kind == "add":
        return add(draw(sub), draw(sub))
    if kind == "mul":
        return mul(draw(sub), draw(sub))
    if kind == "sin":
        return sin(draw(sub))
    if kind == "cos":
        return cos(draw(sub))
    if kind == "exp":
        return exp(sin(draw(sub)))
    if kind == "pow":
        return power(draw(sub), draw(st.sampled_from([2, 3])))
    if kind == "inv":
        return power(_positive(draw(sub)), draw(st.sampled_from([-1, -2, Fraction(1, 2)])))
    return ln(_positive(draw(sub)))


bindings = st.fixed_dictionaries({v: st.floats(0.5, 1.5) for v in VARS})
