import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dynlab.geometry import metric_catalog
from dynlab.grid import grid_points
from dynlab.induction import (
    FrameVector,
    InductionError,
    TubeFieldSet,
    advection_constraint_residual,
    check_theorem1,
    check_theorem2,
    conformal_transform_field,
    corollary_metric,
    load_field_file,
    parse_field_text,
    solenoidal_residual,
    stretching_term,
    theorem1_counter_fixture,
    theorem2_counter_fixture,
)
from dynlab.symcore import Const, evaluate, parse_expr, simplify


def values(e, points, params):
    return np.array([evaluate(e, {"t": 0.0, **params, **p}) for p in points])


def test_confinement():
    f = TubeFieldSet()
    assert f.B_r.is_zero() and f.v_r.is_zero()


def test_s_independent_fields_annihilate_stretching():
    f = TubeFieldSet(B_theta="r", B_s="1 + r", v_theta="r^2", v_s="2", Omega="1 + r")
    assert all(simplify(c).is_zero() for c in stretching_term(f).components())


def test_e_r_component_equals_a():
    f = TubeFieldSet(B_theta="1", v_theta="1", Omega="exp(s)", params={"tau0": 1.0})
    st_ = stretching_term(f)
    assert evaluate(st_.e_r, {"r": 0.4, "s": 0.3, "tau0": 1.0}) == pytest.approx(1.0)


def test_zero_torsion_is_rejected():
    f = TubeFieldSet(params={"tau0": 0.0})
    with pytest.raises(InductionError):
        stretching_term(f)
    with pytest.raises(InductionError):
        solenoidal_residual(f, "conformal")
    solenoidal_residual(f, "piecewise")  # no 1/tau0 there


def test_solenoidal_variants():
    f = TubeFieldSet(B_theta="-cos(s)", K="K0", Omega="1 + r")
    assert simplify(solenoidal_residual(f, "piecewise") - parse_expr("-sin(s)")).is_zero()
    f = TubeFieldSet(B_theta="1", Omega="exp(s)", params={"tau0": 1.0})
    assert evaluate(solenoidal_residual(f, "conformal"), {"s": 0.0, "r": 0.7, "tau0": 1.0}) == 1.0
    axis = TubeFieldSet(B_theta="r", B_s="1", Omega="1 + r", K="2 + r")
    assert solenoidal_residual(axis, "conformal").is_zero()
    assert solenoidal_residual(axis, "piecewise").is_zero()
    with pytest.raises(InductionError):
        solenoidal_residual(axis, "other")


def test_advection_constraint():
    assert advection_constraint_residual(TubeFieldSet(Omega="1 + r^2", v_theta="r", v_s="1")).is_zero()
    f = TubeFieldSet(Omega="r*s", v_s="1")
    assert advection_constraint_residual(f) == parse_expr("r")
    static = TubeFieldSet(Omega="1 + r", v_theta="1")
    assert advection_constraint_residual(static, include_time=True).is_zero()
    moving = TubeFieldSet(Omega="r*s + t", v_s="1")
    assert advection_constraint_residual(moving, include_time=True) == parse_expr("1 + r/3")


def test_advection_uses_physical_components():
    f = TubeFieldSet(Omega="theta_R", v_theta="1")
    res = advection_constraint_residual(f)  # sqrt(r^2) stays unsimplified without a sign assumption
    assert evaluate(res, {"r": 0.5, "theta_R": 0.1, "s": 0.0}) == pytest.approx(2.0, rel=1e-15)
    conf = metric_catalog("non-dynamo-tube").resolved()
    assert advection_constraint_residual(f, metric=conf) == Const(1)


def test_conformal_field_transform():
    B = FrameVector(Const(0), Const(1), Const(1))
    assert conformal_transform_field(B, 2) == FrameVector(Const(0), Const(2), Const(2))
    assert conformal_transform_field(B, 1) == B
    scaled = conformal_transform_field(B, parse_expr("exp(gamma*T)"))
    assert evaluate(scaled.t, {"gamma": 0.5, "T": 2.0}) == pytest.approx(np.e, rel=1e-15)


@given(st.sampled_from(["r", "exp(s)", "1 + r^2", "Omega0/r"]), st.sampled_from(["2", "sin(s) + 2", "t"]))
@settings(max_examples=12)
def test_conformal_transform_composes(o1, o2):
    B = FrameVector(parse_expr("r"), parse_expr("cos(s)"), parse_expr("1"))
    a, b = parse_expr(o1), parse_expr(o2)
    assert conformal_transform_field(conformal_transform_field(B, a), b) == conformal_transform_field(B, a * b)


def test_stretching_is_linear_in_b():
    f = TubeFieldSet(B_theta="r*cos(s)", B_s="1 + sin(s)", v_theta="r*s", v_s="1/2", Omega="1 + r*sin(s)/4")
    g = TubeFieldSet(B_theta="2*r*cos(s)", B_s="2 + 2*sin(s)", v_theta="r*s", v_s="1/2", Omega="1 + r*sin(s)/4")
    pts = grid_points()
    for cf, cg in zip(stretching_term(f).components(), stretching_term(g).components()):
        a, b = values(cf, pts, f.params), values(cg, pts, g.params)
        assert np.allclose(b, 2 * a, rtol=1e-10, atol=1e-14)


def test_theorem1_fixture_passes():
    rep = check_theorem1()
    assert rep.passed and rep.verdict == "pass"
    assert rep.max_residual < 1e-12
    assert rep.max_residual == max(rep.max_abs.values())
    assert any("d_s v_theta" in n for n in rep.notes)
    assert set(rep.residuals) == {"Eq.25 e_r", "Eq.25 e_theta", "Eq.25 t", "Eq.28"}


def test_theorem1_counter_fixture_fails_in_e_r():
    rep = check_theorem1(theorem1_counter_fixture())
    assert not rep.passed and rep.verdict == "violation"
    assert rep.max_abs["Eq.25 e_r"] > 1e-3
    assert rep.hypotheses["Eq.29 d_s Omega/Omega"] == pytest.approx(1.0)


def test_theorem1_zero_field_is_vacuous():
    rep = check_theorem1(TubeFieldSet(v_theta="r", Omega="1 + r"))
    assert rep.passed and rep.verdict == "vacuous" and rep.max_residual == 0.0


def test_theorem2_fixture_is_non_stretched():
    rep = check_theorem2()
    assert rep.passed and rep.verdict == "non-stretched tube"
    assert rep.max_residual < 1e-12
    assert rep.hypotheses["Eq.36 d_s K"] == 0.0 and rep.hypotheses["Eq.37 d_r K"] == 0.0


def test_theorem2_counter_fixture_is_flagged():
    rep = check_theorem2(theorem2_counter_fixture())
    assert not rep.passed and rep.verdict == "violation"
    assert rep.max_abs["Eq.32"] > 1e-3
    assert any("K depends on r" in n for n in rep.notes)


def test_theorem2_empty_fields_vacuous():
    rep = check_theorem2(TubeFieldSet(K="1 + r"))
    assert rep.verdict == "vacuous" and rep.passed


def test_report_pass_iff_below_tolerance():
    rep = check_theorem2(theorem2_counter_fixture(), tolerance=10.0)
    assert rep.passed == (rep.max_residual < 10.0)


def test_corollary_metric():
    assert corollary_metric(1, 1).resolved().diag() == (parse_expr("1/r^2"), Const(1), Const(1))
    assert corollary_metric(2, 3).resolved().diag() == (parse_expr("4/r^2"), Const(4), Const(9))
    assert corollary_metric().entries == metric_catalog("non-dynamo-tube").entries
    with pytest.raises(InductionError):
        corollary_metric(0, 1)
    with pytest.raises(InductionError):
        corollary_metric(1, -2)


def test_field_file(tmp_path):
    p = tmp_path / "f.fld"
    p.write_text("# fields\nB_theta = r\nOmega = Omega0/r  # conformal\nparam Omega0 = 2\nparam tau0 = 0.5\n")
    f = load_field_file(p)
    assert f.B_theta == parse_expr("r") and f.params == {"Omega0": 2.0, "tau0": 0.5}
    assert f.B_s.is_zero() and f.K == Const(1)


@pytest.mark.parametrize("text", ["B_x = 1", "B_theta = 1 +", "param tau0 = q", "just words"])
def test_field_file_errors(text):
    with pytest.raises(InductionError):
        parse_field_text(text)
