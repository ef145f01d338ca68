import math

import numpy as np
import pytest

from dynlab.geometry import (
    CATALOG_KEYS,
    DEFAULT_REALIZATIONS,
    GeometryError,
    Metric,
    conformal_rescale,
    load_metric_file,
    metric_catalog,
    parse_metric_text,
)
from dynlab.grid import random_points
from dynlab.symcore import Const, parse_expr, simplify


def diag_texts(m):
    return [str(simplify(e)) for e in m.diag()]


def test_catalog_keys():
    assert set(CATALOG_KEYS) == {
        "flat-tube", "conformal-tube", "piecewise-tube", "non-dynamo-tube", "fast-dynamo-tube", "ricca-tube",
    }


def test_flat_tube():
    m = metric_catalog("flat-tube")
    assert m.is_diagonal and m.diag() == (Const(1), parse_expr("r^2"), Const(1))


def test_non_dynamo_defaults():
    m = metric_catalog("non-dynamo-tube").resolved()
    assert m.diag() == (parse_expr("1/r^2"), Const(1), Const(1))
    m = metric_catalog("non-dynamo-tube", Omega0=2.0, K0=3.0).resolved()
    assert m.diag() == (parse_expr("4/r^2"), Const(4), Const(9))


def test_fast_dynamo_tube():
    assert metric_catalog("fast-dynamo-tube").diag() == (parse_expr("r^2"), parse_expr("r^4"), Const(1))


def test_ricca_tube_substitutes_constant_torsion():
    m = metric_catalog("ricca-tube")
    g_ss = m["s", "s"]
    expected = parse_expr("(1 - kappa*r*cos(theta_R - tau0*s))^2")
    assert g_ss == expected
    assert m.params == {"kappa": 0.1, "tau0": 0.1}


def test_opaque_catalog_entries():
    m = metric_catalog("piecewise-tube")
    assert set(m.functions) == {"Omega", "K"}
    with pytest.raises(GeometryError):
        m.compiled()
    concrete = m.concretize(DEFAULT_REALIZATIONS)
    assert concrete.compiled()(0.5, 0.0, 1.0).shape == (3, 3)


def test_unknown_catalog_key_and_params():
    with pytest.raises(GeometryError, match="unknown catalog metric"):
        metric_catalog("klein-bottle")
    with pytest.raises(GeometryError, match="unknown parameters"):
        metric_catalog("flat-tube", kappa=1.0)


def test_symmetry_is_enforced():
    with pytest.raises(GeometryError):
        Metric("bad", [[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    m = Metric.from_components("sym", {(0, 0): 1, (1, 1): 1, (2, 2): 1, (0, 1): parse_expr("r")})
    assert m[1, 0] == m[0, 1] == parse_expr("r")


@pytest.mark.parametrize("name", CATALOG_KEYS)
def test_catalog_metrics_positive_definite_on_domain(name):
    m = metric_catalog(name).concretize(DEFAULT_REALIZATIONS)
    ok, lowest = m.check_positive_definite(random_points(20, seed=1))
    assert ok and lowest > 0
    ok, _ = m.check_positive_definite()
    assert ok


def test_rescale_by_r_and_comparison_note():
    flat = metric_catalog("flat-tube")
    m = conformal_rescale(flat, "r", compare_to=metric_catalog("fast-dynamo-tube"))
    assert m.diag() == (parse_expr("r^2"), parse_expr("r^4"), parse_expr("r^2"))
    assert any("g_ss" in n and "differs" in n for n in m.notes)


def test_rescale_by_one_is_identity():
    flat = metric_catalog("flat-tube")
    assert conformal_rescale(flat, "1").entries == flat.entries


def test_rescale_by_omega0_over_r_differs_from_non_dynamo_in_g_ss():
    m = conformal_rescale(metric_catalog("flat-tube"), "Omega0/r", compare_to=metric_catalog("non-dynamo-tube"))
    assert m.diag() == (parse_expr("Omega0^2/r^2"), parse_expr("Omega0^2"), parse_expr("Omega0^2/r^2"))
    notes = [n for n in m.notes if n.startswith("comparison")]
    assert len(notes) == 1 and "g_ss" in notes[0]


def test_rescale_records_domain_warning():
    m = conformal_rescale(metric_catalog("flat-tube"), "r - 1")
    assert any(n.startswith("domain warning") for n in m.notes)


def test_block_rescale_leaves_third_direction():
    m = conformal_rescale(metric_catalog("flat-tube"), "r", block=(0, 1))
    assert m.diag() == (parse_expr("r^2"), parse_expr("r^4"), Const(1))


METRIC_TEXT = """
# Ricca tube from a file
coord = r, theta_R, s
param kappa = 0.2
param tau0 = 0.1
g_rr = 1
g_thth = r^2
g_ss = (1 - kappa*r*cos(theta_R - tau0*s))^2
"""


def test_parse_metric_text_matches_catalog():
    m = parse_metric_text(METRIC_TEXT)
    cat = metric_catalog("ricca-tube")
    assert m.entries == cat.entries
    assert m.params == {"kappa": 0.2, "tau0": 0.1}


def test_off_diagonal_and_func_lines():
    m = parse_metric_text("g_rr = 1\ng_thth = r^2\ng_ss = 1\ng_rth = r/10\n")
    assert m[1, 0] == parse_expr("r/10") and not m.is_diagonal
    m = parse_metric_text("func Omega(r) = 1 + r\ng_rr = Omega(r)^2\ng_thth = r^2\ng_ss = 1\n")
    assert m["r", "r"] == parse_expr("(1 + r)^2") and not m.functions


@pytest.mark.parametrize(
    "text, msg",
    [
        ("g_rr = 1\ng_thth = r^2\n", "missing diagonal"),
        ("g_rr = 1\ng_thth = r^2\ng_ss = 1\ng_xx = 1\n", "unknown key"),
        ("coord = x, y, z\n", "chart"),
        ("param a = b\n", "numeric"),
        ("g_rr = 1 +\ng_thth = 1\ng_ss = 1\n", "line 1"),
    ],
)
def test_metric_text_errors(text, msg):
    with pytest.raises(GeometryError, match=msg):
        parse_metric_text(text)


def test_load_metric_file(tmp_path):
    p = tmp_path / "tube.metric"
    p.write_text(METRIC_TEXT, encoding="utf-8")
    m = load_metric_file(p)
    assert m.name == "tube"
    g = m.compiled if m.free_parameters() == set() else m.resolved().compiled
    assert np.allclose(g()(1.0, 0.0, 0.0), np.diag([1.0, 1.0, 0.8**2]))
