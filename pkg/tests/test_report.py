import json
import math

import pytest

from dynlab.report import (
    ClaimRecord,
    ComparisonReport,
    agree,
    claims_to_csv,
    envelope,
    judge,
    make_sample,
    rows_to_csv,
    to_json,
)


def rec(cid, eq, verdict="confirmed"):
    return ClaimRecord(cid, eq, "x", verdict, 1e-9, [make_sample({"r": 1.0}, 1.0, 1.0)] * 3)


def test_agree_is_mixed_absolute_relative():
    assert agree(1e6 + 1e-4, 1e6, 1e-9)
    assert not agree(1e-8, 0.0, 1e-9)


def test_judge():
    good = [make_sample({}, 1.0, 1.0 + 1e-12)] * 3
    bad = good + [make_sample({}, 1.0, 2.0)]
    assert judge(good, 1e-9) == "confirmed"
    assert judge(bad, 1e-9) == "discrepant"
    assert judge(good[:2], 1e-9) == "inconclusive"
    assert judge([make_sample({}, None, 1.0)] * 5, 1e-9) == "inconclusive"


def test_invalid_verdict():
    with pytest.raises(ValueError):
        ClaimRecord("a", 1, "", "maybe", 1.0, [])


def test_sorted_and_lookup():
    r = ComparisonReport([rec("Eq.45", 45), rec("Eq.40b", 40), rec("Eq.40a", 40)]).sorted()
    assert [c.id for c in r.claims] == ["Eq.40a", "Eq.40b", "Eq.45"]
    assert r.by_id("Eq.45").equation == 45
    with pytest.raises(KeyError):
        r.by_id("Eq.1")


def test_json_schema_and_cleaning():
    doc = envelope({"seed": 1}, claims=[rec("Eq.45", 45)], g=complex(1, -2), bad=math.nan)
    text = to_json(doc)
    data = json.loads(text)
    assert set(data) >= {"tool_version", "config", "claims"}
    c = data["claims"][0]
    assert set(c) >= {"id", "paper_text", "verdict", "tolerance", "samples"}
    assert set(c["samples"][0]) >= {"point", "paper_value", "computed_value", "abs_diff"}
    assert data["g"] == {"re": 1.0, "im": -2.0} and data["bad"] is None


def test_csv_projection():
    text = claims_to_csv([rec("Eq.42", 42)])
    lines = text.splitlines()
    assert lines[0].startswith("id,equation,verdict")
    assert len(lines) == 4
    assert rows_to_csv(("a", "b"), [(1.5, None)]) == "a,b\n1.5,\n"
