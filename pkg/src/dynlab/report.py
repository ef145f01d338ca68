"""Claim records, comparison reports and their JSON/CSV serialization."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from . import __version__

VERDICTS = ("confirmed", "discrepant", "inconclusive")


@dataclass
class Sample:
    point: dict[str, Any]
    paper_value: float | None
    computed_value: float | None
    abs_diff: float | None
    fd_value: float | None = None


@dataclass
class ClaimRecord:
    id: str
    equation: int
    paper_text: str
    verdict: str
    tolerance: float
    samples: list[Sample]
    computed_text: str = ""
    context: str = ""
    sign_convention: str | None = None
    note: str = ""

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"bad verdict {self.verdict!r}")


@dataclass
class ComparisonReport:
    claims: list[ClaimRecord] = field(default_factory=list)

    def by_id(self, claim_id: str) -> ClaimRecord:
        for c in self.claims:
            if c.id == claim_id:
                return c
        raise KeyError(claim_id)

    def sorted(self) -> "ComparisonReport":
        return ComparisonReport(sorted(self.claims, key=lambda c: (c.equation, c.id)))


def agree(a: float, b: float, tol: float) -> bool:
    """Mixed absolute/relative comparison: |a - b| <= tol * (1 + |b|)."""
    return abs(a - b) <= tol * (1.0 + abs(b))


def judge(samples: Sequence[Sample], tol: float, min_samples: int = 3) -> str:
    valid = [s for s in samples if s.paper_value is not None and s.computed_value is not None]
    if len(valid) < min_samples:
        return "inconclusive"
    if all(agree(s.paper_value, s.computed_value, tol) for s in valid):
        return "confirmed"
    return "discrepant"


def make_sample(point, paper_value, computed_value, fd_value=None) -> Sample:
    diff = None
    if paper_value is not None and computed_value is not None:
        diff = abs(paper_value - computed_value)
    return Sample(dict(point), paper_value, computed_value, diff, fd_value)


# --------------------------------------------------------------------------
# serialization
# --------------------------------------------------------------------------


def _clean(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, complex):
        return {"re": _clean(obj.real), "im": _clean(obj.imag)}
    if isinstance(obj, Mapping):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "__dataclass_fields__"):
        return _clean(asdict(obj))
    return obj


def envelope(config: Mapping[str, Any], **body) -> dict:
    doc = {"tool_version": __version__, "config": dict(config)}
    doc.update(body)
    return _clean(doc)


def to_json(doc: Mapping[str, Any]) -> str:
    return json.dumps(_clean(doc), indent=2, sort_keys=True, allow_nan=False) + "\n"


CLAIM_COLUMNS = ("id", "equation", "verdict", "tolerance", "point", "paper_value", "computed_value", "abs_diff")


def claims_to_csv(claims: Iterable[ClaimRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CLAIM_COLUMNS)
    for c in claims:
        for s in c.samples:
            w.writerow([
                c.id, c.equation, c.verdict, repr(c.tolerance),
                json.dumps(_clean(s.point), sort_keys=True),
                _fmt(s.paper_value), _fmt(s.computed_value), _fmt(s.abs_diff),
            ])
    return buf.getvalue()


def rows_to_csv(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) if isinstance(v, float) or v is None else v for v in row])
    return buf.getvalue()


def _fmt(v) -> str:
    if v is None:
        return ""
    return repr(float(v))
