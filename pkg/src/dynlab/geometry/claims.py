"""Printed curvature claims and their comparison against the engine.

Each claim names a metric, a covariant component and the printed value as
an expression string.  The engine value is the symbolic component with any
opaque functions replaced by concrete realizations; every sample also
carries a finite-difference value so a symbolic bug cannot masquerade as a
confirmed or discrepant verdict.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

from ..grid import random_points
from ..report import ClaimRecord, agree, judge, make_sample
from ..symcore import DomainError, Expr, evaluate, parse_expr, render, substitute_function, subs
from ..symcore.nodes import Const
from .curvature import RiemannTensor, riemann
from .flatness import FAMILY, family_metric
from .metric import Metric, metric_catalog
from .oracle import fd_riemann

FD_TOLERANCE = 1e-6
DEFAULT_TOLERANCE = 1e-9

Realization = Mapping[str, tuple[tuple[str, ...], str]]


@dataclass(frozen=True)
class CurvatureClaim:
    id: str
    equation: int
    paper_text: str
    metric: str
    component: str
    expr: str
    # ordered (name, text) definitions bound at parse time, e.g. D := d_r K^2
    defs: tuple[tuple[str, str], ...] = ()
    # concrete bodies for opaque functions; one entry per evaluation case
    cases: tuple[Realization, ...] = ({},)
    params: Mapping[str, float] = field(default_factory=dict)
    anchors: tuple[Mapping[str, float], ...] = ()
    context: str = ""

    def paper_expr(self, functions: Mapping[str, int] | None = None) -> Expr:
        functions = dict(functions or {})
        bindings: dict[str, Expr] = {}
        for name, text in self.defs:
            bindings[name] = parse_expr(text, functions=functions, bindings=bindings)
        return parse_expr(self.expr, functions=functions, bindings=bindings)


# The three concrete K profiles used for the generic diag(1, r^2, K^2) claims.
GENERIC_K = (
    {"Omega": (("r", "s"), "1"), "K": (("r", "s"), "1 + r*cos(s)/5 + r^2/10")},
    {"Omega": (("r", "s"), "1"), "K": (("r", "s"), "exp(r*sin(s)/3)")},
    {"Omega": (("r", "s"), "1"), "K": (("r", "s"), "2 - r/(3 + cos(s))")},
)

_GENERIC_D = (("D", "diff(K(r, s)^2, r)"),)
_RICCA_DEFS = (
    ("theta", "theta_R - tau0*s"),
    ("K", "1 - kappa*r*cos(theta)"),
    ("D", "diff(K^2, r)"),
)
_EQ40_TEXT = "R_rsrs = -(1/(4K^2))[2K^2 d_r D - D^2] = -(1/2)K^4/r^2 = -(1/2) r^2 kappa^4 cos^2(theta), D = d_r K^2"
_EQ41_TEXT = "R_thsths = -(r/2) D = -K^2, D = d_r K^2"

CLAIMS: tuple[CurvatureClaim, ...] = (
    CurvatureClaim(
        "Eq.40a", 40, _EQ40_TEXT, "piecewise-tube", "R_rsrs",
        "-(1/(4*K(r, s)^2))*(2*K(r, s)^2*diff(D, r) - D^2)",
        defs=_GENERIC_D, cases=GENERIC_K,
        context="first equality, diag(1, r^2, K(r,s)^2) with three concrete K",
    ),
    CurvatureClaim(
        "Eq.40a@ricca", 40, _EQ40_TEXT, "ricca-tube", "R_rsrs",
        "-(1/(4*K^2))*(2*K^2*diff(D, r) - D^2)", defs=_RICCA_DEFS,
        context="first equality on the Ricca metric",
    ),
    CurvatureClaim(
        "Eq.40b", 40, _EQ40_TEXT, "ricca-tube", "R_rsrs", "-K^4/(2*r^2)", defs=_RICCA_DEFS,
        context="second equality on the Ricca metric",
    ),
    CurvatureClaim(
        "Eq.40c", 40, _EQ40_TEXT, "ricca-tube", "R_rsrs", "-r^2*kappa^4*cos(theta)^2/2", defs=_RICCA_DEFS,
        context="third equality on the Ricca metric",
    ),
    CurvatureClaim(
        "Eq.41a", 41, _EQ41_TEXT, "piecewise-tube", "R_thsths", "-(r/2)*D",
        defs=_GENERIC_D, cases=GENERIC_K,
        context="first equality, diag(1, r^2, K(r,s)^2) with three concrete K",
    ),
    CurvatureClaim(
        "Eq.41a@ricca", 41, _EQ41_TEXT, "ricca-tube", "R_thsths", "-(r/2)*D", defs=_RICCA_DEFS,
        context="first equality on the Ricca metric (K also depends on theta_R)",
    ),
    CurvatureClaim(
        "Eq.41b", 41, _EQ41_TEXT, "ricca-tube", "R_thsths", "-K^2", defs=_RICCA_DEFS,
        context="second equality on the Ricca metric",
    ),
    CurvatureClaim(
        "Eq.42", 42, "R_rsrs = -1/r^2 (thin tube, K^2 ~ 1)", "flat-tube", "R_rsrs", "-1/r^2",
        context="thin-tube limit K = 1 is the flat tube metric",
    ),
    CurvatureClaim(
        "Eq.18", 18, "ds^2 = r^2[dr^2 + r^2 dtheta^2] + ds^2 is Riemann-flat", "fast-dynamo-tube",
        "R_rthrth", "0", context="only component that could survive for this diagonal metric",
    ),
    CurvatureClaim(
        "Eq.44", 44, "R_rthrth = -(r/4)[r(Omega^2)'' + (Omega^2)' - (1/(2 Omega^2))(Omega^2)' r]",
        FAMILY, "R_rthrth", "-(r/4)*(r*diff(P, r, 2) + diff(P, r) - 1/(2*P)*diff(P, r)*r)",
        defs=(("P", "Omega(r)^2"),),
        cases=({"Omega": (("r",), "Omega0/r")}, {"Omega": (("r",), "1 + r^2/5")}),
        params={"Omega0": 1.0},
        context="Omega(r)^2 (dr^2 + r^2 dtheta_R^2) + ds^2 with Omega = Omega0/r and 1 + r^2/5",
    ),
    CurvatureClaim(
        "Eq.45", 45, "R_1212 = -3 Omega0^2 / r^2", "non-dynamo-tube", "R_rthrth", "-3*Omega0^2/r^2",
        anchors=({"r": 1.0, "theta_R": 0.0, "s": 0.0},),
        context="non-dynamo metric diag(Omega0^2/r^2, Omega0^2, K0^2)",
    ),
)

CLAIM_METRICS = tuple(dict.fromkeys(c.metric for c in CLAIMS))


def get_claim(claim_id: str) -> CurvatureClaim:
    for c in CLAIMS:
        if c.id == claim_id:
            return c
    raise KeyError(claim_id)


def claims_for(metric_name: str) -> tuple[CurvatureClaim, ...]:
    return tuple(c for c in CLAIMS if c.metric == metric_name)


def base_metric(name: str) -> Metric:
    return family_metric() if name == FAMILY else metric_catalog(name)


@lru_cache(maxsize=None)
def engine_tensor(name: str) -> RiemannTensor:
    """Symbolic Riemann tensor of a catalog metric or the conformal-polar family, cached."""
    return riemann(base_metric(name))


def sign_convention(samples) -> str:
    """Which overall sign of the engine value matches the printed value."""
    valid = [s for s in samples if s.paper_value is not None and s.computed_value is not None]
    if not valid:
        return "neither"
    stated = all(agree(s.paper_value, s.computed_value, DEFAULT_TOLERANCE) for s in valid)
    flipped = all(agree(s.paper_value, -s.computed_value, DEFAULT_TOLERANCE) for s in valid)
    return {(True, True): "both", (True, False): "stated", (False, True): "opposite"}.get(
        (stated, flipped), "neither"
    )


def _concretize(e: Expr, case: Realization) -> Expr:
    for name, (params, body) in case.items():
        e = substitute_function(e, name, params, parse_expr(body))
    return e


def _safe(e: Expr, binding) -> float | None:
    try:
        return evaluate(e, binding)
    except DomainError:
        return None


def compare_with_paper(
    rt: RiemannTensor,
    claims: Sequence[CurvatureClaim],
    metric: Metric | None = None,
    points: Sequence[Mapping[str, float]] | None = None,
    seed: int = 0,
    n_random: int = 10,
    overrides: Mapping[str, float] | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> list[ClaimRecord]:
    """Evaluate each printed claim against ``rt`` at sample points.

    The printed value is never adopted: the verdict compares it with the
    engine value, and is ``inconclusive`` when the finite-difference oracle
    disagrees with the engine or fewer than three points evaluate.
    """
    metric = base_metric(rt.metric_name) if metric is None else metric
    base = list(random_points(n_random, seed)) if points is None else [dict(p) for p in points]
    records = []
    for claim in claims:
        values = {**metric.params, **claim.params, **(overrides or {})}
        mapping = {k: Const(v) for k, v in values.items()}
        generic = rt.component(claim.component)
        printed = claim.paper_expr({k: len(v) for k, v in metric.functions.items()})
        samples = []
        fd_ok = True
        idx = _indices(rt, claim.component)
        for case in claim.cases:
            engine = subs(_concretize(generic, case), mapping)
            paper = subs(_concretize(printed, case), mapping)
            gfn = metric.concretize(case).resolved(values).compiled()
            for p in [*claim.anchors, *base]:
                computed = _safe(engine, p)
                try:
                    fd = float(fd_riemann(gfn, [p[c] for c in rt.chart.coords])[idx])
                except (DomainError, ValueError, ZeroDivisionError):
                    fd = None
                if computed is not None and (fd is None or not agree(fd, computed, FD_TOLERANCE)):
                    fd_ok = False
                point = {**p, **values}
                if len(claim.cases) > 1:
                    point["case"] = ", ".join(f"{k}={b}" for k, (_, b) in sorted(case.items()))
                samples.append(make_sample(point, _safe(paper, p), computed, fd))
        verdict = judge(samples, tolerance) if fd_ok else "inconclusive"
        note = "" if fd_ok else "finite-difference oracle disagrees with the symbolic engine"
        records.append(
            ClaimRecord(
                id=claim.id,
                equation=claim.equation,
                paper_text=claim.paper_text,
                verdict=verdict,
                tolerance=tolerance,
                samples=samples,
                computed_text=f"{claim.component} = {render(generic)}",
                context=claim.context,
                sign_convention=sign_convention(samples),
                note=note,
            )
        )
    return records


def _indices(rt: RiemannTensor, name: str) -> tuple[int, int, int, int]:
    for idx in itertools.product(range(3), repeat=4):
        if rt.name_of(idx) == name:
            return idx
    raise KeyError(name)


def run_claims(
    claims: Sequence[CurvatureClaim] = CLAIMS,
    seed: int = 0,
    n_random: int = 10,
    overrides: Mapping[str, float] | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> list[ClaimRecord]:
    """Group claims by metric and compare each group against its engine tensor."""
    out = []
    for name in dict.fromkeys(c.metric for c in claims):
        group = [c for c in claims if c.metric == name]
        out.extend(compare_with_paper(engine_tensor(name), group, seed=seed, n_random=n_random,
                                      overrides=overrides, tolerance=tolerance))
    order = {c.id: i for i, c in enumerate(claims)}
    return sorted(out, key=lambda r: order[r.id])
