"""Flatness of the conformal-polar family Omega(r)^2 (dr^2 + r^2 dtheta^2) + ds^2."""
from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..symcore import Expr, Fn, Sym, evaluate, parse_expr, simplify, substitute_function
from .curvature import riemann
from .metric import Metric, conformal_rescale, metric_catalog

FAMILY = "conformal-polar"

# The ODE as printed for R_{r theta r theta} = 0, with P = Omega^2.
PAPER_FLATNESS_TEXT = "r*(Omega^2)'' + (Omega^2)' - (1/(2*Omega^2))*(Omega^2)'*r = 0"
_PAPER_FLATNESS = "r*diff(P, r, 2) + diff(P, r) - 1/(2*P)*diff(P, r)*r"

CANDIDATES: tuple[tuple[str, str, dict], ...] = (
    ("Omega=1", "1", {}),
    ("Omega=r", "r", {}),
    ("Omega=Omega0/r", "Omega0/r", {"Omega0": 1.0}),
    ("Omega=C*r^a (C=1, a=1)", "C*r^a", {"C": 1.0, "a": 1.0}),
    ("Omega=C*r^a (C=2, a=-1)", "C*r^a", {"C": 2.0, "a": -1.0}),
    ("Omega=C*r^a (C=0.5, a=0.3)", "C*r^a", {"C": 0.5, "a": 0.3}),
)

RADII = (0.5, 1.0, 2.0)


def family_metric() -> Metric:
    """Omega(r)^2 [dr^2 + r^2 dtheta_R^2] + ds^2 with opaque Omega(r)."""
    m = conformal_rescale(metric_catalog("flat-tube"), Fn("Omega", (Sym("r"),)), block=(0, 1))
    return replace(m, name=FAMILY, functions={"Omega": ("r",)})


def paper_flatness_expr() -> Expr:
    omega = Fn("Omega", (Sym("r"),))
    return parse_expr(_PAPER_FLATNESS, bindings={"P": omega**2})


def engine_flatness_expr() -> Expr:
    return simplify(riemann(family_metric())[0, 1, 0, 1])


@dataclass
class CandidateResidual:
    label: str
    omega: str
    params: dict[str, float]
    samples: list[dict] = field(default_factory=list)
    engine_satisfied: bool = False
    paper_satisfied: bool = False


@dataclass
class FlatnessReport:
    family: str
    engine_condition: Expr
    paper_condition: Expr
    paper_text: str
    tolerance: float
    candidates: list[CandidateResidual]

    def candidate(self, label: str) -> CandidateResidual:
        for c in self.candidates:
            if c.label == label:
                return c
        raise KeyError(label)


def residual(condition: Expr, omega_text: str, params: dict[str, float], r: float) -> float:
    body = parse_expr(omega_text)
    concrete = substitute_function(condition, "Omega", ("r",), body)
    return evaluate(concrete, {**params, "r": r})


def flatness_condition(
    family: str = FAMILY,
    candidates=CANDIDATES,
    radii=RADII,
    tolerance: float = 1e-10,
) -> FlatnessReport:
    """Engine-derived flatness condition next to the printed ODE, with candidate residuals."""
    if family != FAMILY:
        raise ValueError(f"only the {FAMILY!r} family is supported")
    engine = engine_flatness_expr()
    paper = paper_flatness_expr()
    out = []
    for label, text, params in candidates:
        cand = CandidateResidual(label, text, dict(params))
        for r in radii:
            e_res = residual(engine, text, params, r)
            p_res = residual(paper, text, params, r)
            cand.samples.append({"point": {"r": r, **params}, "engine_residual": e_res, "paper_residual": p_res})
        cand.engine_satisfied = all(abs(s["engine_residual"]) < tolerance for s in cand.samples)
        cand.paper_satisfied = all(abs(s["paper_residual"]) < tolerance for s in cand.samples)
        out.append(cand)
    return FlatnessReport(FAMILY, engine, paper, PAPER_FLATNESS_TEXT, tolerance, out)
