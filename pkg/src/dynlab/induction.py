"""Ideal induction terms in tube coordinates and the theorem checkers built on them.

Fields have no radial component: B = (0, B_theta, B_s), v = (0, v_theta, v_s).
All formulas below are implemented exactly as printed, including the
explicit 1/tau0 factors, so tau0 = 0 is rejected rather than limited.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Sequence

from .geometry.metric import GeometryError, Metric, metric_catalog
from .grid import grid_points
from .symcore import (
    ZERO,
    Const,
    DomainError,
    Expr,
    as_expr,
    differentiate,
    evaluate,
    ln,
    parse_expr,
    power,
    render,
    simplify,
    subs,
)
from .symcore.nodes import Sym

TAU0 = Sym("tau0")
R = Sym("r")
FIELD_KEYS = ("B_theta", "B_s", "v_theta", "v_s", "Omega", "K")
SYMBOLIC_ZERO_TOL = 1e-12


class InductionError(ValueError):
    pass


@dataclass(frozen=True)
class TubeFieldSet:
    """Magnetic and flow components along (e_theta, t), conformal factor and axial profile."""

    B_theta: Expr = ZERO
    B_s: Expr = ZERO
    v_theta: Expr = ZERO
    v_s: Expr = ZERO
    Omega: Expr = Const(1)
    K: Expr = Const(1)
    params: Mapping[str, float] = field(default_factory=lambda: {"tau0": 0.1})
    name: str = "fields"

    def __post_init__(self):
        for key in FIELD_KEYS:
            value = getattr(self, key)
            if not isinstance(value, Expr):
                value = parse_expr(value) if isinstance(value, str) else as_expr(value)
                object.__setattr__(self, key, value)
        object.__setattr__(self, "params", dict(self.params))

    # confinement: no radial components
    B_r = ZERO
    v_r = ZERO

    @property
    def tau0(self) -> float:
        if "tau0" not in self.params:
            raise InductionError("field set has no tau0 parameter")
        return float(self.params["tau0"])

    def require_torsion(self) -> None:
        if self.tau0 == 0.0:
            raise InductionError("tau0 = 0: the printed formulas carry an explicit 1/tau0")

    def with_params(self, **params: float) -> "TubeFieldSet":
        return replace(self, params={**self.params, **params})

    def magnetic_is_zero(self) -> bool:
        return self.B_theta.is_zero() and self.B_s.is_zero()


@dataclass(frozen=True)
class FrameVector:
    """Components along the tube frame (e_r, e_theta, t)."""

    e_r: Expr
    e_theta: Expr
    t: Expr

    LABELS = ("e_r", "e_theta", "t")

    def components(self) -> tuple[Expr, Expr, Expr]:
        return (self.e_r, self.e_theta, self.t)

    def map(self, fn) -> "FrameVector":
        return FrameVector(*(fn(c) for c in self.components()))

    def as_dict(self) -> dict[str, Expr]:
        return dict(zip(self.LABELS, self.components()))


def _ds(e: Expr) -> Expr:
    return differentiate(e, "s")


def stretching_term(f: TubeFieldSet) -> FrameVector:
    """(B . grad) v on the conformal tube metric, with A and C as helper terms."""
    f.require_torsion()
    inv_tau = power(TAU0, -1)
    Om = f.Omega
    dlog = _ds(Om) / Om
    A = f.B_theta * inv_tau * f.v_theta - f.B_s * f.v_s
    C = -inv_tau * _ds(f.v_theta) + R * f.v_s * dlog
    e_r = dlog * A
    e_theta = f.B_theta / (Om * R) * C + (f.B_s / Om) * (inv_tau * dlog * f.v_s + _ds(f.v_theta))
    t = -((f.B_theta / Om) * (f.v_theta * dlog) + (f.B_s / Om) * inv_tau * f.v_theta * dlog)
    return FrameVector(e_r, e_theta, t)


def solenoidal_residual(f: TubeFieldSet, variant: str = "conformal") -> Expr:
    """Divergence of B in the conformal or the piecewise (K-profile) tube metric."""
    if variant == "conformal":
        f.require_torsion()
        inv_tau = power(TAU0, -1)
        return (f.B_theta * inv_tau - R * f.B_s) * _ds(ln(f.Omega)) + f.Omega**2 * inv_tau * _ds(f.B_theta)
    if variant == "piecewise":
        return (f.B_theta - TAU0 * f.B_s) * _ds(ln(f.K * f.Omega)) - _ds(f.B_theta)
    raise InductionError(f"unknown solenoidal variant {variant!r}; use 'conformal' or 'piecewise'")


def advection_constraint_residual(f: TubeFieldSet, include_time: bool = False, metric: Metric | None = None) -> Expr:
    """(v . grad) Omega with physical flow components, optionally d_t Omega + (1/3)(v . grad) Omega."""
    metric = metric_catalog("flat-tube") if metric is None else metric
    coords = metric.chart.coords
    flow = (f.v_r, f.v_theta, f.v_s)
    terms = []
    for i, v in enumerate(flow):
        if v.is_zero():
            continue
        scale = power(metric.entries[i][i], Const(Fraction(-1, 2)))
        terms.append(v * scale * differentiate(f.Omega, coords[i]))
    spatial = sum(terms, ZERO)
    if include_time:
        return simplify(differentiate(f.Omega, "t") + Const(Fraction(1, 3)) * spatial)
    return simplify(spatial)


def conformal_transform_field(B: FrameVector, omega) -> FrameVector:
    """Covariant components scale by the conformal factor: B'_i = Omega B_i."""
    omega = as_expr(omega)
    return B.map(lambda c: c * omega)


# --------------------------------------------------------------------------
# residual reports
# --------------------------------------------------------------------------


@dataclass
class ResidualReport:
    name: str
    residuals: dict[str, str]
    samples: list[dict]
    max_abs: dict[str, float]
    max_residual: float
    tolerance: float
    passed: bool
    verdict: str
    hypotheses: dict[str, float] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)


def _binding(f: TubeFieldSet, point: Mapping[str, float]) -> dict[str, float]:
    return {"t": 0.0, **f.params, **point}


def _evaluate_residuals(
    exprs: Mapping[str, Expr], f: TubeFieldSet, points: Sequence[Mapping[str, float]]
) -> tuple[list[dict], dict[str, float]]:
    samples, worst = [], {k: 0.0 for k in exprs}
    for p in points:
        b = _binding(f, p)
        row = {}
        for k, e in exprs.items():
            try:
                v = evaluate(e, b)
            except DomainError:
                v = math.nan
            row[k] = v
            worst[k] = max(worst[k], abs(v)) if math.isfinite(v) else math.inf
        samples.append({"point": dict(p), "values": row})
    return samples, worst


def _report(name, exprs, hyps, f, points, tolerance, notes, classify) -> ResidualReport:
    points = grid_points() if points is None else list(points)
    samples, worst = _evaluate_residuals(exprs, f, points)
    _, hyp_worst = _evaluate_residuals(hyps, f, points)
    top = max(worst.values(), default=0.0)
    passed = top < tolerance
    return ResidualReport(
        name=name,
        residuals={k: render(e) for k, e in exprs.items()},
        samples=samples,
        max_abs=worst,
        max_residual=top,
        tolerance=tolerance,
        passed=passed,
        verdict=classify(passed),
        hypotheses=hyp_worst,
        notes=list(notes),
    )


def theorem1_fixture() -> TubeFieldSet:
    """Axisymmetric fields on the conformal tube: nothing depends on s."""
    return TubeFieldSet(
        B_theta="r*exp(-r^2)", B_s="1 - r^2/8", v_theta="r", v_s="1/2",
        Omega="1 + r^2/2", params={"tau0": 0.1}, name="theorem1-axisymmetric",
    )


def theorem1_counter_fixture() -> TubeFieldSet:
    return replace(theorem1_fixture(), Omega=parse_expr("exp(s)"), name="theorem1-omega-exp-s")


def check_theorem1(f: TubeFieldSet | None = None, points=None, tolerance: float = SYMBOLIC_ZERO_TOL) -> ResidualReport:
    """Stretching term and conformal solenoidal residual under d_s Omega = 0, d_s B_theta = 0."""
    f = theorem1_fixture() if f is None else f
    st = stretching_term(f)
    exprs = {f"Eq.25 {k}": simplify(e) for k, e in st.as_dict().items()}
    exprs["Eq.28"] = simplify(solenoidal_residual(f, "conformal"))
    hyps = {
        "Eq.29 d_s Omega/Omega": simplify(_ds(f.Omega) / f.Omega),
        "Eq.30 d_s B_theta": simplify(_ds(f.B_theta)),
        "d_s v_theta": simplify(_ds(f.v_theta)),
    }
    notes = [
        "full annihilation of the stretching term also needs d_s v_theta = 0, "
        "assumed here in addition to d_s Omega = 0 and d_s B_theta = 0",
    ]
    vacuous = f.magnetic_is_zero()

    def classify(passed):
        if vacuous:
            return "vacuous"
        return "pass" if passed else "violation"

    return _report(f"theorem1:{f.name}", exprs, hyps, f, points, tolerance, notes, classify)


def theorem2_fixture() -> TubeFieldSet:
    """Axisymmetric fields on the piecewise tube with Omega = Omega0/r and constant K."""
    return TubeFieldSet(
        B_theta="r*exp(-r^2)", B_s="1 - r^2/8", v_theta="0", v_s="1/2",
        Omega="Omega0/r", K="K0", params={"tau0": 0.1, "Omega0": 1.0, "K0": 1.0},
        name="theorem2-constant-K",
    )


def theorem2_counter_fixture() -> TubeFieldSet:
    return replace(theorem2_fixture(), K=parse_expr("1 - 0.1*r*cos(theta_R)"), name="theorem2-K-r-dependent")


def theorem2_residuals(f: TubeFieldSet) -> dict[str, Expr]:
    """Printed stretching relations on the piecewise metric as LHS - RHS, plus the solenoidal one."""
    f.require_torsion()
    inv_tau = power(TAU0, -1)
    Om, K, Bt, Bs, vt, vs = f.Omega, f.K, f.B_theta, f.B_s, f.v_theta, f.v_s
    dr = lambda e: differentiate(e, "r")  # noqa: E731
    e32 = dr(R * Om) / Om**2 * Bt * vt + Bs / (Om * K) * vs * dr(K)
    e33 = Bt / (Om * K) * _ds(Om) * vs + Bs / K * _ds(Bt) - Bs / (R * Om) * inv_tau * _ds(K)
    e34 = Bt / Om * (vt / K) + Bs / K * (dr(K) - inv_tau * vs / Om * _ds(K))
    return {
        "Eq.32": simplify(e32),
        "Eq.33": simplify(e33),
        "Eq.34": simplify(e34),
        "Eq.35": simplify(solenoidal_residual(f, "piecewise")),
    }


def check_theorem2(f: TubeFieldSet | None = None, points=None, tolerance: float = SYMBOLIC_ZERO_TOL) -> ResidualReport:
    """Stretching and solenoidal relations on the piecewise metric under d_s B_theta = 0."""
    f = theorem2_fixture() if f is None else f
    exprs = theorem2_residuals(f)
    dK = {c: simplify(differentiate(f.K, c)) for c in ("r", "s")}
    hyps = {
        "Eq.30 d_s B_theta": simplify(_ds(f.B_theta)),
        "Eq.36 d_s K": dK["s"],
        "Eq.37 d_r K": dK["r"],
    }
    k_dependence = [c for c, d in dK.items() if not d.is_zero()]
    notes = []
    if k_dependence:
        notes.append(f"K depends on {', '.join(k_dependence)}: {render(f.K)}")
    vacuous = all(e.is_zero() for e in (f.B_theta, f.B_s, f.v_theta, f.v_s))

    def classify(passed):
        if vacuous:
            return "vacuous"
        if not passed:
            return "violation"
        return "K-dependent solution" if k_dependence else "non-stretched tube"

    return _report(f"theorem2:{f.name}", exprs, hyps, f, points, tolerance, notes, classify)


def corollary_metric(omega0: float = 1.0, k0: float = 1.0) -> Metric:
    """Non-dynamo metric diag(Omega0^2/r^2, Omega0^2, K0^2) after checking d_r(Omega r) = 0."""
    if not (omega0 > 0 and k0 > 0):
        raise InductionError(f"need Omega0 > 0 and K0 > 0, got Omega0={omega0}, K0={k0}")
    omega = parse_expr("Omega0/r")
    if not simplify(differentiate(omega * R, "r")).is_zero():
        raise GeometryError("d_r(Omega r) does not vanish for Omega = Omega0/r")
    return metric_catalog("non-dynamo-tube", Omega0=float(omega0), K0=float(k0))


# --------------------------------------------------------------------------
# field definition files
# --------------------------------------------------------------------------

_PARAM = re.compile(r"^param\s+([A-Za-z][A-Za-z0-9_]*)\s*=\s*(.+)$")
_ASSIGN = re.compile(r"^([A-Za-z][A-Za-z0-9_]*)\s*=\s*(.+)$")


def parse_field_text(text: str, name: str = "field-file") -> TubeFieldSet:
    """Parse ``B_theta = ...``, ``Omega = ...``, ``param tau0 = ...`` lines; ``#`` starts a comment."""
    values: dict[str, Expr] = {}
    params: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _PARAM.match(line)
        if m:
            try:
                params[m.group(1)] = float(evaluate(parse_expr(m.group(2)), {}))
            except Exception as exc:
                raise InductionError(f"line {lineno}: bad parameter value: {exc}") from exc
            continue
        m = _ASSIGN.match(line)
        if not m:
            raise InductionError(f"line {lineno}: cannot parse {raw.strip()!r}")
        key, rhs = m.groups()
        if key == "name":
            name = rhs.strip()
            continue
        if key not in FIELD_KEYS:
            raise InductionError(f"line {lineno}: unknown key {key!r}; expected one of {', '.join(FIELD_KEYS)}")
        try:
            values[key] = parse_expr(rhs)
        except ValueError as exc:
            raise InductionError(f"line {lineno}: {exc}") from exc
    params.setdefault("tau0", 0.1)
    return TubeFieldSet(**values, params=params, name=name)


def load_field_file(path) -> TubeFieldSet:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    stem = str(path).replace("\\", "/").rsplit("/", 1)[-1]
    return parse_field_text(text, name=stem)
