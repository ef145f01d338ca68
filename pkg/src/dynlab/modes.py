"""Growth rates: Floquet extraction, the scalar mode system, weak torsion, and a closed form.

The mode system is solved over the reals.  Complex growth rates appear only
in the closed-form resistive formula.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from .symcore import Const, Expr, cos, differentiate, evaluate, exp, parse_expr, simplify, sin, subs
from .symcore.nodes import Sym

MARGINAL_TOL = 1e-10
CLASSES = ("fast", "slow", "marginal", "decaying", "oscillatory", "indeterminate", "inconsistent")
WEAK_TORSION_EPS = (1e-2, 1e-3)
DEFAULT_THETAS = (0.3, 0.7, math.pi / 2, 2.0)


class ModesError(ValueError):
    pass


@dataclass
class GrowthResult:
    gamma: float | complex | None
    classification: str
    residuals: dict[str, float] = field(default_factory=dict)
    provenance: str = ""
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.classification not in CLASSES:
            raise ModesError(f"bad classification {self.classification!r}")


# --------------------------------------------------------------------------
# Floquet growth and the conformal factor
# --------------------------------------------------------------------------


def floquet_growth(b_start: float, b_end: float, T: float) -> float:
    """gamma = ln(b_end / b_start) / T for a field that grows by b_end/b_start over one period."""
    if b_start == 0:
        raise ModesError("start amplitude is zero")
    if not T > 0:
        raise ModesError(f"period must be positive, got {T}")
    ratio = b_end / b_start
    if not ratio > 0:
        raise ModesError(f"amplitude ratio {ratio} is not positive")
    return math.log(ratio) / T


def conformal_factor_from_growth(gamma: float, T: float) -> float:
    """Omega = exp(gamma T)."""
    if not T > 0:
        raise ModesError(f"period must be positive, got {T}")
    return math.exp(gamma * T)


# --------------------------------------------------------------------------
# scalar mode system
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ModeParams:
    gamma: float | None = None
    omega0: float = 0.0
    tau0: float = 1e-3
    thetas: tuple[float, ...] = DEFAULT_THETAS
    Omega_form: str = "Omega0/r*exp(gamma*t)"
    B0_theta: float = 1.0
    B0_s: float = 1.0
    r: float = 1.0
    t: float = 0.0
    Omega0: float = 1.0

    def binding(self, **extra: float) -> dict[str, float]:
        b = {
            "omega0": self.omega0, "tau0": self.tau0, "B0_theta": self.B0_theta, "B0_s": self.B0_s,
            "r": self.r, "t": self.t, "Omega0": self.Omega0,
        }
        if self.gamma is not None:
            b["gamma"] = self.gamma
        b.update(extra)
        return b


_GAMMA = Sym("gamma")


def growth_ratio(omega_form: str) -> Expr:
    """Omega-dot / Omega for the given conformal factor."""
    om = parse_expr(omega_form)
    return simplify(differentiate(om, "t") / om)


def mode_system(omega_form: str = ModeParams.Omega_form) -> tuple[Expr, Expr, Expr]:
    """The three frame-component residuals with B = B0 exp(gamma t), symbolic in every parameter."""
    om = parse_expr(omega_form)
    rate = growth_ratio(omega_form)
    grow = exp(_GAMMA * Sym("t"))
    Bt, Bs = Sym("B0_theta") * grow, Sym("B0_s") * grow
    th, w0, tau = Sym("theta"), Sym("omega0"), Sym("tau0")
    pre = (om * Sym("r")) ** -1
    r1 = pre * ((rate - _GAMMA) * sin(th) - w0 * cos(th)) * Bt + tau**2 * Bs
    r2 = pre * ((rate - _GAMMA) * cos(th) - w0 * sin(th)) * Bt
    r3 = pre * Bt * tau**2 * sin(th) - _GAMMA * Bs
    return tuple(simplify(e) for e in (r1, r2, r3))


def scalar_mode_residuals(p: ModeParams) -> tuple[Expr, Expr, Expr]:
    """Mode residuals with the numeric fields of ``p`` substituted; theta (and gamma if unknown) stay free."""
    mapping = {k: Const(v) for k, v in p.binding().items()}
    return tuple(simplify(subs(e, mapping)) for e in mode_system(p.Omega_form))


def _coefficients(p: ModeParams, tau0: float) -> tuple[np.ndarray, np.ndarray]:
    """Affine form R = a + b gamma at t = p.t, one row per (equation, theta)."""
    system = mode_system(p.Omega_form)
    slopes = [differentiate(e, "gamma") for e in system]
    a, b = [], []
    for theta in p.thetas:
        bind = replace(p, gamma=None).binding(tau0=tau0, theta=theta, gamma=0.0)
        for e, d in zip(system, slopes):
            a.append(evaluate(e, bind))
            b.append(evaluate(d, bind))
    return np.array(a), np.array(b)


def _solve(a: np.ndarray, b: np.ndarray, tol: float = MARGINAL_TOL) -> tuple[float | None, float, str | None]:
    """Least-squares gamma for a + b gamma = 0; returns (gamma, max residual, failure class)."""
    scale = max(1.0, float(np.max(np.abs(b))), float(np.max(np.abs(a))))
    if float(np.max(np.abs(b))) <= tol:
        worst = float(np.max(np.abs(a)))
        return None, worst, "indeterminate" if worst <= tol * scale else "inconsistent"
    gamma = -float(b @ a) / float(b @ b) + 0.0
    worst = float(np.max(np.abs(a + b * gamma)))
    return gamma, worst, None if worst < tol * scale else "inconsistent"


def _classify_real(gamma: float, tol: float = MARGINAL_TOL) -> str:
    if abs(gamma) < tol:
        return "marginal"
    # ideal induction is already the zero-resistivity limit
    return "fast" if gamma > 0 else "decaying"


def weak_torsion_scaling(p: ModeParams, eps: Sequence[float] = WEAK_TORSION_EPS) -> dict:
    """Least-squares gamma at tau0 = eps and whether it shrinks like eps^2."""
    gammas = []
    for e in eps:
        a, b = _coefficients(p, e)
        g, _, _ = _solve(a, b, tol=0.0)
        gammas.append(0.0 if g is None else g)
    ratios = [abs(g) / e**2 for g, e in zip(gammas, eps)]
    c = max(ratios)
    if all(abs(g) < MARGINAL_TOL * e**2 for g, e in zip(gammas, eps)):
        order, passed = None, True
    else:
        order = math.log(abs(gammas[0]) / abs(gammas[-1])) / math.log(eps[0] / eps[-1])
        passed = abs(order - 2.0) < 0.05 and all(abs(g) <= 1.01 * c * e**2 for g, e in zip(gammas, eps))
    return {"eps": list(eps), "gamma": gammas, "c": c, "order": order, "passed": passed}


def marginal_mode_solve(p: ModeParams, weak_torsion: bool = True) -> GrowthResult:
    """Solve the mode system for a single real gamma valid at every sampled theta.

    With weak torsion the coefficients are taken at tau0 = eps and eps/2 and
    Richardson-extrapolated to eps -> 0 (the torsion enters squared), so
    tau0 = 0 itself is never evaluated.
    """
    eps = p.tau0
    if eps <= 0:
        raise ModesError("tau0 must be positive; weak torsion is taken as a limit")
    if weak_torsion:
        a1, b1 = _coefficients(p, eps)
        a2, b2 = _coefficients(p, eps / 2)
        a, b = (4 * a2 - a1) / 3, (4 * b2 - b1) / 3
        provenance = f"weak torsion: Richardson limit from tau0 = {eps:g}, {eps / 2:g}"
    else:
        a, b = _coefficients(p, eps)
        provenance = f"full system at tau0 = {eps:g}"
    gamma, worst, failure = _solve(a, b)
    labels = [f"R{k + 1}@theta={th:.6g}" for th in p.thetas for k in range(3)]
    g_eval = 0.0 if gamma is None else gamma
    residuals = {lab: float(v) for lab, v in zip(labels, a + b * g_eval)}
    details = {"max_residual": worst, "weak_torsion": weak_torsion, "thetas": list(p.thetas)}
    if weak_torsion:
        details["scaling"] = weak_torsion_scaling(p)
    if failure is not None:
        return GrowthResult(gamma, failure, residuals, provenance, details)
    details["omega_consistent"] = omega_consistency(p, gamma)
    return GrowthResult(gamma, _classify_real(gamma), residuals, provenance, details)


def omega_consistency(p: ModeParams, gamma: float, points=((0.5, 0.0), (1.0, 0.5), (2.0, 1.0))) -> bool:
    """Whether Omega_form equals (Omega0/r) exp(gamma t) at the solved gamma."""
    form = parse_expr(p.Omega_form)
    ref = parse_expr("Omega0/r*exp(gamma*t)")
    for r, t in points:
        bind = {"Omega0": p.Omega0, "gamma": gamma, "r": r, "t": t}
        if abs(evaluate(form, bind) - evaluate(ref, bind)) > 1e-12 * (1 + abs(evaluate(ref, bind))):
            return False
    return True


# --------------------------------------------------------------------------
# closed-form resistive growth rate
# --------------------------------------------------------------------------


def chicone_latushkin_gamma(eta: float, kappa_gauss: float) -> GrowthResult:
    """gamma = (1/2)[-eta (1 + k^2) + sqrt(eta^2 (1 - k^2)^2 - 4 k)] with k the Gaussian curvature."""
    k = kappa_gauss
    disc = eta**2 * (1 - k**2) ** 2 - 4 * k
    root = math.sqrt(disc) if disc >= 0 else cmath.sqrt(disc)
    gamma = 0.5 * (-eta * (1 + k**2) + root)
    details = {"discriminant": disc, "eta": eta, "kappa_gauss": k, "oscillatory": disc < 0}
    re = gamma.real
    if abs(re) < MARGINAL_TOL:
        cls = "oscillatory" if disc < 0 else "marginal"
    elif re < 0:
        cls = "decaying"
    else:
        limit = 0.5 * (-0.0 + cmath.sqrt(-4 * k)).real
        cls = "fast" if limit > MARGINAL_TOL else "slow"
    return GrowthResult(gamma, cls, {}, "closed form, square root taken in the complex plane", details)


def growth_polynomial_roots(eta: float, kappa_gauss: float) -> np.ndarray:
    """Roots of gamma^2 + eta(1+k^2) gamma + k(1 + eta^2 k); the closed form is the larger one."""
    k = kappa_gauss
    return np.roots([1.0, eta * (1 + k**2), k * (1 + eta**2 * k)])


def kappa_sweep(eta: float, kappas: Sequence[float]) -> list[tuple[float, float, float, str]]:
    """(kappa, Re gamma, Im gamma, class) rows for plotting gamma against curvature."""
    rows = []
    for k in kappas:
        res = chicone_latushkin_gamma(eta, k)
        g = complex(res.gamma)
        rows.append((float(k), g.real, g.imag, res.classification))
    return rows


# --------------------------------------------------------------------------
# moving frame
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FrenetFrame:
    """Time derivatives of (t, n, b) along the axis and of the poloidal vector e_theta."""

    RULES: Mapping[str, Mapping[str, str]] = field(
        default_factory=lambda: {
            "t": {"n": "-kappa*tau", "b": "kappa_prime"},
            "n": {"t": "kappa*tau"},
            "b": {"t": "-kappa_prime"},
            "e_theta": {"e_r": "-omega0", "t": "-sin(theta)*tau0^2"},
        }
    )

    def rules(self) -> dict[str, dict[str, Expr]]:
        return {v: {c: parse_expr(e) for c, e in comps.items()} for v, comps in self.RULES.items()}

    def derivative(self, vector: str, binding: Mapping[str, float]) -> dict[str, float]:
        return {c: evaluate(e, binding) for c, e in self.rules()[vector].items()}

    def generator(self, binding: Mapping[str, float]) -> np.ndarray:
        """Matrix M with d/dt (t, n, b) = M (t, n, b)."""
        names = ("t", "n", "b")
        M = np.zeros((3, 3))
        for i, v in enumerate(names):
            for c, val in self.derivative(v, binding).items():
                M[i, names.index(c)] = val
        return M
