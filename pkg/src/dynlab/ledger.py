"""Every registered printed claim, evaluated once and collected into one report."""
from __future__ import annotations

import math

from .geometry.claims import run_claims
from .geometry.flatness import CANDIDATES, RADII, engine_flatness_expr, family_metric, paper_flatness_expr, residual
from .geometry.oracle import fd_riemann
from .modes import ModeParams, chicone_latushkin_gamma, conformal_factor_from_growth, growth_polynomial_roots, marginal_mode_solve
from .report import ClaimRecord, ComparisonReport, judge, make_sample
from .symcore import differentiate, evaluate, numeric_derivative, parse_expr, render

FLAT_TOL = 1e-10


def _eq17_printed() -> ClaimRecord:
    """The printed flatness ODE applied to the conformal factors the text treats as flat."""
    cond = paper_flatness_expr()
    samples = []
    for label, text, params in (("Omega=r", "r", {}), ("Omega=Omega0/r", "Omega0/r", {"Omega0": 1.0})):
        for r in RADII:
            samples.append(make_sample({"r": r, "candidate": label, **params}, 0.0, residual(cond, text, params, r)))
    return ClaimRecord(
        id="Eq.17", equation=17,
        paper_text="r(Omega^2)'' + (Omega^2)' - (1/(2 Omega^2))(Omega^2)' r = 0 is the flatness condition, solved by Omega = r",
        verdict=judge(samples, FLAT_TOL), tolerance=FLAT_TOL, samples=samples,
        computed_text=f"printed ODE residual: {render(cond)}",
        context="conformal-polar family Omega(r)^2 (dr^2 + r^2 dtheta_R^2) + ds^2",
    )


def _eq17_engine() -> ClaimRecord:
    """The engine's own flatness condition on the power-law family, with a finite-difference check."""
    cond = engine_flatness_expr()
    base = family_metric()
    samples = []
    for label, text, params in CANDIDATES:
        if "C*r^a" not in text:
            continue
        g = base.concretize({"Omega": (("r",), text)}).resolved(params).compiled()
        for r in RADII:
            fd = float(fd_riemann(g, [r, 0.0, 0.0])[0, 1, 0, 1])
            value = residual(cond, text, params, r)
            samples.append(make_sample({"r": r, **params}, 0.0, value, fd))
    return ClaimRecord(
        id="Eq.17-engine", equation=17,
        paper_text="a flat conformal-polar metric exists beyond Omega = 1",
        verdict=judge(samples, FLAT_TOL), tolerance=FLAT_TOL, samples=samples,
        computed_text=f"R_rthrth = {render(cond)}",
        context="engine-derived condition, satisfied by Omega = C r^a for every (C, a) tested",
    )


def _eq39() -> ClaimRecord:
    expr = parse_expr("Omega0/r*r")
    d = differentiate(expr, "r")
    samples = []
    for r in RADII:
        b = {"r": r, "Omega0": 1.0}
        samples.append(make_sample(b, 0.0, evaluate(d, b), numeric_derivative(expr, "r", b)))
    return ClaimRecord(
        id="Eq.39", equation=39, paper_text="d_r(Omega r) = 0, yielding Omega = Omega0/r",
        verdict=judge(samples, 1e-12), tolerance=1e-12, samples=samples,
        computed_text=f"d_r(Omega r) = {render(d)}",
    )


def _eq10() -> ClaimRecord:
    samples = []
    for gamma, T in ((0.0, 1.0), (1.0, 1.0), (0.5, 2.0), (-0.3, 4.0)):
        samples.append(make_sample({"gamma": gamma, "T": T}, math.exp(gamma * T), conformal_factor_from_growth(gamma, T)))
    return ClaimRecord(
        id="Eq.10", equation=10, paper_text="Omega = exp(gamma T)",
        verdict=judge(samples, 1e-12), tolerance=1e-12, samples=samples,
        computed_text="conformal factor from the Floquet growth rate",
    )


def _eq58() -> ClaimRecord:
    base = ModeParams(omega0=0.0, tau0=1e-3, B0_theta=1.0, B0_s=1.0)
    samples = []
    for theta in base.thetas:
        res = marginal_mode_solve(ModeParams(omega0=0.0, tau0=1e-3, thetas=(theta,)))
        samples.append(make_sample({"theta": theta, "tau0": 1e-3, "omega0": 0.0, "B0_s": 1.0}, 0.0, res.gamma))
    full = marginal_mode_solve(base)
    verdict = judge(samples, 1e-10)
    if full.classification != "marginal":
        verdict = "discrepant"
    return ClaimRecord(
        id="Eq.58", equation=58, paper_text="gamma B_s = 0 under weak torsion: only a marginal dynamo (gamma = 0)",
        verdict=verdict, tolerance=1e-10, samples=samples,
        computed_text=f"gamma = {full.gamma}, classification {full.classification}",
        context=full.provenance,
        note="tau0^2 terms vanish in the Richardson limit; gamma(eps) ~ eps^2 check "
        + ("passed" if full.details["scaling"]["passed"] else "failed"),
    )


def _eq60() -> ClaimRecord:
    samples = []
    for eta in (1.0, 0.5, 2.0):
        res = chicone_latushkin_gamma(eta, 0.0)
        oracle = float(max(growth_polynomial_roots(eta, 0.0).real))
        samples.append(make_sample({"eta": eta, "kappa_gauss": 0.0}, 0.0, float(res.gamma), oracle))
    return ClaimRecord(
        id="Eq.60", equation=60, paper_text="gamma = (1/2)[-eta(1+k^2) + sqrt(eta^2(1-k^2)^2 - 4k)] vanishes at k = 0",
        verdict=judge(samples, 1e-12), tolerance=1e-12, samples=samples,
        computed_text="closed form; oracle = larger root of gamma^2 + eta(1+k^2) gamma + k(1 + eta^2 k)",
    )


def build_ledger(seed: int = 0, n_random: int = 10) -> ComparisonReport:
    records = run_claims(seed=seed, n_random=n_random)
    records += [_eq10(), _eq17_printed(), _eq17_engine(), _eq39(), _eq58(), _eq60()]
    return ComparisonReport(records).sorted()
