"""dynlab command line: curvature tables, theorem checks, growth rates and the claim ledger.

Usage:
    dynlab curvature --metric ricca-tube --param kappa=0.1 --compare-paper
    dynlab verify --theorem 2 --field-file data/bad_K.fld
    dynlab growth --eta 1 --kappa-gauss 0
    dynlab growth --eta 0.5 --kappa-sweep=-1:1:21 --format csv
    dynlab ledger --seed 7 --format csv

Exit status is 0 whenever a report is produced, whatever its verdicts;
1 for file, parse and domain errors; 2 for usage errors.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .geometry.claims import claims_for, compare_with_paper, engine_tensor
from .geometry.curvature import INDEPENDENT, riemann
from .geometry.metric import CATALOG_KEYS, DEFAULT_REALIZATIONS, GeometryError, load_metric_file, metric_catalog
from .grid import grid_points, parse_grid
from .induction import InductionError, check_theorem1, check_theorem2, load_field_file, theorem1_fixture, theorem2_fixture
from .ledger import build_ledger
from .modes import ModeParams, ModesError, chicone_latushkin_gamma, floquet_growth, kappa_sweep, marginal_mode_solve
from .report import claims_to_csv, envelope, rows_to_csv, to_json
from .symcore import SymcoreError

DATA_ERRORS = (OSError, ValueError, SymcoreError, GeometryError, InductionError, ModesError)


class CliError(Exception):
    pass


class UsageError(CliError):
    """A flag combination the command cannot run with; exits 2 like argparse."""


@dataclass
class RunConfig:
    command: str
    metric: str | None = None
    metric_file: str | None = None
    field_file: str | None = None
    params: dict[str, float] = field(default_factory=dict)
    grid: str | None = None
    seed: int = 0
    format: str = "json"
    out: str | None = None
    extra: dict = field(default_factory=dict)

    def report_config(self) -> dict:
        # the output path is where the report goes, not part of what it says
        d = asdict(self)
        d.pop("out")
        return d


# --------------------------------------------------------------------------
# argument types
# --------------------------------------------------------------------------


def _param(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep or not name.strip():
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"value for {name!r} is not a number: {value!r}") from None


def _sweep(text: str) -> tuple[float, float, int]:
    try:
        lo, hi, n = text.split(":")
        return float(lo), float(hi), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a:b:n, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dynlab", description="Conformal flux-tube curvature and dynamo verification lab.")
    p.add_argument("--version", action="version", version=f"dynlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--param", action="append", type=_param, default=[], metavar="NAME=VALUE")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--out", metavar="PATH")

    c = sub.add_parser("curvature", help="Riemann components over a grid, optionally against printed claims")
    src = c.add_mutually_exclusive_group()
    src.add_argument("--metric", choices=CATALOG_KEYS, default=None)
    src.add_argument("--metric-file", metavar="PATH")
    c.add_argument("--grid", metavar="r=a:b:n,...")
    c.add_argument("--compare-paper", action="store_true")
    c.add_argument("--n-random", type=int, default=10, help="random points per claim (default 10)")
    common(c)

    v = sub.add_parser("verify", help="theorem residual suites and the marginal mode solve")
    v.add_argument("--theorem", type=int, choices=(1, 2, 3), required=True)
    v.add_argument("--field-file", metavar="PATH")
    v.add_argument("--grid", metavar="r=a:b:n,...")
    common(v)

    g = sub.add_parser("growth", help="closed-form or Floquet growth rates")
    g.add_argument("--eta", type=float)
    g.add_argument("--kappa-gauss", type=float)
    g.add_argument("--kappa-sweep", type=_sweep, metavar="a:b:n", help="gamma(kappa) series at fixed --eta")
    g.add_argument("--floquet", type=float, nargs=3, metavar=("B0", "B1", "T"))
    common(g)

    led = sub.add_parser("ledger", help="every registered claim in one report")
    led.add_argument("--n-random", type=int, default=10)
    common(led)
    return p


def _config(args) -> RunConfig:
    extra = {}
    for key in ("compare_paper", "theorem", "eta", "kappa_gauss", "kappa_sweep", "floquet", "n_random"):
        val = getattr(args, key, None)
        if val is not None and val is not False:
            extra[key] = list(val) if isinstance(val, tuple) else val
    return RunConfig(
        command=args.command,
        metric=getattr(args, "metric", None),
        metric_file=getattr(args, "metric_file", None),
        field_file=getattr(args, "field_file", None),
        params=dict(args.param),
        grid=getattr(args, "grid", None),
        seed=args.seed,
        format=args.format,
        out=args.out,
        extra=extra,
    )


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_curvature(cfg: RunConfig) -> str:
    if cfg.metric_file:
        metric = load_metric_file(cfg.metric_file)
        rt = riemann(metric)
    else:
        metric = metric_catalog(cfg.metric or "flat-tube")
        rt = engine_tensor(metric.name)
    unknown = set(cfg.params) - set(metric.params)
    if unknown:
        raise CliError(f"unknown parameters for {metric.name!r}: {', '.join(sorted(unknown))}")
    values = {**metric.params, **cfg.params}
    realizations = {k: DEFAULT_REALIZATIONS[k] for k in metric.functions if k in DEFAULT_REALIZATIONS}
    missing = set(metric.functions) - set(realizations)
    if missing:
        raise CliError(f"opaque functions without a concrete body: {', '.join(sorted(missing))}")
    concrete = rt.concretize(realizations).resolved(values)
    leftover = set().union(*(concrete[idx].free_symbols() for idx in INDEPENDENT)) - set(metric.chart.coords)
    if leftover:
        raise CliError(f"unbound parameters in {metric.name!r}: {', '.join(sorted(leftover))}")
    fn = concrete.compiled()
    points = grid_points(parse_grid(cfg.grid) if cfg.grid else None)
    names = [rt.name_of(idx) for idx in INDEPENDENT]
    rows = []
    for p in points:
        R = fn(*(p[c] for c in metric.chart.coords))
        rows.append({"point": p, "values": {n: float(R[idx]) for n, idx in zip(names, INDEPENDENT)}})

    claims = []
    if cfg.extra.get("compare_paper"):
        claims = compare_with_paper(
            rt, claims_for(metric.name), metric=metric, seed=cfg.seed,
            n_random=cfg.extra.get("n_random", 10), overrides=cfg.params,
        )

    if cfg.format == "csv":
        if claims:
            return claims_to_csv(claims)
        cols = list(metric.chart.coords) + names
        return rows_to_csv(cols, ([r["point"][c] for c in metric.chart.coords] + [r["values"][n] for n in names] for r in rows))

    symbolic = {n: str(rt[idx]) for n, idx in zip(names, INDEPENDENT)}
    doc = envelope(
        cfg.report_config(),
        metric={
            "name": metric.name,
            "entries": [[str(e) for e in row] for row in metric.entries],
            "params": values,
            "realizations": {k: {"args": list(a), "body": b} for k, (a, b) in realizations.items()},
            "notes": list(metric.notes),
        },
        symbolic=symbolic,
        components=rows,
        max_abs={n: max(abs(r["values"][n]) for r in rows) for n in names},
        claims=claims,
    )
    return to_json(doc)


def _residual_csv(report) -> str:
    keys = list(report.residuals)
    coords = list(report.samples[0]["point"]) if report.samples else []
    return rows_to_csv(coords + keys, ([s["point"][c] for c in coords] + [s["values"][k] for k in keys] for s in report.samples))


def cmd_verify(cfg: RunConfig) -> str:
    theorem = cfg.extra["theorem"]
    points = grid_points(parse_grid(cfg.grid) if cfg.grid else None)
    if theorem in (1, 2):
        fields = load_field_file(cfg.field_file) if cfg.field_file else None
        check = check_theorem1 if theorem == 1 else check_theorem2
        if fields is not None and cfg.params:
            fields = fields.with_params(**cfg.params)
        elif cfg.params:
            fields = (theorem1_fixture() if theorem == 1 else theorem2_fixture()).with_params(**cfg.params)
        report = check(fields, points=points)
        if cfg.format == "csv":
            return _residual_csv(report)
        return to_json(envelope(cfg.report_config(), report=report))
    if cfg.field_file:
        raise UsageError("theorem 3 takes --param overrides, not a field file")
    allowed = {"omega0", "tau0", "B0_theta", "B0_s", "r", "t", "Omega0"}
    unknown = set(cfg.params) - allowed
    if unknown:
        raise CliError(f"unknown mode parameters {sorted(unknown)}; allowed {sorted(allowed)}")
    result = marginal_mode_solve(ModeParams(**cfg.params))
    if cfg.format == "csv":
        return rows_to_csv(("residual", "value"), sorted(result.residuals.items()))
    return to_json(envelope(cfg.report_config(), result=result))


def cmd_growth(cfg: RunConfig) -> str:
    x = cfg.extra
    if "floquet" in x:
        b0, b1, T = x["floquet"]
        gamma = floquet_growth(b0, b1, T)
        if cfg.format == "csv":
            return rows_to_csv(("b_start", "b_end", "T", "gamma"), [(b0, b1, T, gamma)])
        return to_json(envelope(cfg.report_config(), result={"gamma": gamma, "method": "floquet"}))
    if "eta" not in x:
        raise UsageError("growth needs --eta with --kappa-gauss or --kappa-sweep, or --floquet B0 B1 T")
    if "kappa_sweep" in x:
        lo, hi, n = x["kappa_sweep"]
        rows = kappa_sweep(x["eta"], np.linspace(lo, hi, n))
        if cfg.format == "csv":
            return rows_to_csv(("kappa_gauss", "gamma_re", "gamma_im", "classification"), rows)
        series = [{"kappa_gauss": k, "gamma": {"re": re, "im": im}, "classification": c} for k, re, im, c in rows]
        return to_json(envelope(cfg.report_config(), series=series))
    if "kappa_gauss" not in x:
        raise UsageError("--eta needs --kappa-gauss or --kappa-sweep")
    result = chicone_latushkin_gamma(x["eta"], x["kappa_gauss"])
    if cfg.format == "csv":
        g = complex(result.gamma)
        return rows_to_csv(("eta", "kappa_gauss", "gamma_re", "gamma_im", "classification"),
                           [(x["eta"], x["kappa_gauss"], g.real, g.imag, result.classification)])
    return to_json(envelope(cfg.report_config(), result=result))


def cmd_ledger(cfg: RunConfig) -> str:
    report = build_ledger(seed=cfg.seed, n_random=cfg.extra.get("n_random", 10))
    if cfg.format == "csv":
        return claims_to_csv(report.claims)
    counts = {}
    for c in report.claims:
        counts[c.verdict] = counts.get(c.verdict, 0) + 1
    return to_json(envelope(cfg.report_config(), summary=counts, claims=report.claims))


COMMANDS = {"curvature": cmd_curvature, "verify": cmd_verify, "growth": cmd_growth, "ledger": cmd_ledger}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = _config(args)
    try:
        text = COMMANDS[cfg.command](cfg)
        if cfg.out:
            with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"dynlab {cfg.command}: error: {exc}", file=sys.stderr)
        return 2
    except (CliError, *DATA_ERRORS) as exc:
        print(f"dynlab {cfg.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
