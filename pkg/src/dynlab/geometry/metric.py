"""Coordinate chart, metric container, the tube metric catalog and file loading."""
from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from ..grid import DEFAULT_GRID, grid_points
from ..symcore import (
    ONE,
    ZERO,
    Const,
    DomainError,
    Expr,
    Fn,
    Sym,
    as_expr,
    evaluate,
    lambdify,
    mul,
    parse_expr,
    power,
    simplify,
    subs,
    substitute_function,
)


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class Chart:
    """Ordered coordinates; index 0 = r, 1 = theta_R, 2 = s."""

    coords: tuple[str, ...] = ("r", "theta_R", "s")
    labels: tuple[str, ...] = ("r", "th", "s")

    def __post_init__(self):
        if len(set(self.coords)) != len(self.coords):
            raise GeometryError(f"coordinate names must be unique: {self.coords}")
        if len(self.coords) != 3 or len(self.labels) != 3:
            raise GeometryError("only three-dimensional charts are supported")

    def index(self, key) -> int:
        if isinstance(key, (int, np.integer)):
            if not 0 <= key < 3:
                raise IndexError(f"coordinate index {key} out of range")
            return int(key)
        aliases = {"theta": 1, "θ": 1}
        for table in (self.coords, self.labels):
            if key in table:
                return table.index(key)
        if key in aliases:
            return aliases[key]
        raise KeyError(f"unknown coordinate {key!r}")


TUBE_CHART = Chart()


def _as_matrix(entries) -> tuple[tuple[Expr, ...], ...]:
    rows = tuple(tuple(as_expr(x) for x in row) for row in entries)
    if len(rows) != 3 or any(len(row) != 3 for row in rows):
        raise GeometryError("metric must be a 3x3 array")
    return rows


@dataclass(frozen=True)
class Metric:
    name: str
    entries: tuple[tuple[Expr, ...], ...]
    params: Mapping[str, float] = field(default_factory=dict)
    functions: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    chart: Chart = TUBE_CHART
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        rows = _as_matrix(self.entries)
        for i in range(3):
            for j in range(i + 1, 3):
                if rows[i][j] != rows[j][i]:
                    raise GeometryError(
                        f"metric {self.name!r} is not symmetric at ({i}, {j})"
                    )
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "params", dict(self.params))
        object.__setattr__(self, "functions", {k: tuple(v) for k, v in self.functions.items()})

    @classmethod
    def diagonal(cls, name, diag: Sequence, **kw) -> "Metric":
        d = [as_expr(x) for x in diag]
        entries = [[d[i] if i == j else ZERO for j in range(3)] for i in range(3)]
        return cls(name, entries, **kw)

    @classmethod
    def from_components(cls, name, components: Mapping[tuple[int, int], object], **kw) -> "Metric":
        """Build from an upper- or lower-triangle mapping; missing entries are 0."""
        entries = [[ZERO] * 3 for _ in range(3)]
        for (i, j), value in components.items():
            entries[i][j] = entries[j][i] = as_expr(value)
        return cls(name, entries, **kw)

    def __getitem__(self, ij) -> Expr:
        i, j = ij
        return self.entries[self.chart.index(i)][self.chart.index(j)]

    @property
    def is_diagonal(self) -> bool:
        return all(self.entries[i][j].is_zero() for i in range(3) for j in range(3) if i != j)

    def diag(self) -> tuple[Expr, Expr, Expr]:
        return tuple(self.entries[i][i] for i in range(3))

    def with_note(self, note: str) -> "Metric":
        return replace(self, notes=self.notes + (note,))

    def map_entries(self, fn, **changes) -> "Metric":
        entries = [[fn(self.entries[i][j]) for j in range(3)] for i in range(3)]
        return replace(self, entries=entries, **changes)

    def resolved(self, overrides: Mapping[str, float] | None = None) -> "Metric":
        """Substitute parameter values (defaults, then overrides) into every entry."""
        values = {**self.params, **(overrides or {})}
        mapping = {k: Const(v) for k, v in values.items()}
        return self.map_entries(lambda e: subs(e, mapping), params={})

    def concretize(self, realizations: Mapping[str, tuple[Sequence[str], object]]) -> "Metric":
        """Replace opaque functions by concrete bodies ``{name: (params, body)}``."""
        out = self
        for fname, (params, body) in realizations.items():
            if isinstance(body, str):
                body = parse_expr(body)
            out = out.map_entries(
                lambda e, f=fname, p=tuple(params), b=body: substitute_function(e, f, p, b),
                functions={k: v for k, v in out.functions.items() if k != fname},
            )
        return out

    def free_parameters(self) -> frozenset[str]:
        syms = frozenset().union(*(e.free_symbols() for row in self.entries for e in row))
        return syms - set(self.chart.coords)

    def binding(self, point: Mapping[str, float], overrides: Mapping[str, float] | None = None) -> dict[str, float]:
        b = dict(self.params)
        if overrides:
            b.update(overrides)
        b.update(point)
        return b

    def numeric(self, point: Mapping[str, float], overrides: Mapping[str, float] | None = None) -> np.ndarray:
        b = self.binding(point, overrides)
        return np.array([[evaluate(self.entries[i][j], b) for j in range(3)] for i in range(3)])

    def compiled(self):
        """Callable ``f(r, theta_R, s) -> 3x3 array`` for a fully resolved metric."""
        extra = self.free_parameters()
        if extra:
            raise GeometryError(f"metric {self.name!r} still has free parameters {sorted(extra)}")
        if any(e.functions() for row in self.entries for e in row):
            raise GeometryError(f"metric {self.name!r} has opaque functions; concretize first")
        fns = [[lambdify(self.entries[i][j], self.chart.coords) for j in range(3)] for i in range(3)]

        def g(*x):
            return np.array([[fns[i][j](*x) for j in range(3)] for i in range(3)])

        return g

    def check_positive_definite(self, points=None, overrides=None) -> tuple[bool, float]:
        """Smallest eigenvalue over the sample points; True when all are positive."""
        points = grid_points(DEFAULT_GRID) if points is None else points
        lowest = np.inf
        for p in points:
            lowest = min(lowest, float(np.linalg.eigvalsh(self.numeric(p, overrides)).min()))
        return bool(lowest > 0), lowest


# --------------------------------------------------------------------------
# catalog
# --------------------------------------------------------------------------

R, TH, S = Sym("r"), Sym("theta_R"), Sym("s")

# Concrete stand-ins for the opaque Omega(r, s) and K(r, s) used when a
# numeric value is needed; both stay positive on r in [0.1, 2].
DEFAULT_REALIZATIONS: dict[str, tuple[tuple[str, ...], str]] = {
    "Omega": (("r", "s"), "1 + r^2/4 + sin(s)/5"),
    "K": (("r", "s"), "1 + r*cos(s)/5 + r^2/10"),
}


def _omega():
    return Fn("Omega", (R, S))


def _k():
    return Fn("K", (R, S))


def ricca_factor() -> Expr:
    """K = 1 - kappa r cos(theta) with theta = theta_R - tau0 s (constant torsion)."""
    theta = TH - Sym("tau0") * S
    return parse_expr("1 - kappa*r*cos(theta)", bindings={"theta": theta})


def _catalog() -> dict:
    omega0, k0 = Sym("Omega0"), Sym("K0")
    return {
        "flat-tube": lambda: Metric.diagonal("flat-tube", [ONE, R**2, ONE]),
        "conformal-tube": lambda: Metric.diagonal(
            "conformal-tube",
            [_omega() ** 2, _omega() ** 2 * R**2, _omega() ** 2],
            functions={"Omega": ("r", "s")},
        ),
        "piecewise-tube": lambda: Metric.diagonal(
            "piecewise-tube",
            [_omega() ** 2, _omega() ** 2 * R**2, _k() ** 2],
            functions={"Omega": ("r", "s"), "K": ("r", "s")},
        ),
        "non-dynamo-tube": lambda: Metric.diagonal(
            "non-dynamo-tube",
            [omega0**2 / R**2, omega0**2, k0**2],
            params={"Omega0": 1.0, "K0": 1.0},
        ),
        "fast-dynamo-tube": lambda: Metric.diagonal("fast-dynamo-tube", [R**2, R**4, ONE]),
        "ricca-tube": lambda: Metric.diagonal(
            "ricca-tube",
            [ONE, R**2, ricca_factor() ** 2],
            params={"kappa": 0.1, "tau0": 0.1},
        ),
    }


CATALOG_KEYS = tuple(_catalog())


def metric_catalog(name: str, **params: float) -> Metric:
    """Return a catalog metric; keyword arguments override parameter defaults."""
    builders = _catalog()
    if name not in builders:
        raise GeometryError(f"unknown catalog metric {name!r}; choose from {', '.join(builders)}")
    metric = builders[name]()
    if params:
        unknown = set(params) - set(metric.params)
        if unknown:
            raise GeometryError(f"unknown parameters for {name!r}: {sorted(unknown)}")
        metric = replace(metric, params={**metric.params, **params})
    return metric


def conformal_rescale(
    g: Metric,
    omega,
    compare_to: Metric | None = None,
    points=None,
    block: Sequence[int] | None = None,
) -> Metric:
    """Multiply every entry by ``omega**2``.

    ``block`` restricts the rescaling to a coordinate sub-block, e.g.
    ``(0, 1)`` for the (r, theta_R) plane.  Non-positive values of ``omega``
    at the sample points, and entries that differ from ``compare_to``, are
    recorded in ``notes`` rather than raised.
    """
    if isinstance(omega, str):
        omega = parse_expr(omega, functions={k: len(v) for k, v in g.functions.items()})
    omega = as_expr(omega)
    factor = power(omega, 2)
    idx = set(range(3) if block is None else (g.chart.index(b) for b in block))
    entries = [
        [simplify(mul(factor, g.entries[i][j])) if i in idx and j in idx else g.entries[i][j] for j in range(3)]
        for i in range(3)
    ]
    label = "" if block is None else "[" + ",".join(g.chart.labels[i] for i in sorted(idx)) + "]"
    out = replace(g, entries=entries, name=f"{g.name}*({omega})^2{label}")
    notes = list(out.notes)
    if not omega.functions():
        unbound = omega.free_symbols() - set(g.chart.coords) - set(g.params)
        if not unbound:
            bad = []
            for p in grid_points() if points is None else points:
                try:
                    val = evaluate(omega, g.binding(p))
                except DomainError:
                    val = float("nan")
                if not val > 0:
                    bad.append(p)
            if bad:
                notes.append(f"domain warning: conformal factor {omega} is non-positive at {len(bad)} sample point(s), first {bad[0]}")
    if compare_to is not None:
        for i in range(3):
            for j in range(i, 3):
                mine = out.entries[i][j]
                ref = compare_to.entries[i][j]
                if simplify(mine - ref) != ZERO:
                    lab = g.chart.labels
                    notes.append(
                        f"comparison: g_{lab[i]}{lab[j]} = {mine} differs from {compare_to.name} value {ref}"
                    )
    return replace(out, notes=tuple(notes))


# --------------------------------------------------------------------------
# metric definition files
# --------------------------------------------------------------------------

_KEY = re.compile(r"^g_(r|th|s)(r|th|s)$")
_FUNC = re.compile(r"^func\s+([A-Za-z][A-Za-z0-9_]*)\s*\(([^)]*)\)\s*(?:=\s*(.+))?$")
_PARAM = re.compile(r"^param\s+([A-Za-z][A-Za-z0-9_]*)\s*=\s*(.+)$")


def parse_metric_text(text: str, name: str = "metric-file") -> Metric:
    """Parse the line-oriented metric format.

    ``coord = r, theta_R, s``, ``param kappa = 0.1``, ``g_rr = <expr>``,
    ``g_thth``, ``g_ss`` and optional off-diagonal ``g_rth`` etc.  Lines
    ``func Omega(r, s)`` declare opaque functions, optionally with a body.
    ``#`` starts a comment.
    """
    labels = TUBE_CHART.labels
    params: dict[str, float] = {}
    functions: dict[str, tuple[str, ...]] = {}
    bodies: dict[str, tuple[tuple[str, ...], str]] = {}
    raw: dict[tuple[int, int], tuple[str, int]] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if m := _PARAM.match(line):
            try:
                params[m.group(1)] = float(m.group(2))
            except ValueError:
                raise GeometryError(f"line {lineno}: parameter value must be numeric") from None
            continue
        if m := _FUNC.match(line):
            args = tuple(a.strip() for a in m.group(2).split(",") if a.strip())
            functions[m.group(1)] = args
            if m.group(3):
                bodies[m.group(1)] = (args, m.group(3))
            continue
        if "=" not in line:
            raise GeometryError(f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key == "coord":
            coords = tuple(c.strip() for c in value.split(","))
            if coords != TUBE_CHART.coords:
                raise GeometryError(
                    f"line {lineno}: chart must be (r, theta_R, s), got {coords}"
                )
            continue
        if key == "name":
            name = value
            continue
        if m := _KEY.match(key):
            i, j = sorted((labels.index(m.group(1)), labels.index(m.group(2))))
            if (i, j) in raw:
                raise GeometryError(f"line {lineno}: duplicate entry {key}")
            raw[(i, j)] = (value, lineno)
            continue
        raise GeometryError(f"line {lineno}: unknown key {key!r}")
    comps = {}
    arity = {k: len(v) for k, v in functions.items()}
    for ij, (value, lineno) in raw.items():
        try:
            comps[ij] = parse_expr(value, functions=arity)
        except ValueError as exc:
            raise GeometryError(f"line {lineno}: {exc}") from exc
    for diag in ((0, 0), (1, 1), (2, 2)):
        if diag not in raw:
            raise GeometryError(f"missing diagonal entry g_{labels[diag[0]] * 2}")
    metric = Metric.from_components(name, comps, params=params, functions=functions)
    if bodies:
        metric = metric.concretize(
            {k: (args, parse_expr(body, functions=arity)) for k, (args, body) in bodies.items()}
        )
    return metric


def load_metric_file(path) -> Metric:
    path = Path(path)
    return parse_metric_text(path.read_text(encoding="utf-8"), name=path.stem)
