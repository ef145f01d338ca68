"""Christoffel symbols and the fully covariant Riemann tensor, symbolically."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from ..symcore import ZERO, Const, Expr, add, differentiate, evaluate, lambdify, mul, power, simplify, substitute_function, subs
from .metric import Chart, GeometryError, Metric

HALF = Const(Fraction(1, 2))

# (i, j, k, l) of the six algebraically independent components in 3D.
INDEPENDENT = (
    (0, 1, 0, 1),
    (0, 1, 0, 2),
    (0, 1, 1, 2),
    (0, 2, 0, 2),
    (0, 2, 1, 2),
    (1, 2, 1, 2),
)


def inverse_metric(g: Metric) -> list[list[Expr]]:
    if g.is_diagonal:
        inv = [[ZERO] * 3 for _ in range(3)]
        for i, e in enumerate(g.diag()):
            if e.is_zero():
                raise GeometryError(f"metric {g.name!r} is singular: g_{g.chart.labels[i] * 2} = 0")
            inv[i][i] = power(e, -1)
        return inv
    m = g.entries
    cof = [[ZERO] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            rows = [x for x in range(3) if x != i]
            cols = [y for y in range(3) if y != j]
            minor = add(
                mul(m[rows[0]][cols[0]], m[rows[1]][cols[1]]),
                -mul(m[rows[0]][cols[1]], m[rows[1]][cols[0]]),
            )
            cof[i][j] = minor if (i + j) % 2 == 0 else -minor
    det = simplify(add(*(mul(m[0][j], cof[0][j]) for j in range(3))))
    if det.is_zero():
        raise GeometryError(f"metric {g.name!r} is singular (zero determinant)")
    inv_det = power(det, -1)
    return [[simplify(mul(cof[j][i], inv_det)) for j in range(3)] for i in range(3)]


@dataclass(frozen=True)
class Christoffel:
    """Connection coefficients ``data[i][j][k]`` = Gamma^i_jk."""

    data: tuple
    chart: Chart

    def __getitem__(self, ijk) -> Expr:
        i, j, k = (self.chart.index(x) for x in ijk)
        return self.data[i][j][k]

    def components(self) -> Iterable[tuple[tuple[int, int, int], Expr]]:
        for i, j, k in itertools.product(range(3), repeat=3):
            if j <= k:
                yield (i, j, k), self.data[i][j][k]

    def numeric(self, binding: Mapping[str, float]) -> np.ndarray:
        return np.array(
            [[[evaluate(self.data[i][j][k], binding) for k in range(3)] for j in range(3)] for i in range(3)]
        )


def christoffel(g: Metric) -> Christoffel:
    coords = g.chart.coords
    inv = inverse_metric(g)
    m = g.entries
    dg = [[[differentiate(m[a][b], coords[c]) for c in range(3)] for b in range(3)] for a in range(3)]
    data = [[[ZERO] * 3 for _ in range(3)] for _ in range(3)]
    for i in range(3):
        for j in range(3):
            for k in range(j, 3):
                terms = []
                for l in range(3):
                    if inv[i][l].is_zero():
                        continue
                    bracket = add(dg[l][k][j], dg[j][l][k], -dg[j][k][l])
                    terms.append(mul(inv[i][l], bracket))
                val = simplify(mul(HALF, add(*terms)))
                data[i][j][k] = data[i][k][j] = val
    return Christoffel(tuple(tuple(tuple(row) for row in plane) for plane in data), g.chart)


@dataclass(frozen=True)
class RiemannTensor:
    """Fully covariant ``R_ijkl`` (all 81 entries, stored as computed)."""

    data: tuple
    chart: Chart
    metric_name: str = ""

    def __getitem__(self, ijkl) -> Expr:
        i, j, k, l = (self.chart.index(x) for x in ijkl)
        return self.data[i][j][k][l]

    def name_of(self, idx) -> str:
        lab = self.chart.labels
        return "R_" + "".join(lab[i] for i in idx)

    def component(self, name: str) -> Expr:
        """Look up by label name such as ``R_rsrs`` or ``R_rthrth``."""
        for idx in itertools.product(range(3), repeat=4):
            if self.name_of(idx) == name:
                return self.data[idx[0]][idx[1]][idx[2]][idx[3]]
        raise KeyError(name)

    def independent(self) -> dict[str, Expr]:
        return {self.name_of(idx): self.data[idx[0]][idx[1]][idx[2]][idx[3]] for idx in INDEPENDENT}

    def map(self, fn) -> "RiemannTensor":
        data = tuple(
            tuple(tuple(tuple(fn(self.data[i][j][k][l]) for l in range(3)) for k in range(3)) for j in range(3))
            for i in range(3)
        )
        return RiemannTensor(data, self.chart, self.metric_name)

    def concretize(self, realizations) -> "RiemannTensor":
        def fn(e):
            for name, (params, body) in realizations.items():
                e = substitute_function(e, name, params, body)
            return e

        return self.map(fn)

    def resolved(self, values: Mapping[str, float]) -> "RiemannTensor":
        mapping = {k: Const(v) for k, v in values.items()}
        return self.map(lambda e: subs(e, mapping))

    def compiled(self, params: Iterable[str] = ()):
        """Callable ``f(r, theta_R, s, *params) -> (3,3,3,3) array``."""
        args = tuple(self.chart.coords) + tuple(params)
        cache: dict[Expr, object] = {}
        fns = {}
        for idx in itertools.product(range(3), repeat=4):
            e = self.data[idx[0]][idx[1]][idx[2]][idx[3]]
            if e not in cache:
                cache[e] = lambdify(e, args)
            fns[idx] = cache[e]

        def f(*x):
            out = np.zeros((3, 3, 3, 3))
            for idx, fn in fns.items():
                out[idx] = fn(*x)
            return out

        return f

    def numeric(self, binding: Mapping[str, float]) -> np.ndarray:
        out = np.zeros((3, 3, 3, 3))
        for idx in itertools.product(range(3), repeat=4):
            out[idx] = evaluate(self.data[idx[0]][idx[1]][idx[2]][idx[3]], binding)
        return out


def riemann(g: Metric, gamma: Christoffel | None = None) -> RiemannTensor:
    """R^i_jkl = d_k G^i_jl - d_l G^i_jk + G^i_km G^m_jl - G^i_lm G^m_jk, lowered with g."""
    gamma = christoffel(g) if gamma is None else gamma
    G = gamma.data
    coords = g.chart.coords
    up = [[[[ZERO] * 3 for _ in range(3)] for _ in range(3)] for _ in range(3)]
    for i, j in itertools.product(range(3), repeat=2):
        for k in range(3):
            for l in range(k + 1, 3):
                terms = [differentiate(G[i][j][l], coords[k]), -differentiate(G[i][j][k], coords[l])]
                for m in range(3):
                    terms.append(mul(G[i][k][m], G[m][j][l]))
                    terms.append(-mul(G[i][l][m], G[m][j][k]))
                up[i][j][k][l] = add(*terms)
                up[i][j][l][k] = -up[i][j][k][l]
    m_ = g.entries
    low = [[[[ZERO] * 3 for _ in range(3)] for _ in range(3)] for _ in range(3)]
    for i, j, k in itertools.product(range(3), repeat=3):
        for l in range(k + 1, 3):
            val = simplify(add(*(mul(m_[i][n], up[n][j][k][l]) for n in range(3) if not m_[i][n].is_zero())))
            low[i][j][k][l] = val
            low[i][j][l][k] = simplify(-val)
    data = tuple(tuple(tuple(tuple(x) for x in c) for c in b) for b in low)
    return RiemannTensor(data, g.chart, g.name)


def symmetry_violations(values: np.ndarray) -> dict[str, float]:
    """Largest violation of the algebraic Riemann symmetries in a numeric array."""
    R = values
    bianchi = R + np.transpose(R, (0, 2, 3, 1)) + np.transpose(R, (0, 3, 1, 2))
    return {
        "antisym_first_pair": float(np.max(np.abs(R + np.transpose(R, (1, 0, 2, 3))))),
        "antisym_last_pair": float(np.max(np.abs(R + np.transpose(R, (0, 1, 3, 2))))),
        "pair_interchange": float(np.max(np.abs(R - np.transpose(R, (2, 3, 0, 1))))),
        "first_bianchi": float(np.max(np.abs(bianchi))),
    }
