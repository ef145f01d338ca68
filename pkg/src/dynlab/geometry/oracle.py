"""Finite-difference curvature, used as the independent check on the symbolic path.

Only numeric metric values enter here; no symbolic derivative is taken.
"""
from __future__ import annotations

from typing import Callable, Mapping, Sequence

import numpy as np

from ..symcore import central_difference
from .metric import Metric

MetricFn = Callable[..., np.ndarray]


def _shifted(x: Sequence[float], axis: int, value: float) -> list[float]:
    y = list(x)
    y[axis] = value
    return y


def metric_gradient(g: MetricFn, x: Sequence[float]) -> np.ndarray:
    """``dg[a, b, c]`` = d g_ab / d x^c by the 4th-order central stencil."""
    out = np.zeros((3, 3, 3))
    for c in range(3):
        out[:, :, c] = central_difference(lambda v: g(*_shifted(x, c, v)), float(x[c]))
    return out


def fd_christoffel(g: MetricFn, x: Sequence[float]) -> np.ndarray:
    gx = g(*x)
    inv = np.linalg.inv(gx)
    dg = metric_gradient(g, x)
    # lowered[l, j, k] = d_j g_lk + d_k g_jl - d_l g_jk
    lowered = np.einsum("lkj->ljk", dg) + np.einsum("jlk->ljk", dg) - np.einsum("jkl->ljk", dg)
    return 0.5 * np.einsum("il,ljk->ijk", inv, lowered)


def fd_riemann(g: MetricFn, x: Sequence[float]) -> np.ndarray:
    """Covariant R_ijkl from nested finite differences of the numeric metric."""
    G = fd_christoffel(g, x)
    dG = np.zeros((3, 3, 3, 3))  # dG[i, j, l, k] = d_k Gamma^i_jl
    for k in range(3):
        dG[..., k] = central_difference(lambda v: fd_christoffel(g, _shifted(x, k, v)), float(x[k]))
    up = (
        np.einsum("ijlk->ijkl", dG)
        - dG
        + np.einsum("ikm,mjl->ijkl", G, G)
        - np.einsum("ilm,mjk->ijkl", G, G)
    )
    return np.einsum("im,mjkl->ijkl", g(*x), up)


def metric_function(metric: Metric, overrides: Mapping[str, float] | None = None) -> MetricFn:
    """Compile a resolved, fully concrete copy of ``metric``."""
    return metric.resolved(overrides).compiled()
