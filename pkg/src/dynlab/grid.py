"""Sample grids and seeded random interior points over the tube chart."""
from __future__ import annotations

import itertools
import math
from typing import Iterator, Mapping, Sequence

import numpy as np

COORDS = ("r", "theta_R", "s")

# r starts at 0.1: the axis r = 0 is a coordinate singularity of every tube metric.
DEFAULT_GRID: dict[str, tuple[float, ...]] = {
    "r": (0.1, 0.25, 0.5, 1.0, 2.0),
    "theta_R": (0.0, math.pi / 3, math.pi / 2, math.pi, 3 * math.pi / 2),
    "s": (0.0, 1.0, 2.0),
}

SAMPLE_DOMAIN: dict[str, tuple[float, float]] = {
    "r": (0.1, 2.0),
    "theta_R": (0.0, 2 * math.pi),
    "s": (0.0, 2 * math.pi),
}

R_MIN = 0.1


def grid_points(grid: Mapping[str, Sequence[float]] | None = None) -> list[dict[str, float]]:
    grid = dict(DEFAULT_GRID if grid is None else grid)
    names = list(grid)
    return [dict(zip(names, combo)) for combo in itertools.product(*(grid[n] for n in names))]


def random_points(n: int, seed: int = 0, domain: Mapping[str, tuple[float, float]] | None = None) -> list[dict[str, float]]:
    """``n`` reproducible points drawn uniformly from ``domain``."""
    domain = dict(SAMPLE_DOMAIN if domain is None else domain)
    rng = np.random.default_rng(seed)
    cols = {name: rng.uniform(lo, hi, size=n) for name, (lo, hi) in domain.items()}
    return [{name: float(cols[name][i]) for name in domain} for i in range(n)]


def parse_grid(spec: str) -> dict[str, tuple[float, ...]]:
    """Parse ``r=a:b:n,theta_R=a:b:n`` into explicit value tuples.

    Coordinates not mentioned keep their default values.
    """
    grid = dict(DEFAULT_GRID)
    for part in filter(None, (p.strip() for p in spec.split(","))):
        try:
            name, rng = part.split("=", 1)
            lo, hi, count = rng.split(":")
            lo_f, hi_f, n = float(lo), float(hi), int(count)
        except ValueError:
            raise ValueError(f"bad grid component {part!r}; expected name=a:b:n") from None
        if n < 1:
            raise ValueError(f"grid count must be positive in {part!r}")
        name = name.strip()
        if name == "r" and min(lo_f, hi_f) < R_MIN:
            raise ValueError(f"grid range for r must respect r >= {R_MIN}")
        grid[name] = tuple(float(v) for v in np.linspace(lo_f, hi_f, n))
    return grid


def iter_bindings(points: Sequence[Mapping[str, float]], params: Mapping[str, float]) -> Iterator[dict[str, float]]:
    for p in points:
        b = dict(params)
        b.update(p)
        yield b
