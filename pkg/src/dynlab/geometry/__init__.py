"""Metrics, connection, curvature and flatness in tube coordinates (r, theta_R, s)."""
from .claims import CLAIMS, CurvatureClaim, claims_for, compare_with_paper, engine_tensor, get_claim, run_claims
from .curvature import INDEPENDENT, Christoffel, RiemannTensor, christoffel, inverse_metric, riemann, symmetry_violations
from .flatness import FAMILY, CandidateResidual, FlatnessReport, family_metric, flatness_condition
from .metric import (
    CATALOG_KEYS,
    DEFAULT_REALIZATIONS,
    TUBE_CHART,
    Chart,
    GeometryError,
    Metric,
    conformal_rescale,
    load_metric_file,
    metric_catalog,
    parse_metric_text,
    ricca_factor,
)
from .oracle import fd_christoffel, fd_riemann, metric_function

__all__ = [
    "CATALOG_KEYS", "CLAIMS", "CandidateResidual", "Chart", "Christoffel", "CurvatureClaim",
    "DEFAULT_REALIZATIONS", "FAMILY", "FlatnessReport", "GeometryError", "INDEPENDENT", "Metric",
    "RiemannTensor", "TUBE_CHART", "christoffel", "claims_for", "compare_with_paper",
    "conformal_rescale", "engine_tensor", "family_metric", "fd_christoffel", "fd_riemann",
    "flatness_condition", "get_claim", "inverse_metric", "load_metric_file", "metric_catalog",
    "metric_function", "parse_metric_text", "ricca_factor", "riemann", "run_claims",
    "symmetry_violations",
]
