"""Exact trace calculus, Wick expectations and Stein certificates for Gaussian matrix ensembles."""

import json as _json

from ._core import (
    DegreeCapExceeded,
    ScaleMismatch,
    TracePolynomial,
    UnsupportedEnsemble,
    WickOracle,
    catalan,
    chebyshev_statistics,
    chebyshev_t,
    chebyshev_t_str,
    chebyshev_u,
    semicircle_inner_product_u,
    semicircle_moment,
)
from ._core import certify as _certify


def certify(d, n, mc_replicas=0, seed=0):
    """Stein certificate for the first d Chebyshev statistics at size n, as a dict."""
    return _json.loads(_certify(d, n, mc_replicas, seed))


__all__ = [
    "DegreeCapExceeded",
    "ScaleMismatch",
    "TracePolynomial",
    "UnsupportedEnsemble",
    "WickOracle",
    "catalan",
    "certify",
    "chebyshev_statistics",
    "chebyshev_t",
    "chebyshev_t_str",
    "chebyshev_u",
    "semicircle_inner_product_u",
    "semicircle_moment",
]
