"""Multiscale relevant-deviation analysis of time series against a historical baseline.

Thin Python surface over the C++ core: relevance tests (Gaussian-bound and
bootstrap calibrated), the minimal detectable deviation, the first-deviation
locator, and the synthetic scenario generators.
"""

from relscan._core import (  # noqa: F401
    DegenerateVariance,
    InvalidInput,
    bootstrap_test,
    conservative_test,
    estimate_lrv,
    generate_series,
    locate,
    minimal_delta,
    oracle_d_inf,
    oracle_t_star,
    statistic,
)

__all__ = [
    "DegenerateVariance",
    "InvalidInput",
    "bootstrap_test",
    "conservative_test",
    "estimate_lrv",
    "generate_series",
    "locate",
    "minimal_delta",
    "oracle_d_inf",
    "oracle_t_star",
    "statistic",
]
