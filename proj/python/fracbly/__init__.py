"""Eigenvalue-sum bounds for the fractional Laplacian.

Domains are plain dicts, e.g. {"kind": "box", "edges": [1, 1]} or
{"kind": "disk", "radius": 1}.
"""

from ._core import (
    ConvergenceError,
    RegionViolation,
    __version__,
    berezin_riesz_upper,
    bound,
    bound_values,
    exact_spectrum,
    fractional_spectrum,
    h,
    in_key_region,
    key_gap,
    moment_integrals,
    report_to_csv,
    run_bound_comparison,
    run_sandwich,
    scan,
    summarize,
)

__all__ = [
    "ConvergenceError",
    "RegionViolation",
    "__version__",
    "berezin_riesz_upper",
    "bound",
    "bound_values",
    "exact_spectrum",
    "fractional_spectrum",
    "h",
    "in_key_region",
    "key_gap",
    "moment_integrals",
    "report_to_csv",
    "run_bound_comparison",
    "run_sandwich",
    "scan",
    "summarize",
]
