"""Recurrence coefficients and Riemann-Hilbert auxiliaries for the weight
log(2k/(1-x)) on [-1, 1), in arbitrary precision (mpmath)."""

__version__ = "0.1.0"

from .weights import WeightSpec, eval_weight, legendre_weight, log_weight  # noqa: E402
from .recurrence import RecurrenceTable, compute_table, legendre_exact  # noqa: E402
from .asymptotics import extract_constant, fit_constant  # noqa: E402

__all__ = [
    "__version__",
    "WeightSpec",
    "log_weight",
    "legendre_weight",
    "eval_weight",
    "RecurrenceTable",
    "compute_table",
    "legendre_exact",
    "extract_constant",
    "fit_constant",
]
