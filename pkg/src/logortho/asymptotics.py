"""Large-n behaviour of the recurrence coefficients and extraction of C.

For the log weight on [-1, 1),

    a_n - a~_n ~ 2C / (n log n)^2,     b_n - b~_n ~ C / (n log n)^2,

with C = -3/32 and a~, b~ the Legendre coefficients; the error is one
power of 1/log n smaller.  ``fit_constant`` regresses the scaled residual
R_n on the basis (1, 1/log n).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from mpmath import mp

from .recurrence import RecurrenceTable, compute_table, legendre_exact
from .weights import WeightSpec

__all__ = [
    "C_THEOREM",
    "C_MAGNUS",
    "ModelForm",
    "AsymptoticModel",
    "FitResult",
    "FitRangeError",
    "predict",
    "residual_series",
    "fit_constant",
    "extract_constant",
]

C_THEOREM = "-0.09375"  # -3/32
C_MAGNUS = "-0.046875"  # -3/64, [0, 1] weight -log x


class ModelForm(enum.Enum):
    THEOREM_A = "theorem_a"
    THEOREM_B = "theorem_b"
    MAGNUS_A = "magnus_a"
    MAGNUS_B = "magnus_b"


@dataclass(frozen=True)
class AsymptoticModel:
    form: ModelForm
    C: str = C_THEOREM


class FitRangeError(ValueError):
    """Too few points, or too narrow a range of n, to separate C from D."""


@dataclass(frozen=True)
class FitResult:
    C_hat: object
    D_hat: object
    rms_residual: object
    n_range: tuple
    count: int


def predict(model: AsymptoticModel, n: int):
    """Leading-order prediction for a_n or b_n (natural log)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    C = mp.mpf(model.C)
    n = mp.mpf(n)
    s = (n * mp.log(n)) ** 2
    if model.form is ModelForm.THEOREM_A:
        return 2 * C / s
    if model.form is ModelForm.THEOREM_B:
        return mp.mpf(1) / 2 + 1 / (16 * n * n) + C / s
    if model.form is ModelForm.MAGNUS_A:
        return mp.mpf(1) / 2 - 1 / (8 * n * n) - 2 * C / s
    return mp.mpf(1) / 4 - 1 / (32 * n * n) + C / s


def residual_series(table: RecurrenceTable, reference: RecurrenceTable, target: str):
    """Pairs (n, R_n), n >= 2, whose limit is C.

    target 'b': R_n = (b_n - b~_n) (n log n)^2
    target 'a': R_n = (a_n - a~_n) (n log n)^2 / 2
    """
    if table.N != reference.N:
        raise ValueError(f"length mismatch: {table.N} vs {reference.N}")
    if target not in ("a", "b"):
        raise ValueError("target must be 'a' or 'b'")
    out = []
    with mp.workprec(min(table.precision_bits, reference.precision_bits)):
        for n in range(2, table.N):
            s = (n * mp.log(n)) ** 2
            if target == "b":
                out.append((n, (table.b[n] - reference.b[n]) * s))
            else:
                out.append((n, (table.a[n] - reference.a[n]) * s / 2))
    return out


def fit_constant(series, n_range: tuple | None = None) -> FitResult:
    """Least-squares fit R_n = C + D / log n.

    Parameters
    ----------
    series : sequence of (n, R_n)
    n_range : (lo, hi), optional
        Restrict to lo <= n <= hi.

    Raises
    ------
    FitRangeError
        Fewer than 8 points, or hi/lo < 4.
    """
    pts = [(n, r) for n, r in series if n_range is None or n_range[0] <= n <= n_range[1]]
    if len(pts) < 8:
        raise FitRangeError(f"fit needs at least 8 points, got {len(pts)}")
    lo = min(n for n, _ in pts)
    hi = max(n for n, _ in pts)
    if hi < 4 * lo:
        raise FitRangeError(f"fit range [{lo}, {hi}] spans less than a factor 4")
    with mp.workprec(128):
        A = mp.matrix([[1, 1 / mp.log(n)] for n, _ in pts])
        y = mp.matrix([mp.mpf(r) for _, r in pts])
        coef, _ = mp.qr_solve(A, y)
        C, D = coef[0], coef[1]
        res = [r - C - D / mp.log(n) for n, r in pts]
        rms = mp.sqrt(mp.fsum(e * e for e in res) / len(res))
    return FitResult(C, D, rms, (lo, hi), len(pts))


def extract_constant(
    weight: WeightSpec,
    n_max: int,
    n_lo: int,
    precision_bits: int = 512,
    targets=("b", "a"),
):
    """Full pipeline: table, Legendre reference, residuals, fit per target."""
    N = n_max + 1
    table = compute_table(weight, N, precision_bits)
    reference = legendre_exact(N, precision_bits)
    return {
        t: fit_constant(residual_series(table, reference, t), (n_lo, n_max)) for t in targets
    }
