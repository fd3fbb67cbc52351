"""Modified moments of the weights against Legendre polynomials.

m_j = integral of w(x) P_j(x) over [-1, 1], with P_j the standard
(non-monic) Legendre polynomial.  For the log weight,

    m_0 = 2 log k + 2,    m_j = 2 / (j (j + 1))  for j >= 1,

and the k-dependence sits entirely in m_0 because w = log(2k) - log(1 - x).
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp

from .quadrature import DEFAULT_PRECISION, integrate_de
from .weights import WeightSpec

__all__ = [
    "ModifiedMomentVector",
    "MomentQuadratureError",
    "modified_moments_closed_form",
    "modified_moments_quadrature",
    "legendre_P",
]


class MomentQuadratureError(ArithmeticError):
    def __init__(self, j, estimate):
        super().__init__(f"moment m_{j} did not converge (error estimate {estimate})")
        self.j = j


@dataclass(frozen=True)
class ModifiedMomentVector:
    m: tuple
    weight: WeightSpec
    N: int
    precision_bits: int

    def __len__(self) -> int:
        return len(self.m)

    def __getitem__(self, j):
        return self.m[j]


def legendre_P(j: int, x):
    """P_j(x) by the three-term recurrence."""
    if j == 0:
        return mp.one
    p0, p1 = mp.one, x
    for i in range(2, j + 1):
        p0, p1 = p1, ((2 * i - 1) * x * p1 - (i - 1) * p0) / i
    return p1


def modified_moments_closed_form(
    weight: WeightSpec, N: int, precision_bits: int = 512
) -> ModifiedMomentVector:
    """The 2N moments m_0 .. m_{2N-1} from their closed forms."""
    if N < 1:
        raise ValueError("N must be >= 1")
    with mp.workprec(precision_bits):
        if weight.is_legendre:
            m = [mp.mpf(2)] + [mp.zero] * (2 * N - 1)
        else:
            m = [2 * mp.log(weight.k_value()) + 2]
            m += [mp.mpf(2) / (j * (j + 1)) for j in range(1, 2 * N)]
    return ModifiedMomentVector(tuple(m), weight, N, precision_bits)


def modified_moments_quadrature(
    weight: WeightSpec, N: int, precision_bits: int = DEFAULT_PRECISION
) -> ModifiedMomentVector:
    """The same 2N moments by tanh-sinh quadrature (independent check).

    The integrand is split at 0 and each half is written in the distance to
    its endpoint, so the log singularity at x = 1 is seen exactly.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    out = []
    with mp.workprec(precision_bits):
        log2k = None if weight.is_legendre else weight.log2k()

        def w_right(t):  # x = 1 - t
            return log2k - mp.log(t)

        def w_left(u):  # x = -1 + u
            return log2k - mp.log(2 - u)

        for j in range(2 * N):
            if weight.is_legendre:
                res_r = integrate_de(lambda t: legendre_P(j, 1 - t), 0, 1, precision_bits)
                res_l = integrate_de(lambda u: legendre_P(j, u - 1), 0, 1, precision_bits)
            else:
                res_r = integrate_de(
                    lambda t: w_right(t) * legendre_P(j, 1 - t), 0, 1, precision_bits
                )
                res_l = integrate_de(
                    lambda u: w_left(u) * legendre_P(j, u - 1), 0, 1, precision_bits
                )
            if not (res_r.reliable and res_l.reliable):
                raise MomentQuadratureError(j, res_r.error_estimate + res_l.error_estimate)
            out.append(res_r.value + res_l.value)
    return ModifiedMomentVector(tuple(out), weight, N, precision_bits)
