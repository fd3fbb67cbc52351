"""Three-term recurrence coefficients of the orthonormal polynomials.

Convention: x p_n = b_n p_{n+1} + a_n p_n + b_{n-1} p_{n-1}, so b_n couples
p_n and p_{n+1}.  Internally the monic coefficients (alpha_n, beta_n) are
used, with a_n = alpha_n and b_n = sqrt(beta_{n+1}).

Two independent routes are provided for the log weight:

* ``modified_chebyshev`` maps modified moments (against Legendre) to
  coefficients (Wheeler's algorithm with the monic Legendre recurrence as
  reference);
* ``stieltjes_discretized`` orthogonalizes directly against a discrete
  measure that integrates w(x) p(x) exactly for polynomials up to the
  required degree.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from mpmath import mp

from .moments import ModifiedMomentVector, modified_moments_closed_form
from .quadrature import gauss_legendre_rule
from .weights import WeightSpec, legendre_weight

__all__ = [
    "Method",
    "RecurrenceTable",
    "NonPositiveBeta",
    "modified_chebyshev",
    "stieltjes_discretized",
    "legendre_exact",
    "log_weight_discretization",
    "compute_table",
]


class Method(enum.Enum):
    MODIFIED_CHEBYSHEV = "modified_chebyshev"
    STIELTJES = "stieltjes_discretized"
    LEGENDRE_EXACT = "legendre_exact"


class NonPositiveBeta(ArithmeticError):
    """A monic beta_n <= 0 appeared: the run is short of precision."""

    def __init__(self, n, value=None):
        super().__init__(f"beta_{n} is not positive ({value}); retry with more precision_bits")
        self.n = n
        self.value = value


@dataclass(frozen=True)
class RecurrenceTable:
    a: tuple
    b: tuple
    weight: WeightSpec
    precision_bits: int
    method: Method
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(self.a) != len(self.b):
            raise ValueError("a and b must have equal length")

    @property
    def N(self) -> int:
        return len(self.a)

    def rows(self):
        return [(n, self.a[n], self.b[n]) for n in range(self.N)]


def _monic_legendre_scale(j_max: int):
    # P_j = lead_j * monic_j with lead_j = (2j)! / (2^j j!^2); returns 1/lead_j
    c = [mp.one]
    for j in range(1, j_max + 1):
        c.append(c[-1] * j / (2 * j - 1))
    return c


def modified_chebyshev(moments: ModifiedMomentVector, N: int) -> RecurrenceTable:
    """Orthonormal (a_n, b_n), n < N, from modified Legendre moments.

    Needs at least 2N + 2 moments (b_{N-1} comes from beta_N).

    Raises
    ------
    NonPositiveBeta
        If any beta_n <= 0, which for these positive weights only happens
        when the working precision is exhausted.
    """
    L = len(moments.m)
    if L < 2 * N + 2:
        raise ValueError(f"need {2 * N + 2} moments for N={N}, got {L}")
    bits = moments.precision_bits
    K = N + 1  # monic coefficients needed
    with mp.workprec(bits):
        scale = _monic_legendre_scale(2 * K)
        mu = [moments.m[j] * scale[j] for j in range(2 * K)]
        ref_b = [mp.zero] + [mp.mpf(l * l) / (4 * l * l - 1) for l in range(1, 2 * K)]
        alpha = [mp.zero] * K
        beta = [mp.zero] * K
        if mu[0] <= 0:
            raise NonPositiveBeta(0, mu[0])
        alpha[0] = mu[1] / mu[0]
        beta[0] = mu[0]
        sig_prev2 = [mp.zero] * (2 * K + 1)
        sig_prev = list(mu) + [mp.zero]
        for k in range(1, K):
            sig = [mp.zero] * (2 * K + 1)
            ak, bk = alpha[k - 1], beta[k - 1]
            for l in range(k, 2 * K - k):
                # reference alpha is zero for Legendre
                sig[l] = sig_prev[l + 1] - ak * sig_prev[l] - bk * sig_prev2[l] + ref_b[l] * sig_prev[l - 1]
            if sig[k] <= 0:
                raise NonPositiveBeta(k, sig[k])
            alpha[k] = sig[k + 1] / sig[k] - sig_prev[k] / sig_prev[k - 1]
            beta[k] = sig[k] / sig_prev[k - 1]
            sig_prev2, sig_prev = sig_prev, sig
        a = tuple(alpha[:N])
        b = tuple(mp.sqrt(beta[n + 1]) for n in range(N))
    return RecurrenceTable(a, b, moments.weight, bits, Method.MODIFIED_CHEBYSHEV)


def log_weight_discretization(weight: WeightSpec, M: int, precision_bits: int):
    """Discrete measure (nodes, masses) reproducing w(x) dx on polynomials.

    With x = 1 - 2s, w(x) dx = 2 (log k - log s) ds on [0, 1], and
    int_0^1 q(s) (-log s) ds = int_0^1 int_0^1 q(t u) dt du.  The log k part
    is an M-point Gauss-Legendre rule; the -log s part is a tensor product
    of (M//4 + 1)-point rules.  Exact for degree <= 2 (M//4) + 1.
    """
    if weight.is_legendre:
        rule = gauss_legendre_rule(M, precision_bits)
        return list(rule.nodes), list(rule.weights)
    m = M // 4 + 1
    with mp.workprec(precision_bits):
        nodes, masses = [], []
        logk = mp.log(weight.k_value())
        if logk > 0:
            rule = gauss_legendre_rule(M, precision_bits)
            nodes += list(rule.nodes)
            masses += [w * logk for w in rule.weights]
        r = gauss_legendre_rule(m, precision_bits)
        t = [(1 + x) / 2 for x in r.nodes]
        mu = [w / 2 for w in r.weights]
        for ti, mi in zip(t, mu):
            for uj, mj in zip(t, mu):
                nodes.append(1 - 2 * ti * uj)
                masses.append(2 * mi * mj)
    return nodes, masses


def stieltjes_discretized(
    weight: WeightSpec, N: int, M: int | None = None, precision_bits: int = 512
) -> RecurrenceTable:
    """Orthonormal (a_n, b_n), n < N, by the Stieltjes procedure.

    The measure is replaced by ``log_weight_discretization(weight, M)``,
    which is exact (up to rounding) once M >= 4N; M defaults to 4N.
    """
    if M is None:
        M = 4 * N
    if M < 4 * N:
        raise ValueError("M must be >= 4N")
    nodes, masses = log_weight_discretization(weight, M, precision_bits)
    with mp.workprec(precision_bits + 16):
        total = mp.fsum(masses)
        p_prev = [mp.zero] * len(nodes)
        p = [1 / mp.sqrt(total)] * len(nodes)
        a, b = [], []
        b_prev = mp.zero
        for n in range(N):
            wp = [lam * pi for lam, pi in zip(masses, p)]
            an = mp.fdot(wp, (x * pi for x, pi in zip(nodes, p)))
            q = [(x - an) * pi - b_prev * pm for x, pi, pm in zip(nodes, p, p_prev)]
            nrm2 = mp.fdot(masses, (qi * qi for qi in q))
            if nrm2 <= 0:
                raise NonPositiveBeta(n + 1, nrm2)
            bn = mp.sqrt(nrm2)
            a.append(an)
            b.append(bn)
            p_prev, p = p, [qi / bn for qi in q]
            b_prev = bn
    with mp.workprec(precision_bits):
        a = tuple(+x for x in a)
        b = tuple(+x for x in b)
    return RecurrenceTable(a, b, weight, precision_bits, Method.STIELTJES, {"M": M})


def legendre_exact(N: int, precision_bits: int = 512) -> RecurrenceTable:
    """Legendre coefficients: a_n = 0, b_n = (n+1)/sqrt((2n+1)(2n+3))."""
    if N < 1:
        raise ValueError("N must be >= 1")
    with mp.workprec(precision_bits):
        b = tuple((n + 1) / mp.sqrt((2 * n + 1) * (2 * n + 3)) for n in range(N))
    return RecurrenceTable(
        (mp.zero,) * N, b, legendre_weight(), precision_bits, Method.LEGENDRE_EXACT
    )


def compute_table(weight: WeightSpec, N: int, precision_bits: int = 512) -> RecurrenceTable:
    """Production path: closed-form moments followed by modified Chebyshev."""
    moments = modified_moments_closed_form(weight, N + 1, precision_bits)
    return modified_chebyshev(moments, N)
