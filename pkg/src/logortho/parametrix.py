"""Bessel model near z = 1: K0/K1/I0, Psi's second column, f, N and E.

Near the hard edge the local model is built from

    Psi_12(zeta) = (i/pi) K0(2 zeta^(1/2)),
    Psi_22(zeta) = -2 zeta^(1/2) K0'(2 zeta^(1/2)) = 2 zeta^(1/2) K1(2 zeta^(1/2)),

glued to the outer solution by E(z) = N(z) M f(z)^(sigma3/4), with
M = (1/sqrt 2)[[1, -i], [-i, 1]] and f = log^2(phi)/4.

The leading endpoint integral

    J(n) = (1/2 pi i) int_1^{1+1/n} Psi_12(n^2 f(s))^2 D(s) ds,
    D    = F^2/w_+ + F^2/w_- - 2,

is evaluated in v = 2 (n^2 f(s))^(1/2) = n acosh(s), where it becomes

    J(n) = -1/(2 pi^3 i) int_0^{n acosh(1+1/n)} K0(v)^2 D(cosh(v/n)) sinh(v/n)/n dv.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from mpmath import mp

from .quadrature import DEFAULT_PRECISION, integrate_de
from .szego import F2_over_w_cancellation, sqrt_z2m1
from .weights import WeightSpec, log_weight

__all__ = [
    "Matrix2",
    "ParametrixEval",
    "BesselSeriesError",
    "bessel_K01",
    "bessel_K0",
    "bessel_K1",
    "bessel_I0",
    "bessel_I1",
    "psi2",
    "f_conformal",
    "N_matrix",
    "E_matrix",
    "E_at_one",
    "k0_moment_check",
    "ChebyshevInterpolant",
    "cancellation_interpolant",
    "appendixC_leading_integral",
    "prop_c2_matrix",
]

log = logging.getLogger(__name__)


class BesselSeriesError(ArithmeticError):
    """A Bessel series failed to converge."""


# ---------------------------------------------------------------------------
# Modified Bessel functions of order 0 and 1


def _cutover(bits: int):
    return max(20, bits // 8)


def _extra_bits(z) -> int:
    # series terms reach e^{|z|} while K decays like e^{-|z|}
    return int(2 * abs(z) / mp.ln2) + 16


def _series_I01(z, bits):
    """(I0(z), I1(z)) by their power series at ``bits``."""
    with mp.workprec(bits):
        q = z * z / 4
        eps = mp.ldexp(mp.one, -bits)
        t0, t1 = mp.mpc(1), z / 2
        s0, s1 = t0, t1
        k = 0
        while True:
            k += 1
            t0 = t0 * q / (k * k)
            t1 = t1 * q / (k * (k + 1))
            s0 += t0
            s1 += t1
            if k > abs(z) and abs(t0) <= eps * abs(s0) and abs(t1) <= eps * abs(s1):
                return s0, s1
            if k > 100000:
                raise BesselSeriesError("I series did not converge")


def _series_K01(z, bits):
    """(K0(z), K1(z)) from the logarithmic series, computed at raised precision."""
    wp = bits + _extra_bits(z)
    with mp.workprec(wp):
        z = mp.mpc(z)
        q = z * z / 4
        eps = mp.ldexp(mp.one, -wp)
        I0, I1 = _series_I01(z, wp)
        lg = mp.log(z / 2)
        # K0 = -(log(z/2) + gamma) I0 + sum q^k H_k / k!^2
        # K1 = 1/z + log(z/2) I1 - (z/4) sum (psi(k+1) + psi(k+2)) q^k / (k! (k+1)!)
        t = mp.mpc(1)  # q^k / k!^2
        u = mp.mpc(1)  # q^k / (k! (k+1)!)
        H = mp.zero
        g = mp.euler
        s0 = mp.mpc(0)
        s1 = (-g + (1 - g)) * u
        k = 0
        while True:
            k += 1
            t = t * q / (k * k)
            u = u * q / (k * (k + 1))
            H += mp.one / k
            a0 = t * H
            a1 = u * (2 * H + mp.one / (k + 1) - 2 * g)
            s0 += a0
            s1 += a1
            if k > abs(z) and abs(a0) <= eps * max(abs(s0), 1) and abs(a1) <= eps * max(abs(s1), 1):
                break
            if k > 100000:
                raise BesselSeriesError("K series did not converge")
        K0 = -(lg + g) * I0 + s0
        K1 = 1 / z + lg * I1 - z / 4 * s1
    with mp.workprec(bits):
        return +K0, +K1


def _asymptotic_K01(z, bits):
    """(K0, K1) from the large-|z| expansion, or None if it stagnates
    before reaching 2^-bits relative accuracy."""
    with mp.workprec(bits + 16):
        z = mp.mpc(z)
        eps = mp.ldexp(mp.one, -bits - 4)
        t0 = t1 = mp.mpc(1)
        s0 = s1 = mp.mpc(1)
        prev = mp.inf
        k = 0
        while True:
            k += 1
            m = (2 * k - 1) ** 2
            t0 = t0 * (-m) / (k * 8 * z)
            t1 = t1 * (4 - m) / (k * 8 * z)
            s0 += t0
            s1 += t1
            size = max(abs(t0), abs(t1))
            if size <= eps:
                break
            if size >= prev:
                return None
            prev = size
        pre = mp.sqrt(mp.pi / (2 * z)) * mp.exp(-z)
        K0, K1 = pre * s0, pre * s1
    with mp.workprec(bits):
        return +K0, +K1


def bessel_K01(z, precision_bits: int = DEFAULT_PRECISION):
    """(K0(z), K1(z), branch) with branch 'series' or 'asymptotic'.

    The asymptotic expansion is tried for |z| above max(20, bits/8); if its
    terms stop decreasing before 2^-bits the series is used instead.
    """
    z = mp.mpc(z)
    if z.imag == 0 and z.real <= 0:
        raise ValueError("K is cut along (-oo, 0]")
    if abs(z) > _cutover(precision_bits):
        out = _asymptotic_K01(z, precision_bits)
        if out is not None:
            return out[0], out[1], "asymptotic"
    K0, K1 = _series_K01(z, precision_bits)
    return K0, K1, "series"


def _real_if_real(z, v):
    return v.real if z.imag == 0 and z.real > 0 else v


def bessel_K0(z, precision_bits: int = DEFAULT_PRECISION):
    """K0(z) for z off (-oo, 0]; real input on (0, oo) gives a real result."""
    K0, _, _ = bessel_K01(z, precision_bits)
    return _real_if_real(mp.mpc(z), K0)


def bessel_K1(z, precision_bits: int = DEFAULT_PRECISION):
    """K1(z) = -K0'(z)."""
    _, K1, _ = bessel_K01(z, precision_bits)
    return _real_if_real(mp.mpc(z), K1)


def bessel_I0(z, precision_bits: int = DEFAULT_PRECISION):
    z = mp.mpc(z)
    I0, _ = _series_I01(z, precision_bits + _extra_bits(z))
    with mp.workprec(precision_bits):
        return _real_if_real(z, +I0) if z.imag == 0 else +I0


def bessel_I1(z, precision_bits: int = DEFAULT_PRECISION):
    """I1(z) = I0'(z)."""
    z = mp.mpc(z)
    _, I1 = _series_I01(z, precision_bits + _extra_bits(z))
    with mp.workprec(precision_bits):
        return (+I1).real if z.imag == 0 else +I1


# ---------------------------------------------------------------------------
# Psi, f, N, E


@dataclass(frozen=True)
class ParametrixEval:
    zeta: object
    psi12: object
    psi22: object


@dataclass(frozen=True)
class Matrix2:
    """A 2x2 complex matrix stored row-major.

    Products, determinants and inverses use the ambient mpmath precision.
    """

    entries: tuple

    @classmethod
    def of(cls, a, b, c, d):
        return cls(((mp.mpc(a), mp.mpc(b)), (mp.mpc(c), mp.mpc(d))))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "Matrix2") -> "Matrix2":
        A, B = self.entries, other.entries
        return Matrix2(
            tuple(
                tuple(A[i][0] * B[0][j] + A[i][1] * B[1][j] for j in range(2)) for i in range(2)
            )
        )

    def scale(self, s) -> "Matrix2":
        return Matrix2(tuple(tuple(s * x for x in row) for row in self.entries))

    def det(self):
        (a, b), (c, d) = self.entries
        return a * d - b * c

    def trace(self):
        return self.entries[0][0] + self.entries[1][1]

    def inverse(self) -> "Matrix2":
        (a, b), (c, d) = self.entries
        D = a * d - b * c
        return Matrix2.of(d / D, -b / D, -c / D, a / D)

    def max_abs_diff(self, other: "Matrix2"):
        return max(abs(self[i, j] - other[i, j]) for i in range(2) for j in range(2))


def psi2(zeta, precision_bits: int = DEFAULT_PRECISION) -> ParametrixEval:
    """Second column of the Bessel model Psi at zeta off (-oo, 0]."""
    zeta = mp.mpc(zeta)
    if zeta.imag == 0 and zeta.real <= 0:
        raise ValueError("Psi_2 is cut along (-oo, 0]")
    with mp.workprec(precision_bits):
        s = 2 * mp.sqrt(zeta)
        K0, K1, _ = bessel_K01(s, precision_bits)
        return ParametrixEval(zeta, mp.mpc(0, 1) / mp.pi * K0, s * K1)


def _log_phi(z, zeta):
    # log phi(z) with phi = z + sqrt(z^2 - 1), written as log1p so that it
    # stays accurate as z -> 1; zeta = z - 1
    return mp.log1p(zeta + sqrt_z2m1(z, zeta))


def f_conformal(z, precision_bits: int = DEFAULT_PRECISION, zeta=None):
    """f(z) = log^2 phi(z) / 4 on the disc |z - 1| < 1/2.

    On the real segment (1/2, 1) the two boundary values agree and equal
    -acos(z)^2 / 4.  ``zeta`` may carry z - 1 more accurately than z.
    """
    with mp.workprec(precision_bits):
        z = mp.mpc(z)
        if zeta is None:
            with mp.workprec(2 * precision_bits):
                zeta = z - 1
        zeta = mp.mpc(zeta)
        if abs(zeta) >= mp.mpf(1) / 2:
            raise ValueError("f is only used on |z - 1| < 1/2")
        if zeta == 0:
            return mp.mpc(0)
        if zeta.imag == 0 and zeta.real < 0:
            return mp.mpc(-mp.acos(z.real) ** 2 / 4)
        return _log_phi(z, zeta) ** 2 / 4


def _a_of(z):
    return mp.power((z - 1) / (z + 1), mp.mpf(1) / 4)


def N_matrix(z, precision_bits: int = DEFAULT_PRECISION) -> Matrix2:
    """N(z) with a = ((z-1)/(z+1))^(1/4); unimodular, tends to I at infinity."""
    with mp.workprec(precision_bits):
        z = mp.mpc(z)
        if z.imag == 0 and -1 <= z.real <= 1:
            raise ValueError("N is cut along [-1, 1]")
        a = _a_of(z)
        p = (a + 1 / a) / 2
        q = (a - 1 / a) / mp.mpc(0, 2)
        return Matrix2.of(p, q, -q, p)


def E_matrix(z, precision_bits: int = DEFAULT_PRECISION, zeta=None) -> Matrix2:
    """E(z) = N(z) M f(z)^(sigma3/4), analytic on |z - 1| < 1/2.

    Multiplying out gives (1/sqrt 2)[[h, -i/h], [-i h, 1/h]] with
    h = (f(z) (z + 1)/(z - 1))^(1/4), h(1) = 1; this form has no branch
    cut inside the disc and is what is evaluated.
    """
    with mp.workprec(precision_bits):
        z = mp.mpc(z)
        if zeta is None:
            with mp.workprec(2 * precision_bits):
                zeta = z - 1
        zeta = mp.mpc(zeta)
        if zeta == 0:
            h = mp.mpc(1)
        else:
            f = f_conformal(z, precision_bits, zeta=zeta)
            h = mp.power(f / zeta * (z + 1), mp.mpf(1) / 4)
        r = 1 / mp.sqrt(2)
        return Matrix2.of(r * h, -1j * r / h, -1j * r * h, r / h)


def E_at_one(precision_bits: int = DEFAULT_PRECISION, offset="1e-12") -> Matrix2:
    """E(1) realised as E(1 + offset)."""
    with mp.workprec(precision_bits):
        d = mp.mpf(offset)
        return E_matrix(1 + d, precision_bits, zeta=d)


# ---------------------------------------------------------------------------
# Appendix identities


def _decay_cut(bits: int):
    # K0(v)^2 v < 2^-bits well beyond v = bits ln2 / 2
    return mp.mpf(bits) * mp.ln2 / 2 + 8


def k0_moment_check(precision_bits: int = 128, scale=1):
    """int_0^oo K0(scale u)^2 u du, which equals 1/(2 scale^2).

    Tanh-sinh on [0, V] split at powers of two, V chosen where the
    integrand has decayed below 2^-precision_bits; the neglected tail is
    bounded by (pi/4) e^{-2V} (1 + 1/V) and checked.
    """
    with mp.workprec(precision_bits):
        s = mp.mpf(scale)
        V = _decay_cut(precision_bits)
        tail = mp.pi / 4 * mp.exp(-2 * V) * (1 + 1 / V)
        if tail > mp.ldexp(mp.one, -precision_bits + 4):
            raise ArithmeticError(f"tail bound {mp.nstr(tail, 3)} not met")
        pts = [mp.mpf(2) ** j for j in range(0, int(mp.log(V, 2)) + 1)]

        def g(v):
            return bessel_K0(v, precision_bits) ** 2 * v

        res = integrate_de(g, 0, V, precision_bits, singular_endpoints=(True, False), points=pts)
        if not res.reliable:
            raise ArithmeticError(f"K0 moment quadrature missed tolerance ({res.error_estimate})")
        return res.value / (s * s)


def _as_weight(k) -> WeightSpec:
    return k if isinstance(k, WeightSpec) else log_weight(k)


class ChebyshevInterpolant:
    """Degree N-1 interpolant at the first-kind Chebyshev nodes of [lo, hi].

    ``tail`` (the largest of the last two coefficients) serves as the
    interpolation error estimate.
    """

    def __init__(self, f, lo, hi, N: int):
        self.lo, self.hi = mp.mpf(lo), mp.mpf(hi)
        theta = [mp.pi * (j + mp.mpf(1) / 2) / N for j in range(N)]
        mid, half = (self.lo + self.hi) / 2, (self.hi - self.lo) / 2
        vals = [f(mid + half * mp.cos(t)) for t in theta]
        self.c = [
            2 * mp.fsum(v * mp.cos(m * t) for v, t in zip(vals, theta)) / N for m in range(N)
        ]
        self.c[0] /= 2
        self.tail = max(abs(self.c[-1]), abs(self.c[-2]))

    def __call__(self, x):
        t = (2 * x - self.lo - self.hi) / (self.hi - self.lo)
        b1 = b2 = mp.zero
        for ck in reversed(self.c[1:]):
            b1, b2 = 2 * t * b1 - b2 + ck, b1
        return t * b1 - b2 + self.c[0]


def cancellation_interpolant(weight, delta_lo, delta_hi, nodes: int = 20, precision_bits: int = 96):
    """Interpolant of D(1 + delta) as a function of delta.

    D L^2 with L = log(2k/delta) is smooth in u = 1/L (it tends to -3 pi^2
    with corrections in powers of u), so D/u^2 is interpolated in u and
    only ``nodes`` Szego evaluations are needed.
    """
    weight = _as_weight(weight)
    with mp.workprec(precision_bits):
        two_k = 2 * weight.k_value()

        def h(u):
            delta = two_k * mp.exp(-1 / u)
            D = F2_over_w_cancellation(k=weight, precision_bits=precision_bits, x_minus_1=delta)
            return D.real / (u * u)

        u_lo = 1 / mp.log(two_k / mp.mpf(delta_lo))
        u_hi = 1 / mp.log(two_k / mp.mpf(delta_hi))
        cheb = ChebyshevInterpolant(h, u_lo, u_hi, nodes)

    def D_of(delta):
        u = 1 / mp.log(two_k / delta)
        return cheb(u) * u * u

    D_of.tail = cheb.tail
    return D_of


def appendixC_leading_integral(
    n: int, k, precision_bits: int = 96, nodes: int = 20, tol=None, v_min="1e-12"
):
    """J(n), to be compared with 3 / (16 pi i n^2 log^2 n).

    Integrated in v = n acosh(s): the K0^2 log singularity sits at v = 0
    and its exponential decay sets the upper cut.  D is replaced by its
    Chebyshev interpolant (``nodes`` Szego evaluations).  The piece
    v < v_min is dropped; it is below v_min^2 log^2(v_min) in size.
    """
    if n < 1000:
        raise ValueError("n must be >= 1000")
    weight = _as_weight(k)
    if weight.is_legendre:
        return mp.mpc(0)
    with mp.workprec(precision_bits):
        if tol is None:
            tol = mp.ldexp(mp.one, -40)
        n_ = mp.mpf(n)
        lo = mp.mpf(v_min)
        upper = min(n_ * mp.acosh(1 + 1 / n_), _decay_cut(precision_bits))

        def delta(v):
            return 2 * mp.sinh(v / (2 * n_)) ** 2

        D = cancellation_interpolant(weight, delta(lo), delta(upper), nodes, precision_bits)
        if D.tail > mp.mpf("1e-6"):
            log.warning("J(%d): D interpolation tail %s", n, mp.nstr(D.tail, 3))

        def g(v):
            return bessel_K0(v, precision_bits) ** 2 * D(delta(v)) * mp.sinh(v / n_) / n_

        pts = [mp.mpf(2) ** j for j in range(-30, int(mp.log(upper, 2)) + 1) if lo < 2**j < upper]
        res = integrate_de(
            g, lo, upper, precision_bits, singular_endpoints=(False, False), points=pts, tol=tol
        )
        if not res.reliable:
            log.warning("J(%d): outer quadrature error estimate %s", n, mp.nstr(res.error_estimate, 3))
        return -res.value / (2 * mp.pi**3 * mp.mpc(0, 1))


def prop_c2_matrix(n: int, k, precision_bits: int = 96, J=None) -> Matrix2:
    """2 pi n E(1) [[0, 1], [0, 0]] E(1)^{-1} J(n), with R taken as I.

    Expected to approach 3/(16 n log^2 n) [[1, -i], [-i, -1]].
    """
    if J is None:
        J = appendixC_leading_integral(n, k, precision_bits)
    with mp.workprec(precision_bits):
        E1 = E_matrix(1, precision_bits)
        U = Matrix2.of(0, 1, 0, 0)
        return (E1 @ U @ E1.inverse()).scale(2 * mp.pi * n * J)
