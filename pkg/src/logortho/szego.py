"""The exterior map phi and the Szego function F of the log weight.

    phi(z) = z + (z^2 - 1)^(1/2)
    F(z)   = exp( (z^2 - 1)^(1/2) * int_{-1}^{1} log w(s) / (s^2 - 1)_+^(1/2) ds / (2 pi i (s - z)) )

(z^2 - 1)^(1/2) is realised as sqrt(z + 1) * sqrt(z - 1) with principal
roots: analytic off [-1, 1] and positive for z > 1.  On (-1, 1) the upper
boundary value is i sqrt(1 - s^2), so the Cauchy integral equals

    -1/(2 pi) int_{-1}^{1} log w(s) / (sqrt(1 - s^2) (s - z)) ds.

It is evaluated by tanh-sinh on the two halves [-1, 0] and [0, 1], each in
the distance to its endpoint, with geometric breakpoints around the pole
when z is close to the interval.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass

from mpmath import mp

from .quadrature import DEFAULT_PRECISION, geometric_points, integrate_de
from .weights import BoundaryValuePair, WeightSpec, eval_weight_complex, log_weight

__all__ = [
    "PhiEval",
    "SzegoEval",
    "NearCutWarning",
    "sqrt_z2m1",
    "phi",
    "phi_boundary",
    "szego_F",
    "F2_over_w_cancellation",
    "F2_over_w_near_minus1",
    "F_difference_scaling",
    "szego_limits",
]

log = logging.getLogger(__name__)


class NearCutWarning(RuntimeWarning):
    """The Szego quadrature did not reach its tolerance."""


def _as_weight(k) -> WeightSpec:
    return k if isinstance(k, WeightSpec) else log_weight(k)


def _check_off_cut(z, zeta=None):
    if zeta is not None and zeta.imag == 0 and zeta.real > 0:
        return
    if z.imag == 0 and -1 <= z.real <= 1:
        raise ValueError("z lies on [-1, 1]; use boundary values")


def sqrt_z2m1(z, zeta=None):
    """(z^2 - 1)^(1/2) on the plane cut along [-1, 1].

    ``zeta`` may carry z - 1 at higher accuracy than z itself.
    """
    z = mp.mpc(z)
    if zeta is None:
        zeta = z - 1
    return mp.sqrt(z + 1) * mp.sqrt(zeta)


@dataclass(frozen=True)
class PhiEval:
    z: object
    phi: object
    sqrt_z2m1: object


def phi(z) -> PhiEval:
    """phi(z) = z + (z^2 - 1)^(1/2) for z off [-1, 1]."""
    z = mp.mpc(z)
    _check_off_cut(z)
    r = sqrt_z2m1(z)
    return PhiEval(z, z + r, r)


def phi_boundary(x) -> BoundaryValuePair:
    """phi_(+/-)(x) = x +/- i sqrt(1 - x^2) on (-1, 1)."""
    x = mp.mpf(x)
    if not -1 < x < 1:
        raise ValueError("x must lie in (-1, 1)")
    s = mp.sqrt((1 - x) * (1 + x))
    return BoundaryValuePair(mp.mpc(x, s), mp.mpc(x, -s))


@dataclass(frozen=True)
class SzegoEval:
    z: object
    F: object
    integral_value: object
    error_estimate: object


def _half_integral(g, pole, bits, tol):
    """int_0^1 g(t) / (sqrt(t (2 - t)) (t - pole)) dt."""
    p = mp.mpc(pole)
    c = min(max(p.real, mp.zero), mp.one)
    dist = abs(p - c)
    pts = ()
    if dist < mp.mpf(1) / 4:
        pts = geometric_points(c, max(dist, mp.ldexp(mp.one, -2 * bits)), 0, 1)

    def f(t):
        return g(t) / (mp.sqrt(t * (2 - t)) * (t - p))

    return integrate_de(f, 0, 1, bits, points=pts, tol=tol)


def _cauchy_log_w(weight: WeightSpec, z, zeta, bits, tol):
    """The Cauchy integral in F's exponent; returns (value, error, reliable)."""
    log2k = weight.log2k()

    def g_right(t):  # s = 1 - t, w = log(2k / t)
        return mp.log(log2k - mp.log(t))

    def g_left(u):  # s = -1 + u, w = log(2k / (2 - u))
        return mp.log(log2k - mp.log(2 - u))

    # s - z = -(t + zeta) on the right, u - (z + 1) on the left
    right = _half_integral(g_right, -zeta, bits, tol)
    left = _half_integral(g_left, z + 1, bits, tol)
    value = (right.value - left.value) / (2 * mp.pi)
    err = (right.error_estimate + left.error_estimate) / (2 * mp.pi)
    return value, err, right.reliable and left.reliable


def szego_F(z, k, precision_bits: int = DEFAULT_PRECISION, tol=None, zeta=None) -> SzegoEval:
    """Szego function F(z) for z off [-1, 1].

    Parameters
    ----------
    z : complex
    k : WeightSpec or number
        The weight; a bare number means the log weight with that k.
    tol : optional
        Relative quadrature tolerance (default ``2**-(precision_bits // 2)``).
        Near the cut, node abscissae are only accurate to an absolute
        2**-precision_bits, which caps the attainable relative accuracy.
    zeta : optional
        z - 1 supplied separately, for points very close to 1.
    """
    weight = _as_weight(k)
    with mp.workprec(precision_bits):
        z = mp.mpc(z)
        if zeta is None:
            with mp.workprec(2 * precision_bits):
                zeta = z - 1
        zeta = mp.mpc(zeta)
        _check_off_cut(z, zeta)
        if weight.is_legendre:
            return SzegoEval(z, mp.mpc(1), mp.mpc(0), mp.zero)
        dist = min(abs(zeta), abs(z + 1), abs(z.imag) if -1 < z.real < 1 else mp.inf)
        if dist < mp.mpf("1e-6"):
            log.debug("szego_F: z = %s is within %s of [-1, 1]", mp.nstr(z, 8), mp.nstr(dist, 3))
        if tol is None:
            tol = mp.ldexp(mp.one, -(precision_bits // 2))
        value, err, ok = _cauchy_log_w(weight, z, zeta, precision_bits, tol)
        r = sqrt_z2m1(z, zeta)
        F = mp.exp(r * value)
        F_err = abs(F) * abs(r) * err
        if not ok:
            warnings.warn(
                f"Szego quadrature at z={mp.nstr(z, 8)} missed its tolerance "
                f"(error estimate {mp.nstr(F_err, 3)})",
                NearCutWarning,
                stacklevel=2,
            )
        return SzegoEval(z, F, value, F_err)


def _cancellation_at(weight, delta, bits, tol):
    # D = F^2/w_+ + F^2/w_- - 2 at x = 1 + delta, F real there
    x = 1 + delta
    F = szego_F(x, weight, bits, tol=tol, zeta=delta).F
    wpm = _w_pm(weight, delta)
    F2 = F * F
    return F2 / wpm.plus + F2 / wpm.minus - 2


def _w_pm(weight, delta):
    # boundary_values_w at x = 1 + delta without forming x
    base = mp.log(2 * weight.k_value() / delta)
    return BoundaryValuePair(mp.mpc(base, mp.pi), mp.mpc(base, -mp.pi))


def F2_over_w_cancellation(
    x=None, k="e", precision_bits: int = DEFAULT_PRECISION, x_minus_1=None, tol=None
):
    """D(x) = F^2/w_+(x) + F^2/w_-(x) - 2 for x slightly above 1.

    D(x) log^2(2k/(x - 1)) tends to -3 pi^2 as x -> 1.  Pass ``x_minus_1``
    for offsets too small to survive being added to 1.
    """
    weight = _as_weight(k)
    with mp.workprec(precision_bits):
        if x_minus_1 is None:
            with mp.workprec(2 * precision_bits):
                x_minus_1 = mp.mpf(x) - 1
        delta = mp.mpf(x_minus_1)
        if delta <= 0:
            raise ValueError("x must exceed 1")
        if weight.is_legendre:
            return mp.mpc(0)
        return _cancellation_at(weight, delta, precision_bits, tol)


def F2_over_w_near_minus1(z, k, precision_bits: int = DEFAULT_PRECISION, tol=None):
    """F(z)^2 / w(z) - 1, which is O(|z + 1|^(1/2)) as z -> -1."""
    weight = _as_weight(k)
    with mp.workprec(precision_bits):
        z = mp.mpc(z)
        if not 0 < abs(z + 1) < mp.mpf("0.1"):
            raise ValueError("need 0 < |z + 1| < 0.1")
        if weight.is_legendre:
            return mp.mpc(0)
        F = szego_F(z, weight, precision_bits, tol=tol).F
        return F * F / eval_weight_complex(weight, z) - 1


def F_difference_scaling(n: int, rho, k, precision_bits: int = DEFAULT_PRECISION, tol=None):
    """S(n) = D(1 + r) - D(1 + r~) with r = rho/n^2 and r~ = r/(1 + 1/n).

    S(n) n log^3 n stays bounded as n grows.
    """
    weight = _as_weight(k)
    with mp.workprec(precision_bits):
        if weight.is_legendre:
            return mp.mpc(0)
        r = mp.mpf(rho) / mp.mpf(n) ** 2
        rt = r / (1 + mp.one / n)
        return _cancellation_at(weight, r, precision_bits, tol) - _cancellation_at(
            weight, rt, precision_bits, tol
        )


def szego_limits(k, precision_bits: int = DEFAULT_PRECISION, z1="1e6"):
    """Estimate F_oo and F_1 in F(z) = F_oo + F_1/z + O(1/z^2).

    Two-point Richardson elimination of the 1/z term from F(z1) and
    F(2 z1); both constants are real.
    """
    weight = _as_weight(k)
    with mp.workprec(precision_bits):
        z1 = mp.mpf(z1)
        f1 = szego_F(z1, weight, precision_bits).F.real
        f2 = szego_F(2 * z1, weight, precision_bits).F.real
        f_inf = 2 * f2 - f1
        f_1 = (f1 - f_inf) * z1
        return f_inf, f_1
