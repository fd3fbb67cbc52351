"""Extended-precision quadrature: Gauss-Legendre rules and tanh-sinh.

Both engines work at an explicit binary precision.  Nodes are cached per
(size, precision) so repeated integrations only pay for integrand calls.

The tanh-sinh rule is stored as pairs (d, w) where ``d`` is the distance of
the node from the nearer endpoint of [-1, 1].  Keeping the distance rather
than the node itself means an integrand written in endpoint-distance
coordinates sees its singular point with full relative accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import mpmath
from mpmath import mp

__all__ = [
    "QuadratureError",
    "QuadratureRule",
    "IntegrationResult",
    "gauss_legendre_rule",
    "integrate_de",
    "integrate_gauss",
    "DEFAULT_PRECISION",
]

DEFAULT_PRECISION = 256


class QuadratureError(ArithmeticError):
    """Raised when node construction fails to converge."""


@dataclass(frozen=True)
class QuadratureRule:
    nodes: tuple
    weights: tuple
    precision_bits: int
    interval: tuple = (-1, 1)

    def __len__(self) -> int:
        return len(self.nodes)

    def scaled(self, lo, hi) -> "QuadratureRule":
        """Affine image of the rule on ``[lo, hi]``."""
        with mp.workprec(self.precision_bits):
            lo, hi = mp.mpf(lo), mp.mpf(hi)
            a, b = self.interval
            s = (hi - lo) / (b - a)
            nodes = tuple(lo + (x - a) * s for x in self.nodes)
            weights = tuple(w * s for w in self.weights)
        return QuadratureRule(nodes, weights, self.precision_bits, (lo, hi))

    def apply(self, f: Callable):
        """Sum ``w_i f(x_i)`` at the rule's precision."""
        with mp.workprec(self.precision_bits):
            return mp.fsum(w * f(x) for x, w in zip(self.nodes, self.weights))


@dataclass(frozen=True)
class IntegrationResult:
    value: object
    error_estimate: object
    evaluations: int
    reliable: bool = True

    def __iter__(self):
        # allows ``value, err = integrate_de(...)[:2]`` style unpacking
        yield self.value
        yield self.error_estimate


# --------------------------------------------------------------------------
# Gauss-Legendre
# --------------------------------------------------------------------------

_GL_CACHE: dict = {}


def _legendre_newton(n: int, x, tol):
    """Newton iteration for a root of P_n starting from ``x``."""
    for _ in range(100):
        p0, p1 = mp.one, x
        for j in range(2, n + 1):
            p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
        # P_n'(x) from P_n and P_{n-1}
        dp = n * (x * p1 - p0) / (x * x - 1)
        dx = p1 / dp
        x -= dx
        if abs(dx) <= tol:
            return x, dp
    return None, None


def gauss_legendre_rule(n: int, precision_bits: int = DEFAULT_PRECISION) -> QuadratureRule:
    """n-point Gauss-Legendre rule on [-1, 1].

    Nodes are refined by Newton iteration on the three-term recurrence for
    P_n, starting from the classical cosine approximation.  Only the
    non-negative half is computed; the rule is mirrored.

    Raises
    ------
    QuadratureError
        If Newton fails to converge for some node (the index is reported).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    key = (n, precision_bits)
    if key in _GL_CACHE:
        return _GL_CACHE[key]
    with mp.workprec(precision_bits + 16):
        tol = mp.ldexp(mp.one, -precision_bits - 4)
        half = []
        for i in range(1, n // 2 + 1):
            guess = math.cos(math.pi * (i - 0.25) / (n + 0.5))
            guess += (1 - 1 / n) / (8 * n * n) * guess  # Tricomi correction
            x, dp = _legendre_newton(n, mp.mpf(guess), tol)
            if x is None:
                raise QuadratureError(f"Gauss-Legendre node {i} of n={n} did not converge")
            # one more evaluation at the converged point for the weight
            p0, p1 = mp.one, x
            for j in range(2, n + 1):
                p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
            dp = n * (x * p1 - p0) / (x * x - 1)
            half.append((x, 2 / ((1 - x * x) * dp * dp)))
        nodes, weights = [], []
        # half runs from the largest node down
        for x, w in half:
            nodes.append(-x)
            weights.append(w)
        if n % 2:
            # P_n'(0) for odd n from the recurrence at x = 0
            p0, p1 = mp.one, mp.zero
            for j in range(2, n + 1):
                p0, p1 = p1, (-(j - 1) * p0) / j
            dp = n * (0 * p1 - p0) / (-1)
            nodes.append(mp.zero)
            weights.append(2 / (dp * dp))
        for x, w in reversed(half):
            nodes.append(x)
            weights.append(w)
    with mp.workprec(precision_bits):
        rule = QuadratureRule(
            tuple(+x for x in nodes), tuple(+w for w in weights), precision_bits, (-1, 1)
        )
    _GL_CACHE[key] = rule
    return rule


def integrate_gauss(f: Callable, lo, hi, n: int, precision_bits: int = DEFAULT_PRECISION):
    """Integrate ``f`` over ``[lo, hi]`` with an n-point Gauss-Legendre rule."""
    return gauss_legendre_rule(n, precision_bits).scaled(lo, hi).apply(f)


# --------------------------------------------------------------------------
# tanh-sinh
# --------------------------------------------------------------------------

_TS_CACHE: dict = {}


def _ts_level(level: int, precision_bits: int):
    """New (d, w) pairs of tanh-sinh level ``level`` on [-1, 1].

    Level 0 has step h = 1 and includes tau = 0; level l > 0 adds the odd
    multiples of h = 2**-l.  Weights exclude the factor h.  The node list is
    truncated once the endpoint distance falls below 2**(-2p), which keeps
    the neglected tail of an inverse-square-root singularity below 2**-p.
    """
    key = (level, precision_bits)
    if key in _TS_CACHE:
        return _TS_CACHE[key]
    out = []
    with mp.workprec(precision_bits + 20):
        h = mp.ldexp(mp.one, -level)
        dmin = mp.ldexp(mp.one, -2 * precision_bits)
        halfpi = mp.pi / 2
        step = 1 if level == 0 else 2
        j = 0 if level == 0 else 1
        while True:
            tau = j * h
            u = halfpi * mp.sinh(tau)
            cu = mp.cosh(u)
            d = 1 / (mp.exp(u) * cu)
            w = halfpi * mp.cosh(tau) / (cu * cu)
            if d < dmin:
                break
            out.append((d, w, j == 0))
            j += step
    with mp.workprec(precision_bits):
        out = [(+d, +w, c) for d, w, c in out]
    _TS_CACHE[key] = out
    return out


def _panel_sum(f, lo, hi, nodes, skip_lo, skip_hi):
    prec = mp.prec
    half = (hi - lo) / 2
    total = mp.zero
    mag = mp.zero
    count = 0
    for d, w, centre in nodes:
        if centre:
            v = f(lo + half)
            total += w * v
            mag += w * abs(v)
            count += 1
            continue
        # node coordinates carry 2p bits so that an integrand forming
        # (endpoint - x) gets the distance correctly rounded
        with mp.workprec(2 * prec + 20):
            off = half * d
            pair = ((lo + off, skip_lo), (hi - off, skip_hi))
        for x, skip in pair:
            if skip and (x == lo or x == hi):
                continue
            v = f(x)
            total += w * v
            mag += w * abs(v)
            count += 1
    return total * half, mag * half, count


def _integrate_panel(f, lo, hi, tol, max_level, skip_lo, skip_hi, min_level):
    prec = mp.prec
    evals = 0
    prev = None
    s_sum = mp.zero
    m_sum = mp.zero
    err = mp.inf
    for level in range(0, max_level + 1):
        h = mp.ldexp(mp.one, -level)
        t, m, c = _panel_sum(f, lo, hi, _ts_level(level, prec), skip_lo, skip_hi)
        evals += c
        s_sum += t
        m_sum += m
        value = s_sum * h
        if prev is not None:
            err = abs(value - prev)
            if level >= min_level and err <= tol * max(m_sum * h, mp.ldexp(mp.one, -prec)):
                return value, err, evals, True
        prev = value
    return value, err, evals, False


def integrate_de(
    f: Callable,
    lo,
    hi,
    precision_bits: int = DEFAULT_PRECISION,
    singular_endpoints: tuple = (True, True),
    points: Sequence = (),
    tol=None,
    max_level: int | None = None,
    min_level: int = 3,
) -> IntegrationResult:
    """Double-exponential (tanh-sinh) integral of ``f`` over ``[lo, hi]``.

    Parameters
    ----------
    f : callable
        Real- or complex-valued integrand taking an mpf.
    lo, hi : number
        Finite limits.
    precision_bits : int
        Working precision.
    singular_endpoints : (bool, bool)
        Flags for the lower/upper limit.  At a flagged endpoint, nodes that
        round onto the endpoint itself are skipped instead of evaluated.
    points : sequence
        Interior breakpoints; each subinterval is integrated separately.
    tol : number, optional
        Relative tolerance against the L1 magnitude of the integrand.
        Defaults to ``2**-(precision_bits - 8)``.
    max_level : int, optional
        Cap on the refinement level (step ``2**-level``).

    Returns
    -------
    IntegrationResult
        ``error_estimate`` is the difference between the two finest levels,
        summed over panels.  ``reliable`` is False if any panel hit the
        level cap before meeting the tolerance.
    """
    with mp.workprec(precision_bits):
        lo, hi = mp.mpf(lo), mp.mpf(hi)
        if tol is None:
            tol = mp.ldexp(mp.one, -(precision_bits - 8))
        else:
            tol = mp.mpf(tol)
        if max_level is None:
            max_level = 6 + int(math.log2(max(precision_bits, 64)))
        sign = 1
        if hi < lo:
            lo, hi, sign = hi, lo, -1
            singular_endpoints = singular_endpoints[::-1]
        cuts = [lo] + sorted(mp.mpf(p) for p in points if lo < p < hi) + [hi]
        total = mp.zero
        err = mp.zero
        evals = 0
        ok = True
        last = len(cuts) - 2
        for i, (a, b) in enumerate(zip(cuts[:-1], cuts[1:])):
            v, e, c, good = _integrate_panel(
                f,
                a,
                b,
                tol,
                max_level,
                singular_endpoints[0] if i == 0 else False,
                singular_endpoints[1] if i == last else False,
                min_level,
            )
            total += v
            err += e
            evals += c
            ok = ok and good
        return IntegrationResult(sign * total, +err, evals, ok)


def geometric_points(centre, scale, lo, hi, ratio=8):
    """Breakpoints ``centre +- scale * ratio**j`` lying strictly inside (lo, hi).

    Used to resolve a near-singularity of width ``scale`` at ``centre``.
    """
    pts = []
    if lo < centre < hi:
        pts.append(centre)
    s = mpmath.mpf(scale)
    while True:
        added = False
        for p in (centre - s, centre + s):
            if lo < p < hi:
                pts.append(p)
                added = True
        if not added and (centre - s <= lo and centre + s >= hi):
            break
        s *= ratio
    return pts
