"""The logarithmic weight log(2k/(1-x)) on [-1, 1) and the Legendre weight."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from mpmath import mp

__all__ = [
    "WeightKind",
    "WeightSpec",
    "BoundaryValuePair",
    "BranchCutError",
    "log_weight",
    "legendre_weight",
    "eval_weight",
    "eval_weight_complex",
    "boundary_values_w",
]


class WeightKind(enum.Enum):
    LOG = "log"
    LEGENDRE = "legendre"


class BranchCutError(ValueError):
    """Point lies on a branch cut where only boundary values exist."""


@dataclass(frozen=True)
class WeightSpec:
    """Which weight, and its parameter.

    ``k`` is stored as a decimal string so the spec is hashable and can be
    re-read at any precision without binary rounding.
    """

    kind: WeightKind
    k: str | None = None
    exploratory: bool = False

    def __post_init__(self):
        if self.kind is WeightKind.LEGENDRE:
            if self.k is not None:
                raise ValueError("the Legendre weight takes no parameter")
            return
        if self.k is None:
            raise ValueError("the log weight needs k")
        with mp.workprec(64):
            try:
                k = self.k_value()
            except ValueError:
                raise ValueError(f"cannot parse k={self.k!r}") from None
        if k < 1 or (k == 1 and not self.exploratory):
            raise ValueError("k must exceed 1 (k = 1 only with exploratory=True)")

    @property
    def is_legendre(self) -> bool:
        return self.kind is WeightKind.LEGENDRE

    def k_value(self):
        """k as an mpf at the current working precision."""
        if self.k in ("e", "E"):
            return +mp.e
        return mp.mpf(self.k)

    def log2k(self):
        return mp.log(2 * self.k_value())

    def label(self) -> str:
        return "legendre" if self.is_legendre else f"log(k={self.k})"


def log_weight(k, exploratory: bool = False) -> WeightSpec:
    """WeightSpec for log(2k/(1-x)); ``k`` may be a number, decimal string or 'e'."""
    if not isinstance(k, str):
        k = mp.nstr(mp.mpf(k), 60) if not isinstance(k, int) else str(k)
    return WeightSpec(WeightKind.LOG, k.strip(), exploratory)


def legendre_weight() -> WeightSpec:
    return WeightSpec(WeightKind.LEGENDRE)


def eval_weight(spec: WeightSpec, x):
    """w(x) for real x in [-1, 1)."""
    x = mp.mpf(x)
    if x < -1 or x >= 1:
        raise ValueError("x must lie in [-1, 1)")
    if spec.is_legendre:
        return mp.one
    return mp.log(2 * spec.k_value() / (1 - x))


def eval_weight_complex(spec: WeightSpec, z):
    """Analytic continuation of w to the plane cut along [1, oo).

    Principal logarithm; satisfies w(conj z) = conj w(z).
    """
    z = mp.mpc(z)
    if z.imag == 0 and z.real >= 1:
        raise BranchCutError("w is cut along [1, oo)")
    if spec.is_legendre:
        return mp.mpc(1)
    return mp.log(2 * spec.k_value() / (1 - z))


@dataclass(frozen=True)
class BoundaryValuePair:
    plus: object
    minus: object


def boundary_values_w(spec: WeightSpec, x) -> BoundaryValuePair:
    """Limits of w on the cut x > 1 from the upper (plus) and lower half-plane.

    plus - minus = 2*pi*i.
    """
    if spec.is_legendre:
        raise ValueError("boundary values on (1, oo) are defined for the log weight only")
    x = mp.mpf(x)
    if x <= 1:
        raise ValueError("x must exceed 1")
    base = mp.log(2 * spec.k_value() / (x - 1))
    return BoundaryValuePair(mp.mpc(base, mp.pi), mp.mpc(base, -mp.pi))
