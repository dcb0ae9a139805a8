"""Extended Lebesgue exponents with exact rational arithmetic.

An exponent p lives in [1, inf] with inf represented exactly (never as a
large float).  Internally everything is stored as the reciprocal 1/p, a
``Fraction`` in [0, 1], so Hoelder conjugation and the convolution exponent
relation 1/p1 + 1/p2 = 1 + 1/p are exact whenever the inputs are rational.
"""

from __future__ import annotations

import math
from fractions import Fraction


class ExponentError(ValueError):
    """Exponent outside [1, inf] or an inadmissible exponent pair."""


def _parse_inverse(value) -> Fraction:
    """Return 1/value as an exact Fraction, with 1/inf := 0."""
    if isinstance(value, Exponent):
        return value.inv
    if isinstance(value, str):
        token = value.strip().lower()
        if token in ("inf", "infinity", "oo"):
            return Fraction(0)
        try:
            value = Fraction(token)
        except (ValueError, ZeroDivisionError) as exc:
            raise ExponentError(f"cannot parse exponent {value!r}") from exc
    if isinstance(value, float):
        if math.isinf(value):
            return Fraction(0)
        if math.isnan(value):
            raise ExponentError("exponent is NaN")
        value = Fraction(value)
    if isinstance(value, (int, Fraction)):
        if value < 1:
            raise ExponentError(f"exponent must be >= 1, got {value}")
        return Fraction(1) / Fraction(value)
    raise ExponentError(f"unsupported exponent type {type(value).__name__}")


class Exponent:
    """An exponent in [1, inf], exact for rational inputs and for inf."""

    __slots__ = ("_inv",)

    def __init__(self, value):
        inv = _parse_inverse(value)
        if not (0 <= inv <= 1):
            raise ExponentError(f"exponent must lie in [1, inf], got 1/{inv}")
        self._inv = inv

    @classmethod
    def from_inverse(cls, inv: Fraction) -> "Exponent":
        if not (0 <= inv <= 1):
            raise ExponentError(f"reciprocal exponent must lie in [0, 1], got {inv}")
        obj = object.__new__(cls)
        obj._inv = Fraction(inv)
        return obj

    @property
    def inv(self) -> Fraction:
        """The reciprocal 1/p as an exact Fraction (0 means p = inf)."""
        return self._inv

    @property
    def is_inf(self) -> bool:
        return self._inv == 0

    @property
    def is_one(self) -> bool:
        return self._inv == 1

    @property
    def value(self):
        """p as a Fraction, or math.inf."""
        return math.inf if self.is_inf else 1 / self._inv

    def __float__(self) -> float:
        return math.inf if self.is_inf else float(1 / self._inv)

    def conjugate(self) -> "Exponent":
        """The Hoelder conjugate p' with 1/p + 1/p' = 1 (exact)."""
        return Exponent.from_inverse(1 - self._inv)

    def __eq__(self, other) -> bool:
        if isinstance(other, Exponent):
            return self._inv == other._inv
        try:
            return self._inv == _parse_inverse(other)
        except ExponentError:
            return NotImplemented

    def __hash__(self) -> int:
        return hash(("Exponent", self._inv))

    def __str__(self) -> str:
        return "inf" if self.is_inf else str(1 / self._inv)

    def __repr__(self) -> str:
        return f"Exponent({self})"


def holder_conjugate(p) -> Exponent:
    """Hoelder conjugate of p: 1/p + 1/p' = 1, with 1' = inf and inf' = 1."""
    return Exponent(p).conjugate()


class YoungExponents:
    """A validated triple (p1, p2, p) with 1/p1 + 1/p2 = 1 + 1/p.

    ``boundary`` is true exactly when p1 = 1, p2 = 1 or p = inf; on those
    triples the optimal convolution constant is 1 on every locally compact
    group, so numeric paths special-case them.
    """

    __slots__ = ("_p1", "_p2", "_p")

    _REL_TOL = Fraction(1, 10**12)

    def __init__(self, p1, p2, p):
        self._p1 = Exponent(p1)
        self._p2 = Exponent(p2)
        self._p = Exponent(p)
        total = self._p1.inv + self._p2.inv
        if total < 1:
            raise ExponentError(
                f"inadmissible pair: 1/{self._p1} + 1/{self._p2} < 1"
            )
        if abs(total - 1 - self._p.inv) > self._REL_TOL:
            raise ExponentError(
                f"exponent relation violated: 1/{self._p1} + 1/{self._p2} "
                f"!= 1 + 1/{self._p}"
            )

    @property
    def p1(self) -> Exponent:
        return self._p1

    @property
    def p2(self) -> Exponent:
        return self._p2

    @property
    def p(self) -> Exponent:
        return self._p

    @property
    def boundary(self) -> bool:
        return self._p1.is_one or self._p2.is_one or self._p.is_inf

    @property
    def interior(self) -> bool:
        return not self.boundary

    def swapped(self) -> "YoungExponents":
        """The triple with p1 and p2 exchanged (same p)."""
        return YoungExponents(self._p2, self._p1, self._p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, YoungExponents):
            return NotImplemented
        return (self._p1, self._p2, self._p) == (other._p1, other._p2, other._p)

    def __hash__(self) -> int:
        return hash((self._p1, self._p2, self._p))

    def __repr__(self) -> str:
        return f"YoungExponents({self._p1}, {self._p2}; p={self._p})"


def young_p(p1, p2) -> YoungExponents:
    """Solve 1/p1 + 1/p2 = 1 + 1/p for p and return the validated triple.

    p comes out as exact inf when 1/p1 + 1/p2 = 1.  Raises ExponentError
    when 1/p1 + 1/p2 < 1 (no admissible p exists).
    """
    e1, e2 = Exponent(p1), Exponent(p2)
    inv_p = e1.inv + e2.inv - 1
    if inv_p < 0:
        raise ExponentError(f"inadmissible pair ({e1}, {e2}): 1/p1 + 1/p2 < 1")
    return YoungExponents(e1, e2, Exponent.from_inverse(inv_p))
