"""Exact arithmetic kernel.

Coordinates are rationals (:class:`fractions.Fraction`).  Quantities that
involve the cone geometry live in Q[sqrt(3)] and are held as
:class:`ExtScalar` ``a + b*sqrt(3)``.  Every predicate here is exact; floats
only come out of :func:`euclid_length_approx` and ``float(ExtScalar)``.

The predicates are written against plain ``(x, y)`` tuples so they run on
``Fraction`` as well as on the integer-scaled coordinates kept by
:class:`halftheta.cones.Instance`.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from functools import total_ordering
from numbers import Rational
from typing import NamedTuple

SQRT3 = math.sqrt(3.0)


class Orientation(enum.IntEnum):
    RIGHT = -1
    COLLINEAR = 0
    LEFT = 1


class Sign(enum.IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


def scalar(value) -> Fraction:
    """Coerce ``value`` to an exact rational.

    Accepts ints, Fractions and strings such as ``"3"`` or ``"-7/4"``.
    Floats are refused so that no rounded value sneaks into a construction.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, float):
        raise TypeError(f"floating-point coordinate {value!r} is not exact")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch in text for ch in ".eE"):
            raise ValueError(f"not an integer or p/q rational: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot use {type(value).__name__} as a coordinate")


class Point(NamedTuple):
    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x, y) -> "Point":
        return cls(scalar(x), scalar(y))

    def __str__(self):
        return f"({self.x}, {self.y})"


def cross(p, q, r):
    """Twice the signed area of triangle pqr."""
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def orient(p, q, r) -> int:
    """Sign of :func:`cross` as -1, 0 or 1."""
    d = cross(p, q, r)
    return (d > 0) - (d < 0)


def orientation(p, q, r) -> Orientation:
    return Orientation(orient(p, q, r))


def properly_intersect(s1, s2) -> bool:
    """True iff the open segments cross in exactly one point.

    Touching at an endpoint, T-junctions and collinear overlaps all
    return False.
    """
    (a, b), (c, d) = s1, s2
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    if o1 * o2 >= 0:
        return False
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    return o3 * o4 < 0


def sign_ext(a, b) -> Sign:
    """Exact sign of ``a + b*sqrt(3)`` for rational a, b."""
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sa == sb or sb == 0:
        return Sign(sa)
    if sa == 0:
        return Sign(sb)
    # opposite signs: compare a^2 with 3 b^2
    diff = a * a - 3 * b * b
    sd = (diff > 0) - (diff < 0)
    return Sign(sd * sa)


@total_ordering
class ExtScalar:
    """An element ``a + b*sqrt(3)`` of Q[sqrt(3)]."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = a
        self.b = b

    def sign(self) -> Sign:
        return sign_ext(self.a, self.b)

    def __add__(self, other):
        other = _ext(other)
        return ExtScalar(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other):
        other = _ext(other)
        return ExtScalar(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return _ext(other) - self

    def __neg__(self):
        return ExtScalar(-self.a, -self.b)

    def __mul__(self, other):
        other = _ext(other)
        return ExtScalar(self.a * other.a + 3 * self.b * other.b,
                         self.a * other.b + self.b * other.a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _ext(other)
        # multiply by the conjugate; norm is a rational
        norm = Fraction(other.a * other.a - 3 * other.b * other.b)
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q[sqrt(3)]")
        num = self * ExtScalar(other.a, -other.b)
        return ExtScalar(Fraction(num.a) / norm, Fraction(num.b) / norm)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __eq__(self, other):
        try:
            other = _ext(other)
        except TypeError:
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __lt__(self, other):
        return (self - _ext(other)).sign() < 0

    def __hash__(self):
        return hash((self.a, self.b))

    def __float__(self):
        return float(self.a) + float(self.b) * SQRT3

    def __repr__(self):
        return f"ExtScalar({self.a}, {self.b})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a} + {self.b}*sqrt(3)"


def _ext(value) -> ExtScalar:
    if isinstance(value, ExtScalar):
        return value
    if isinstance(value, (int, Rational)) and not isinstance(value, bool):
        return ExtScalar(value, 0)
    raise TypeError(f"cannot combine ExtScalar with {type(value).__name__}")


def exact_sqrt_rounded(s: Fraction) -> float:
    """sqrt(s) rounded to the nearest double (ties resolved toward the float sqrt)."""
    if s < 0:
        raise ValueError("negative radicand")
    if s == 0:
        return 0.0
    r = math.sqrt(float(s))
    while True:
        lo = math.nextafter(r, 0.0)
        hi = math.nextafter(r, math.inf)
        below = (Fraction(lo) + Fraction(r)) / 2
        above = (Fraction(r) + Fraction(hi)) / 2
        if s < below * below:
            r = lo
        elif s > above * above:
            r = hi
        else:
            return r


def euclid_length_approx(p, q) -> float:
    """|pq| correctly rounded to a double."""
    dx = Fraction(q[0]) - Fraction(p[0])
    dy = Fraction(q[1]) - Fraction(p[1])
    return exact_sqrt_rounded(dx * dx + dy * dy)
