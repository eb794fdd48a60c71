import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from halftheta.exact import (ExtScalar, Orientation, Point, Sign, euclid_length_approx,
                             exact_sqrt_rounded, orientation, properly_intersect, scalar, sign_ext)

coords = st.integers(-50, 50)
points = st.tuples(coords, coords)
fracs = st.fractions(min_value=-100, max_value=100, max_denominator=50)


@pytest.mark.parametrize("p, q, r, want", [
    ((0, 0), (1, 0), (0, 1), Orientation.LEFT),
    ((0, 0), (1, 1), (2, 2), Orientation.COLLINEAR),
    ((0, 0), (0, 1), (1, 0), Orientation.RIGHT),
])
def test_orientation_examples(p, q, r, want):
    assert orientation(p, q, r) == want


@pytest.mark.parametrize("s1, s2, want", [
    (((0, 0), (2, 2)), ((0, 2), (2, 0)), True),
    (((0, 0), (2, 2)), ((2, 2), (3, 0)), False),
    (((0, 0), (1, 0)), ((0, 1), (1, 1)), False),
])
def test_properly_intersect_examples(s1, s2, want):
    assert properly_intersect(s1, s2) is want


def test_touching_is_not_proper():
    # endpoint of one segment in the interior of the other
    assert not properly_intersect(((0, 0), (4, 0)), ((2, 0), (2, 3)))
    # overlapping collinear segments
    assert not properly_intersect(((0, 0), (4, 0)), ((1, 0), (6, 0)))


@pytest.mark.parametrize("a, b, want", [(1, -1, Sign.NEGATIVE), (2, -1, Sign.POSITIVE), (0, 0, Sign.ZERO)])
def test_sign_ext_examples(a, b, want):
    assert sign_ext(a, b) == want


@pytest.mark.parametrize("p, q, want", [((0, 0), (3, 4), 5.0), ((0, 0), (0, 0), 0.0),
                                        ((0, 0), (1, 1), 1.4142135623730951)])
def test_length_examples(p, q, want):
    assert euclid_length_approx(p, q) == want


def test_scalar_rejects_floats():
    with pytest.raises(TypeError):
        scalar(0.5)
    assert scalar("3/6") == Fraction(1, 2)
    assert Point.of("1/3", 2) == Point(Fraction(1, 3), Fraction(2))


@given(fracs, fracs)
def test_sign_ext_matches_high_precision(a, b):
    with mpmath.workdps(80):
        v = mpmath.mpf(a.numerator) / a.denominator + mpmath.mpf(b.numerator) / b.denominator * mpmath.sqrt(3)
        want = 0 if v == 0 else (1 if v > 0 else -1)
    assert int(sign_ext(a, b)) == want


@given(fracs, fracs, fracs, fracs)
def test_ext_field_ops(a, b, c, d):
    x, y = ExtScalar(a, b), ExtScalar(c, d)
    assert (x + y) - y == x
    assert x * y == y * x
    if y != ExtScalar(0, 0):
        assert (x / y) * y == x
    assert abs(float(x * y) - float(x) * float(y)) <= 1e-9 * (1 + abs(float(x) * float(y)))
    assert (x < y) == (float(x) < float(y)) or abs(float(x) - float(y)) < 1e-9


@given(points, points, points)
def test_orientation_antisymmetric(p, q, r):
    assert int(orientation(p, q, r)) == -int(orientation(q, p, r))
    assert orientation(p, q, r) == orientation(q, r, p)


@given(points, points, points, points)
def test_proper_intersection_symmetric(a, b, c, d):
    assert properly_intersect((a, b), (c, d)) == properly_intersect((c, d), (a, b))
    assert properly_intersect((a, b), (c, d)) == properly_intersect((b, a), (d, c))


@given(st.fractions(min_value=0, max_value=10**12, max_denominator=10**6))
def test_sqrt_correctly_rounded(s):
    got = exact_sqrt_rounded(s)
    with mpmath.workdps(60):
        exact = mpmath.sqrt(mpmath.mpf(s.numerator) / s.denominator)
        # no double is strictly closer to the true root
        for nb in (math.nextafter(got, -math.inf), math.nextafter(got, math.inf)):
            assert abs(mpmath.mpf(got) - exact) <= abs(mpmath.mpf(nb) - exact)
