from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, strategies as st

from halftheta.cones import (ConeRef, DegenerateDirection, Instance, NotInPositiveCone,
                             bisector_projection, canonical_triangle, cone_of, contains_point,
                             membership, subcones_of, validate_general_position)
from halftheta.exact import ExtScalar

C0 = ConeRef.pos(0)
R3 = ExtScalar(0, 1)


def inst(points, constraints=()):
    return Instance.build(points, constraints)


def test_validation_examples():
    assert validate_general_position(inst([(0, 0), (1, 2)])).ok
    rep = validate_general_position(inst([(0, 0), (2, 0)]))
    assert rep.aligned and not rep.collinear
    rep = validate_general_position(inst([(0, 0), (1, 1), (2, 2)]))
    assert rep.collinear


def test_validation_reports_crossing_constraints():
    i = inst([(0, 0), (4, 3), (0, 3), (4, 1)], [(0, 1), (2, 3)])
    rep = validate_general_position(i)
    assert rep.crossing and not rep.ok


def test_coincident_points_reported():
    assert validate_general_position(inst([(1, 2), (1, 2)])).coincident


@pytest.mark.parametrize("p, want", [((1, 2), "C0"), ((-1, -2), "Cbar0"), ((2, 1), "Cbar1")])
def test_cone_of_examples(p, want):
    assert str(cone_of((0, 0), p)) == want


def test_cone_of_on_ray():
    with pytest.raises(DegenerateDirection):
        cone_of((0, 0), (3, 0))


def test_subcone_counts():
    i = inst([(0, 0), (1, 2), (-1, 5), (1, 7)])
    assert len(subcones_of(i, 0, C0)) == 1
    i = inst([(0, 0), (1, 2), (-1, 3)], [(0, 1)])
    scs = subcones_of(i, 0, C0)
    assert len(scs) == 2
    # the splitting endpoint sits in both halves
    assert all(membership(i, sc, (1, 2)) for sc in scs)
    assert [membership(i, sc, (-1, 3)) for sc in scs] == [False, True]
    i = inst([(0, 0), (1, 2), (-1, 5), (3, 7)], [(0, 1), (0, 2)])
    assert len(subcones_of(i, 0, C0)) == 3


def test_membership_examples():
    i = inst([(0, 0), (1, 2), (2, 1)])
    sc = subcones_of(i, 0, C0)[0]
    assert membership(i, sc, (1, 2))
    assert not membership(i, sc, (2, 1))
    # refs resolve to the same subcone; non-vertex points work too
    assert membership(i, sc.ref, (Fraction(1, 3), 5))
    assert not membership(i, sc.ref, (0, 0))


def test_bisector_projection_examples():
    assert bisector_projection((0, 0), C0, (1, 2)) == 2
    assert bisector_projection((0, 0), C0, (-2, 3)) == 3
    assert bisector_projection((0, 0), ConeRef.pos(2), (3, -1)) == (3 * R3 + 1) / 2


def test_canonical_triangle_example():
    i = inst([(0, 0), (1, 2), (2, 1)])
    t = canonical_triangle(i, 0, 1)
    two = ExtScalar(2)
    assert t.corner_a == (-2 * R3 / 3, two)
    assert t.corner_b == (2 * R3 / 3, two)
    assert contains_point(t, (1, 2))
    assert contains_point(t, (0, 1))
    assert not contains_point(t, (5, 5))
    with pytest.raises(NotInPositiveCone):
        canonical_triangle(i, 0, 2)


def test_triangle_angle():
    # vertical bisector: offset 1, height 2
    t = canonical_triangle(inst([(0, 0), (1, 2)]), 0, 1)
    assert t.tan_alpha == ExtScalar(Fraction(1, 2))
    assert abs(t.alpha - float(mpmath.atan(0.5))) < 1e-15


def _oracle_cone(dx, dy):
    with mpmath.workdps(50):
        ang = mpmath.atan2(dy, dx) % (2 * mpmath.pi)
        k = int(mpmath.floor(ang / (mpmath.pi / 3)))
    # sector k lies between rays k and k+1; positive cones are the odd sectors
    return ConeRef.from_sector(k)


@given(st.integers(-40, 40), st.integers(-40, 40))
def test_cone_of_matches_angle_oracle(dx, dy):
    assume(dy != 0)
    assert cone_of((0, 0), (dx, dy)) == _oracle_cone(dx, dy)
    # a cone and its opposite swap roles when the apex does
    assert cone_of((dx, dy), (0, 0)) == cone_of((0, 0), (dx, dy)).opposite()


@given(st.integers(-40, 40), st.integers(1, 40), st.sampled_from([0, 1, 2]))
def test_projection_matches_float(dx, dy, i):
    cone = ConeRef.pos(i)
    with mpmath.workdps(30):
        ang = (2 * i + 1.5) * mpmath.pi / 3
        want = dx * mpmath.cos(ang) + dy * mpmath.sin(ang)
    assert abs(float(bisector_projection((0, 0), cone, (dx, dy))) - float(want)) < 1e-9
