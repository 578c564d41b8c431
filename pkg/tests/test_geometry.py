import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rackit.geometry import (
    Direction,
    InvalidAngle,
    Kind,
    Point,
    SlopeClass,
    all_pairs,
    angle_key,
    candidate_pairs,
    ccw_angle_key,
    common_denominator,
    format_rational,
    intersect,
    on_segment_interior,
    orientation,
    parse_rational,
    perpendicular,
    primitive,
    pythagorean_rotations,
    rotate_rational,
    slope_class,
)
from strategies import nonzero_vectors, rational, rational_points, segments

P = Point


def test_proper_crossing_point_is_exact():
    hit = intersect((P(0, 0), P(3, 3)), (P(0, 1), P(1, 0)))
    assert hit.kind is Kind.INTERIOR_CROSS
    assert hit.point == P(Fraction(1, 2), Fraction(1, 2))


@pytest.mark.parametrize("s1, s2, kind", [
    ((P(0, 0), P(2, 0)), (P(2, 0), P(2, 2)), Kind.ENDPOINT_TOUCH),
    ((P(0, 0), P(4, 0)), (P(2, 0), P(2, 2)), Kind.TOUCH),
    ((P(0, 0), P(4, 0)), (P(2, 0), P(6, 0)), Kind.OVERLAP),
    ((P(0, 0), P(2, 0)), (P(3, 0), P(6, 0)), Kind.DISJOINT),
    ((P(0, 0), P(2, 0)), (P(2, 0), P(6, 0)), Kind.ENDPOINT_TOUCH),
    ((P(0, 0), P(2, 0)), (P(0, 1), P(2, 1)), Kind.DISJOINT),
    ((P(0, 0), P(2, 2)), (P(3, 0), P(2, 1)), Kind.DISJOINT),
])
def test_intersection_kinds(s1, s2, kind):
    assert intersect(s1, s2).kind is kind


@given(segments(rational_points), segments(rational_points))
def test_intersect_symmetric_and_orientation_free(s1, s2):
    base = intersect(s1, s2)
    for a, b in ((s2, s1), (s1[::-1], s2), (s1, s2[::-1])):
        other = intersect(a, b)
        assert other.kind is base.kind
        assert other.point == base.point


@given(segments(rational_points), segments(rational_points))
def test_crossing_point_lies_inside_both(s1, s2):
    hit = intersect(s1, s2)
    if hit.kind is Kind.INTERIOR_CROSS:
        assert on_segment_interior(hit.point, s1)
        assert on_segment_interior(hit.point, s2)
    if hit.kind in (Kind.TOUCH, Kind.ENDPOINT_TOUCH):
        for s in (s1, s2):
            assert orientation(s[0], s[1], hit.point) == 0


@given(nonzero_vectors(), st.integers(1, 5))
def test_direction_is_scale_and_sign_invariant(v, k):
    d = Direction.of(*v)
    assert Direction.of(v[0] * k, v[1] * k) == d
    assert Direction.of(-v[0], -v[1]) == d
    assert math.gcd(d.dx, d.dy) == 1
    assert (d.dx, d.dy) > (0, 0)


def test_primitive_keeps_orientation():
    assert primitive(-4, 6) == (-2, 3)
    assert primitive(Fraction(1, 2), Fraction(3, 4)) == (2, 3)


def test_perpendicular_and_slope_class():
    assert perpendicular(Direction.of(1, 2), Direction.of(-2, 1))
    assert not perpendicular((1, 2), (1, 1))
    assert slope_class((2, 2)) is SlopeClass.POSITIVE
    assert slope_class((2, -3)) is SlopeClass.NEGATIVE
    assert slope_class((5, 0)) is SlopeClass.HORIZONTAL
    assert slope_class((0, -1)) is SlopeClass.VERTICAL


@given(nonzero_vectors(), nonzero_vectors())
def test_angle_key_agrees_with_atan2(u, v):
    a = math.atan2(u[1], u[0]) % (2 * math.pi)
    b = math.atan2(v[1], v[0]) % (2 * math.pi)
    if abs(a - b) > 1e-9:
        assert (angle_key(u) < angle_key(v)) == (a < b)
    else:
        assert angle_key(u) == angle_key(v)


@given(nonzero_vectors(), nonzero_vectors())
def test_ccw_angle_key_range(b, c):
    key = ccw_angle_key(b, c)
    assert (0, Fraction(0)) < key <= (4, Fraction(0))


@given(rational_points, st.integers(0, 63))
def test_rotation_preserves_norm(p, k):
    t = pythagorean_rotations()[k]
    q = rotate_rational(p, t)
    assert q.x * q.x + q.y * q.y == p.x * p.x + p.y * p.y


def test_rotation_rejects_off_circle():
    with pytest.raises(InvalidAngle):
        rotate_rational(P(1, 0), (Fraction(1, 2), Fraction(1, 2)))


def test_pythagorean_rotations_ordered_by_hypotenuse():
    rots = pythagorean_rotations(64)
    assert len(rots) == len(set(rots)) == 64
    assert rots[0] == (Fraction(3, 5), Fraction(4, 5))
    assert rots[1] == (Fraction(5, 13), Fraction(12, 13))
    hyps = [c.denominator for c, _ in rots]
    assert hyps == sorted(hyps)
    assert all(c * c + s * s == 1 and 0 < c < s for c, s in rots)


@given(st.lists(st.tuples(rational, rational, rational, rational), max_size=25))
def test_sweep_candidates_match_all_pairs(raw):
    boxes = [(min(a, b), max(a, b), min(c, d), max(c, d)) for a, b, c, d in raw]
    expected = {(i, j) for i, j in all_pairs(len(boxes))
                if boxes[i][0] <= boxes[j][1] and boxes[j][0] <= boxes[i][1]
                and boxes[i][2] <= boxes[j][3] and boxes[j][2] <= boxes[i][3]}
    got = list(candidate_pairs(boxes))
    assert len(got) == len(set(got))
    assert set(got) == expected


@given(rational)
def test_rational_text_round_trip(q):
    assert parse_rational(format_rational(q)) == q


def test_common_denominator():
    assert common_denominator([P(1, Fraction(1, 4)), P(Fraction(5, 6), 2)]) == 12
    assert common_denominator([P(1, 2)]) == 1
