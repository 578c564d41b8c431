"""Exact planar geometry kernel.

Coordinates are ``int`` or :class:`fractions.Fraction`; every predicate is
decided with exact arithmetic.  Floats never enter a decision.
"""
from __future__ import annotations

import enum
import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence


class GeometryError(ValueError):
    pass


class InvalidAngle(GeometryError):
    pass


class Point(NamedTuple):
    x: Rational
    y: Rational

    def __sub__(self, other):  # type: ignore[override]
        return Point(self.x - other.x, self.y - other.y)

    def __add__(self, other):  # type: ignore[override]
        return Point(self.x + other.x, self.y + other.y)

    def scale(self, t) -> "Point":
        return Point(self.x * t, self.y * t)


class Segment(NamedTuple):
    a: Point
    b: Point

    @property
    def vector(self) -> Point:
        return self.b - self.a

    def bbox(self):
        a, b = self.a, self.b
        return (min(a.x, b.x), max(a.x, b.x), min(a.y, b.y), max(a.y, b.y))


def as_rational(value) -> Rational:
    """Coerce to an exact scalar, keeping ints as ints."""
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, str):
        q = Fraction(value.strip())
        return q.numerator if q.denominator == 1 else q
    if isinstance(value, Rational):
        return as_rational(Fraction(value.numerator, value.denominator))
    raise TypeError(f"not an exact rational: {value!r}")


def point(x, y) -> Point:
    return Point(as_rational(x), as_rational(y))


def common_denominator(points: Iterable) -> int:
    """Least common multiple of all coordinate denominators."""
    out = 1
    for p in points:
        for c in p:
            if not isinstance(c, int):
                out = math.lcm(out, Fraction(c).denominator)
    return out


def format_rational(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Rational:
    return as_rational(text)


# ----------------------------------------------------------------------------
# vectors and directions


def cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def dot(u, v):
    return u[0] * v[0] + u[1] * v[1]


def primitive(dx, dy) -> tuple[int, int]:
    """Oriented primitive integer vector with the same direction as (dx, dy)."""
    if dx == 0 and dy == 0:
        raise GeometryError("zero vector has no direction")
    fx, fy = Fraction(dx), Fraction(dy)
    den = fx.denominator * fy.denominator // gcd(fx.denominator, fy.denominator)
    ix = int(fx * den)
    iy = int(fy * den)
    g = gcd(ix, iy)
    return ix // g, iy // g


@dataclass(frozen=True, order=True)
class Direction:
    """Unoriented direction class: primitive integer vector, lexicographically positive."""

    dx: int
    dy: int

    def __post_init__(self):
        if self.dx == 0 and self.dy == 0:
            raise GeometryError("zero direction")

    @classmethod
    def of(cls, dx, dy) -> "Direction":
        px, py = primitive(dx, dy)
        if px < 0 or (px == 0 and py < 0):
            px, py = -px, -py
        return cls(px, py)

    @classmethod
    def of_segment(cls, s: Segment) -> "Direction":
        v = s.vector
        return cls.of(v.x, v.y)

    def perpendicular_class(self) -> "Direction":
        return Direction.of(-self.dy, self.dx)

    def __iter__(self):
        yield self.dx
        yield self.dy

    def __getitem__(self, i):
        return (self.dx, self.dy)[i]

    def __str__(self):
        return f"({self.dx},{self.dy})"


def perpendicular(d1, d2) -> bool:
    return dot(d1, d2) == 0


def parallel(d1, d2) -> bool:
    return cross(d1, d2) == 0


class SlopeClass(str, enum.Enum):
    POSITIVE = "Positive"
    NEGATIVE = "Negative"
    HORIZONTAL = "Horizontal"
    VERTICAL = "Vertical"


def slope_class(d) -> SlopeClass:
    dx, dy = d[0], d[1]
    if dx == 0 and dy == 0:
        raise GeometryError("zero direction")
    if dy == 0:
        return SlopeClass.HORIZONTAL
    if dx == 0:
        return SlopeClass.VERTICAL
    return SlopeClass.POSITIVE if (dx > 0) == (dy > 0) else SlopeClass.NEGATIVE


def quadrant(v) -> int:
    """Quadrant index of a nonzero vector; each quadrant is half-open, counterclockwise."""
    x, y = v[0], v[1]
    if x > 0 and y >= 0:
        return 0
    if x <= 0 and y > 0:
        return 1
    if x < 0 and y <= 0:
        return 2
    return 3


def angle_key(v):
    """Sort key ordering nonzero vectors by counterclockwise angle in [0, 2*pi)."""
    q = quadrant(v)
    x, y = v[0], v[1]
    for _ in range(q):
        x, y = y, -x
    return (q, Fraction(y) / Fraction(x))


def ccw_angle_key(b, c):
    """Key of the counterclockwise angle from b to c, in (0, 2*pi]; 0 counts as a full turn."""
    w = (c[0] * b[0] + c[1] * b[1], c[1] * b[0] - c[0] * b[1])
    if w[1] == 0 and w[0] > 0:
        return (4, Fraction(0))
    return angle_key(w)


# ----------------------------------------------------------------------------
# predicates


def orientation(p, q, r) -> int:
    v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (v > 0) - (v < 0)


class Kind(str, enum.Enum):
    DISJOINT = "Disjoint"
    INTERIOR_CROSS = "InteriorCross"
    ENDPOINT_TOUCH = "EndpointTouch"
    TOUCH = "Touch"
    OVERLAP = "Overlap"


class Intersection(NamedTuple):
    kind: Kind
    point: Optional[Point] = None


_DISJOINT = Intersection(Kind.DISJOINT)


def intersect(s1: Sequence[Point], s2: Sequence[Point]) -> Intersection:
    """Classify how two closed segments meet.

    ``Touch`` is an endpoint of one segment lying in the relative interior of
    the other; ``EndpointTouch`` is a common endpoint and nothing else.
    """
    a, b = s1
    c, d = s2
    if (max(a[0], b[0]) < min(c[0], d[0]) or max(c[0], d[0]) < min(a[0], b[0])
            or max(a[1], b[1]) < min(c[1], d[1]) or max(c[1], d[1]) < min(a[1], b[1])):
        return _DISJOINT
    o1 = orientation(a, b, c)
    o2 = orientation(a, b, d)
    if o1 == 0 and o2 == 0:
        axis = 0 if a[0] != b[0] else 1
        lo1, hi1 = sorted((a, b), key=lambda p: p[axis])
        lo2, hi2 = sorted((c, d), key=lambda p: p[axis])
        lo = lo1 if lo1[axis] >= lo2[axis] else lo2
        hi = hi1 if hi1[axis] <= hi2[axis] else hi2
        if lo[axis] > hi[axis]:
            return _DISJOINT
        if lo[axis] == hi[axis]:
            return Intersection(Kind.ENDPOINT_TOUCH, Point(*lo))
        return Intersection(Kind.OVERLAP)
    if o1 * o2 > 0:
        return _DISJOINT
    o3 = orientation(c, d, a)
    o4 = orientation(c, d, b)
    if o3 * o4 > 0:
        return _DISJOINT
    if o1 and o2 and o3 and o4:
        r = (b[0] - a[0], b[1] - a[1])
        s = (d[0] - c[0], d[1] - c[1])
        t = Fraction(cross((c[0] - a[0], c[1] - a[1]), s)) / cross(r, s)
        return Intersection(Kind.INTERIOR_CROSS,
                            Point(as_rational(a[0] + t * r[0]), as_rational(a[1] + t * r[1])))
    if o1 == 0:
        p = c
    elif o2 == 0:
        p = d
    elif o3 == 0:
        p = a
    else:
        p = b
    if (p == a or p == b) and (p == c or p == d):
        return Intersection(Kind.ENDPOINT_TOUCH, Point(*p))
    return Intersection(Kind.TOUCH, Point(*p))


def on_segment_interior(p, s: Sequence[Point]) -> bool:
    a, b = s
    if p == a or p == b or orientation(a, b, p) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def rotate_rational(p: Point, t) -> Point:
    c, s = as_rational(t[0]), as_rational(t[1])
    if c * c + s * s != 1:
        raise InvalidAngle(f"({format_rational(c)}, {format_rational(s)}) is not on the unit circle")
    return Point(as_rational(c * p[0] - s * p[1]), as_rational(s * p[0] + c * p[1]))


def pythagorean_rotations(limit: int = 64) -> list[tuple[Fraction, Fraction]]:
    """Rational unit vectors (a/c, b/c), a < b, from primitive triples by ascending hypotenuse."""
    triples = []
    m = 2
    while True:
        if len(triples) >= limit and (m * m + 1) > triples[limit - 1][0]:
            break
        for n in range(1, m):
            if (m - n) % 2 == 1 and gcd(m, n) == 1:
                a, b, c = m * m - n * n, 2 * m * n, m * m + n * n
                triples.append((c, min(a, b), max(a, b)))
        triples.sort()
        m += 1
    return [(Fraction(a, c), Fraction(b, c)) for c, a, b in triples[:limit]]


# ----------------------------------------------------------------------------
# broad phase


def candidate_pairs(boxes: Sequence[tuple]) -> Iterator[tuple[int, int]]:
    """Yield index pairs (i, j), i < j, whose closed bounding boxes overlap.

    Boxes are ``(xmin, xmax, ymin, ymax)``.  Sweep over x with an expiry heap.
    """
    order = sorted(range(len(boxes)), key=lambda i: boxes[i][0])
    expiry: list = []
    active: set[int] = set()
    for i in order:
        xmin, _, ymin, ymax = boxes[i]
        while expiry and expiry[0][0] < xmin:
            _, j = heapq.heappop(expiry)
            active.discard(j)
        for j in active:
            bj = boxes[j]
            if bj[2] <= ymax and ymin <= bj[3]:
                yield (j, i) if j < i else (i, j)
        active.add(i)
        heapq.heappush(expiry, (boxes[i][1], i))


def all_pairs(n: int) -> Iterable[tuple[int, int]]:
    for i in range(n):
        for j in range(i + 1, n):
            yield i, j
