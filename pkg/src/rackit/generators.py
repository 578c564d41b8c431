"""Instance generators: the extremal ortho-fin family, random RAC_2 drawings, bundled fixtures."""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Optional

from .drawing import Drawing, PolylineEdge, parse, validate_rac
from .geometry import Kind, Point, intersect, on_segment_interior, perpendicular
from .multigraph import Multigraph, OrthoFinEdge


class GenerationFailed(RuntimeError):
    pass


class UnknownFixture(KeyError):
    pass


class Family(str, enum.Enum):
    EXTREMAL_ORTHOFIN = "extremal"
    GRID_RAC2 = "grid"
    CORPUS_FIXTURE = "fixture"


@dataclass(frozen=True)
class GeneratorParams:
    family: Family
    n: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")


# ----------------------------------------------------------------------------
# extremal plane ortho-fin multigraphs with 5n - 2 edges


def _square_loop(v: Point, d1: tuple) -> tuple[Point, ...]:
    d2 = (-d1[1], d1[0])
    return (v, Point(v.x + d1[0], v.y + d1[1]), Point(v.x + d1[0] + d2[0], v.y + d1[1] + d2[1]),
            Point(v.x + d2[0], v.y + d2[1]), v)


def _pts(*xy) -> tuple[Point, ...]:
    return tuple(Point(x, y) for x, y in xy)


# eight edges between (0, 0) and (4, 0); their end directions run through the
# eight multiples of 45 degrees at both vertices, so every face gets 45 + 45
_G2_PATHS = [
    _pts((0, 0), (4, 0)),
    _pts((0, 0), (2, 2), (4, 0)),
    _pts((0, 0), (0, 3), (4, 3), (4, 0)),
    _pts((0, 0), (-1, 1), (-1, 4), (5, 4), (5, 1), (4, 0)),
    _pts((0, 0), (-2, 0), (-2, 5), (6, 5), (6, 0), (4, 0)),
    _pts((0, 0), (-1, -1), (-1, -4), (5, -4), (5, -1), (4, 0)),
    _pts((0, 0), (0, -3), (4, -3), (4, 0)),
    _pts((0, 0), (2, -2), (4, 0)),
]


def extremal_orthofin(n: int) -> Multigraph:
    """Plane ortho-fin multigraph on n vertices with 5n - 2 edges, every face of potential pi/2.

    n = 1: three unit squares at one vertex, turned apart by Pythagorean angles.
    n = 2: eight parallel edges.  Each further vertex v_k sits inside the
    triangle face next to the straight edge v1 v2, gets straight edges to v1
    and v2, a diamond loop inside the new triangle, and above it a half-plane
    loop (interior angle pi) that encloses one more diamond.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if n == 1:
        v = Point(0, 0)
        dirs = [(1, 0), (Fraction(-3, 5), Fraction(4, 5)), (Fraction(-7, 25), Fraction(-24, 25))]
        edges = tuple(OrthoFinEdge(f"e{i + 1}", "v1", "v1", _square_loop(v, d)) for i, d in enumerate(dirs))
        return Multigraph({"v1": v}, edges)

    vertices = {"v1": Point(0, 0), "v2": Point(4, 0)}
    edges = [OrthoFinEdge(f"e{i + 1}", "v1", "v2", p) for i, p in enumerate(_G2_PATHS)]
    for k in range(3, n + 1):
        h = Fraction(1, 2 ** (k - 3))
        vk = Point(2, h)
        vid = f"v{k}"
        vertices[vid] = vk
        s, r, t = h / 8, h / 4, h / 16
        x, y = vk
        new = [
            ("v1", vid, (vertices["v1"], vk)),
            (vid, "v2", (vk, vertices["v2"])),
            (vid, vid, _pts((x, y), (x + s, y - s), (x, y - 2 * s), (x - s, y - s), (x, y))),
            (vid, vid, _pts((x, y), (x + r, y), (x + r, y + r), (x - r, y + r), (x - r, y), (x, y))),
            (vid, vid, _pts((x, y), (x + t, y + t), (x, y + 2 * t), (x - t, y + t), (x, y))),
        ]
        for tail, head, path in new:
            edges.append(OrthoFinEdge(f"e{len(edges) + 1}", tail, head, tuple(Point(*p) for p in path)))
    return Multigraph(vertices, tuple(edges))


# ----------------------------------------------------------------------------
# random RAC_2 drawings


_CELL = 6
_BUCKET = 8


class _Index:
    """Uniform-bucket index over the segments and vertices placed so far."""

    def __init__(self):
        self.segs: list[tuple[Point, Point]] = []
        self.meta: list[tuple[int, int, int]] = []  # (edge, pos, nsegs)
        self.seg_buckets: dict[tuple[int, int], list[int]] = {}
        self.vertex_buckets: dict[tuple[int, int], list[Point]] = {}

    @staticmethod
    def _cells(a, b):
        x0, x1 = sorted((a.x, b.x))
        y0, y1 = sorted((a.y, b.y))
        for bx in range(int(x0) // _BUCKET, int(x1) // _BUCKET + 1):
            for by in range(int(y0) // _BUCKET, int(y1) // _BUCKET + 1):
                yield bx, by

    def add_vertex(self, p: Point) -> None:
        self.vertex_buckets.setdefault((int(p.x) // _BUCKET, int(p.y) // _BUCKET), []).append(p)

    def add_edge(self, k: int, pts: list[Point]) -> None:
        for pos in range(len(pts) - 1):
            sid = len(self.segs)
            self.segs.append((pts[pos], pts[pos + 1]))
            self.meta.append((k, pos, len(pts) - 1))
            for cell in self._cells(pts[pos], pts[pos + 1]):
                self.seg_buckets.setdefault(cell, []).append(sid)

    def near_segments(self, a, b) -> set[int]:
        out = set()
        for cell in self._cells(a, b):
            out.update(self.seg_buckets.get(cell, ()))
        return out

    def near_vertices(self, a, b) -> list[Point]:
        out = []
        for cell in self._cells(a, b):
            out.extend(self.vertex_buckets.get(cell, ()))
        return out


def _outer(p: Point, seg, pos: int, nsegs: int) -> bool:
    return (pos == 0 and p == seg[0]) or (pos == nsegs - 1 and p == seg[1])


def _compatible(index: _Index, pts: list[Point], vertex_set: set[Point]) -> bool:
    nseg = len(pts) - 1
    for b in pts[1:-1]:
        if b in vertex_set:
            return False
    segs = [(pts[i], pts[i + 1]) for i in range(nseg)]
    for i in range(nseg):
        for j in range(i + 1, nseg):
            kind = intersect(segs[i], segs[j]).kind
            if j == i + 1 and kind is not Kind.ENDPOINT_TOUCH:
                return False
            if j > i + 1 and kind is not Kind.DISJOINT:
                return False
    for pos, s in enumerate(segs):
        for p in index.near_vertices(*s):
            if on_segment_interior(p, s):
                return False
        for sid in index.near_segments(*s):
            t = index.segs[sid]
            hit = intersect(s, t)
            if hit.kind is Kind.DISJOINT:
                continue
            if hit.kind is Kind.INTERIOR_CROSS:
                if not perpendicular(s[1] - s[0], t[1] - t[0]):
                    return False
                continue
            if hit.kind is Kind.ENDPOINT_TOUCH and hit.point in vertex_set:
                _, tpos, tn = index.meta[sid]
                if _outer(hit.point, s, pos, nseg) and _outer(hit.point, t, tpos, tn):
                    continue
            return False
    return True


def _sign(rng: random.Random) -> int:
    return rng.choice((-1, 1))


def _route_axis_ends(rng: random.Random, u: Point, w: Point, reach: int) -> Optional[list[Point]]:
    """Axis-parallel end segments joined by a middle segment of slope +1 or -1."""
    kind = rng.randrange(4)
    a = _sign(rng) * rng.randint(1, reach)
    sigma = _sign(rng)
    if kind == 0:  # horizontal, vertical
        b1 = Point(u.x + a, u.y)
        dx = w.x - b1.x
        if dx == 0:
            return None
        b2 = Point(w.x, b1.y + sigma * abs(dx))
    elif kind == 1:  # vertical, horizontal
        b1 = Point(u.x, u.y + a)
        dy = w.y - b1.y
        if dy == 0:
            return None
        b2 = Point(b1.x + sigma * abs(dy), w.y)
    elif kind == 2:  # horizontal, horizontal
        b1 = Point(u.x + a, u.y)
        dy = w.y - u.y
        if dy == 0:
            return None
        b2 = Point(b1.x + sigma * abs(dy), w.y)
    else:  # vertical, vertical
        b1 = Point(u.x, u.y + a)
        dx = w.x - u.x
        if dx == 0:
            return None
        b2 = Point(w.x, b1.y + sigma * abs(dx))
    if b2 == w or b1 == b2:
        return None
    return [u, b1, b2, w]


def _route_diagonal_ends(rng: random.Random, u: Point, w: Point, reach: int) -> Optional[list[Point]]:
    """Diagonal end segments joined by an axis-parallel middle segment."""
    a = rng.randint(1, reach)
    b1 = Point(u.x + _sign(rng) * a, u.y + _sign(rng) * a)
    if rng.random() < 0.5:  # horizontal middle
        c = abs(w.y - b1.y)
        if c == 0:
            return None
        b2 = Point(w.x - _sign(rng) * c, b1.y)
    else:
        c = abs(w.x - b1.x)
        if c == 0:
            return None
        b2 = Point(b1.x, w.y - _sign(rng) * c)
    if b1 == b2 or b2 == w:
        return None
    return [u, b1, b2, w]


def grid_rac2(n: int, seed: int = 0, *, edges_per_vertex: float = 3.0, mixed: bool = False,
              attempts_per_edge: int = 30) -> Drawing:
    """Pseudorandom RAC_2 drawing on an integer grid, valid by construction.

    End segments are axis-parallel and middle segments have slope +1 or -1,
    so segments of different classes never meet and any accepted crossing is
    between perpendicular segments.  With ``mixed`` some edges instead have
    diagonal ends and an axis-parallel middle.
    """
    if n < 2:
        raise ValueError("grid_rac2 needs n >= 2")
    rng = random.Random(seed)
    side = max(2, int((n * 1.6) ** 0.5) + 1)
    cells = rng.sample(range(side * side), n)
    vertices: dict[str, Point] = {}
    cell_of: dict[tuple[int, int], str] = {}
    for i, c in enumerate(cells):
        cx, cy = divmod(c, side)
        vid = f"v{i}"
        vertices[vid] = Point(_CELL * cx + rng.randrange(_CELL), _CELL * cy + rng.randrange(_CELL))
        cell_of[(cx, cy)] = vid
    vid_list = list(vertices)
    vertex_set = set(vertices.values())
    index = _Index()
    for p in vertices.values():
        index.add_vertex(p)

    target = int(edges_per_vertex * n)
    edges: list[PolylineEdge] = []
    used_pairs: set[frozenset] = set()
    for _ in range(target * attempts_per_edge):
        if len(edges) >= target:
            break
        uid = rng.choice(vid_list)
        u = vertices[uid]
        cx, cy = int(u.x) // _CELL, int(u.y) // _CELL
        near = [cell_of[(cx + dx, cy + dy)] for dx in range(-2, 3) for dy in range(-2, 3)
                if (dx or dy) and (cx + dx, cy + dy) in cell_of]
        if not near:
            continue
        wid = rng.choice(near)
        key = frozenset((uid, wid))
        if key in used_pairs:
            continue
        route = _route_diagonal_ends if mixed and rng.random() < 0.3 else _route_axis_ends
        pts = route(rng, u, vertices[wid], _CELL)
        if pts is None or not _compatible(index, pts, vertex_set):
            continue
        index.add_edge(len(edges), pts)
        used_pairs.add(key)
        edges.append(PolylineEdge(f"e{len(edges)}", uid, wid, tuple(pts[1:-1])))
    if not edges:
        raise GenerationFailed(f"no edge could be placed (n={n}, seed={seed})")
    d = Drawing(vertices, tuple(edges))
    report = validate_rac(d)
    if not report.valid:
        raise GenerationFailed(f"generated drawing failed validation (n={n}, seed={seed}): {report.violations[0]}")
    return d


# ----------------------------------------------------------------------------
# bundled fixtures

FIXTURES = ("triangle", "x_cross", "fig2", "fig4", "horizontal_middle")


def fixture_text(name: str) -> str:
    if name not in FIXTURES:
        raise UnknownFixture(name)
    return resources.files("rackit.fixtures").joinpath(f"{name}.rac").read_text()


def corpus_fixture(name: str) -> Drawing:
    return parse(fixture_text(name))


def generate(params: GeneratorParams):
    if params.family is Family.EXTREMAL_ORTHOFIN:
        return extremal_orthofin(params.n)
    if params.family is Family.GRID_RAC2:
        return grid_rac2(params.n, params.seed)
    raise ValueError("fixtures are addressed by name; use corpus_fixture")
