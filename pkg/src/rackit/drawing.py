"""RAC_2 drawings: data model, JSON text format, normalization and validation."""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Optional

from .geometry import (
    GeometryError,
    Kind,
    Point,
    Segment,
    SlopeClass,
    as_rational,
    candidate_pairs,
    all_pairs,
    format_rational,
    intersect,
    on_segment_interior,
    perpendicular,
    pythagorean_rotations,
    rotate_rational,
    slope_class,
)

END0, MIDDLE, END1 = 0, 1, 2
ROTATION_SEARCH_DEPTH = 64


class DrawingFormatError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


class InvalidDrawing(ValueError):
    def __init__(self, report: "ValidationReport"):
        self.report = report
        first = report.violations[0] if report.violations else None
        super().__init__(f"drawing is not a valid RAC drawing: {first}")


class NoValidRotation(RuntimeError):
    pass


class NotNormalized(ValueError):
    pass


@dataclass(frozen=True)
class PolylineEdge:
    id: str
    tail: str
    head: str
    bends: tuple[Point, ...] = ()


@dataclass(frozen=True)
class Drawing:
    vertices: dict[str, Point]
    edges: tuple[PolylineEdge, ...]
    normalized: bool = False
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "_index", {e.id: i for i, e in enumerate(self.edges)})

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge(self, edge_id: str) -> PolylineEdge:
        return self.edges[self._index[edge_id]]

    def edge_index(self, edge_id: str) -> int:
        return self._index[edge_id]

    def points(self, e: PolylineEdge) -> tuple[Point, ...]:
        return (self.vertices[e.tail], *e.bends, self.vertices[e.head])

    def segments(self, e: PolylineEdge) -> list[Segment]:
        pts = self.points(e)
        return [Segment(pts[i], pts[i + 1]) for i in range(len(pts) - 1)]

    def segment(self, edge_id: str, pos: int) -> Segment:
        return self.segments(self.edge(edge_id))[pos]

    def subdrawing(self, edge_ids: Iterable[str]) -> "Drawing":
        keep = set(edge_ids)
        return Drawing(self.vertices, tuple(e for e in self.edges if e.id in keep), self.normalized)


# ----------------------------------------------------------------------------
# text format


def _coord(raw, where: str):
    if isinstance(raw, bool) or isinstance(raw, float):
        raise DrawingFormatError(f"{where}: coordinates must be rational strings or integers, got {raw!r}")
    try:
        return as_rational(raw)
    except (TypeError, ValueError, ZeroDivisionError):
        raise DrawingFormatError(f"{where}: bad rational {raw!r}") from None


def _pair(raw, where: str) -> Point:
    if not isinstance(raw, list) or len(raw) != 2:
        raise DrawingFormatError(f"{where}: expected [x, y]")
    return Point(_coord(raw[0], where), _coord(raw[1], where))


def load_json(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DrawingFormatError(f"syntax error: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise DrawingFormatError("top level must be an object", 1, 1)
    return doc


def parse_vertices(doc: dict) -> dict[str, Point]:
    raw = doc.get("vertices")
    if not isinstance(raw, dict):
        raise DrawingFormatError("'vertices' must be an object")
    vertices: dict[str, Point] = {}
    seen: dict[Point, str] = {}
    for vid, xy in raw.items():
        p = _pair(xy, f"vertex {vid}")
        if p in seen:
            raise DrawingFormatError(f"vertices {seen[p]} and {vid} are coincident")
        seen[p] = vid
        vertices[vid] = p
    return vertices


def _check_duplicate_keys(text: str) -> None:
    def hook(pairs):
        keys = [k for k, _ in pairs]
        dup = {k for k in keys if keys.count(k) > 1}
        if dup:
            raise DrawingFormatError(f"duplicate key {sorted(dup)[0]!r}")
        return dict(pairs)

    try:
        json.loads(text, object_pairs_hook=hook)
    except json.JSONDecodeError:
        pass


def parse(text: str, *, max_bends: Optional[int] = 2) -> Drawing:
    doc = load_json(text)
    _check_duplicate_keys(text)
    vertices = parse_vertices(doc)
    raw_edges = doc.get("edges", [])
    if not isinstance(raw_edges, list):
        raise DrawingFormatError("'edges' must be a list")
    edges = []
    ids = set()
    for k, raw in enumerate(raw_edges):
        edges.append(_parse_edge(raw, k, vertices, max_bends))
        if edges[-1].id in ids:
            raise DrawingFormatError(f"duplicate edge id {edges[-1].id!r}")
        ids.add(edges[-1].id)
    return Drawing(vertices, tuple(edges), bool(doc.get("normalized", False)))


def _parse_edge(raw, k: int, vertices: dict[str, Point], max_bends: Optional[int]) -> PolylineEdge:
    if not isinstance(raw, dict):
        raise DrawingFormatError(f"edge #{k} must be an object")
    eid = str(raw.get("id", k))
    for key in ("tail", "head"):
        if key not in raw:
            raise DrawingFormatError(f"edge {eid}: missing {key!r}")
        if str(raw[key]) not in vertices:
            raise DrawingFormatError(f"edge {eid}: unknown vertex {raw[key]!r}")
    bends_raw = raw.get("bends", [])
    if not isinstance(bends_raw, list):
        raise DrawingFormatError(f"edge {eid}: 'bends' must be a list")
    if max_bends is not None and len(bends_raw) > max_bends:
        raise DrawingFormatError(f"edge {eid}: {len(bends_raw)} bends, at most {max_bends} allowed")
    bends = tuple(_pair(b, f"edge {eid} bend") for b in bends_raw)
    e = PolylineEdge(eid, str(raw["tail"]), str(raw["head"]), bends)
    pts = (vertices[e.tail], *bends, vertices[e.head])
    for i in range(len(pts) - 1):
        if pts[i] == pts[i + 1]:
            raise DrawingFormatError(f"edge {eid}: consecutive points coincide at {i}")
    return e


def _xy(p: Point) -> list[str]:
    return [format_rational(p.x), format_rational(p.y)]


def to_document(d: Drawing) -> dict:
    doc: dict = {
        "vertices": {vid: _xy(p) for vid, p in d.vertices.items()},
        "edges": [
            {"id": e.id, "tail": e.tail, "head": e.head, "bends": [_xy(b) for b in e.bends]}
            for e in d.edges
        ],
    }
    if d.normalized:
        doc["normalized"] = True
    return doc


def dump_json(doc: dict, fmt: str = "json") -> str:
    if fmt == "compact":
        return json.dumps(doc, separators=(",", ":")) + "\n"
    if fmt != "json":
        raise ValueError(f"unknown format {fmt!r}")
    return json.dumps(doc, indent=2) + "\n"


def serialize(d: Drawing, fmt: str = "json") -> str:
    return dump_json(to_document(d), fmt)


# ----------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    kind: str
    edges: tuple[str, ...]
    point: Optional[Point] = None

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "edges": list(self.edges),
            "point": _xy(self.point) if self.point is not None else None,
        }


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: tuple[Violation, ...]
    crossing_count: int

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "crossing_count": self.crossing_count,
            "violations": [v.to_json() for v in self.violations],
        }


class _SegmentTable:
    """Flat list of all segments of a drawing with owner bookkeeping."""

    def __init__(self, d: Drawing):
        self.owner: list[tuple[int, int]] = []
        self.segs: list[Segment] = []
        self.nseg: list[int] = []
        for i, e in enumerate(d.edges):
            segs = d.segments(e)
            self.nseg.append(len(segs))
            for pos, s in enumerate(segs):
                self.owner.append((i, pos))
                self.segs.append(s)

    def is_outer(self, k: int, p: Point) -> bool:
        """True if p is an endpoint of segment k that is a graph vertex of its edge."""
        i, pos = self.owner[k]
        s = self.segs[k]
        return (pos == 0 and p == s.a) or (pos == self.nseg[i] - 1 and p == s.b)

    def pairs(self, method: str = "sweep"):
        if method == "naive":
            return all_pairs(len(self.segs))
        return candidate_pairs([s.bbox() for s in self.segs])


def validate_rac(d: Drawing, method: str = "sweep") -> ValidationReport:
    violations: list[Violation] = []
    crossings = 0
    vertex_at = {p: vid for vid, p in d.vertices.items()}

    pair_seen: dict[frozenset, str] = {}
    for e in d.edges:
        if e.tail == e.head:
            violations.append(Violation("Loop", (e.id,), d.vertices[e.tail]))
            continue
        key = frozenset((e.tail, e.head))
        if key in pair_seen:
            violations.append(Violation("ParallelEdge", (pair_seen[key], e.id)))
        else:
            pair_seen[key] = e.id
        for b in e.bends:
            if b in vertex_at:
                violations.append(Violation("ThroughVertex", (e.id,), b))

    table = _SegmentTable(d)
    # vertices as zero-size boxes appended after the segments
    vids = list(d.vertices)
    nseg = len(table.segs)
    boxes = [s.bbox() for s in table.segs] + [(p.x, p.x, p.y, p.y) for p in d.vertices.values()]
    if method == "naive":
        pairs = all_pairs(len(boxes))
    else:
        pairs = candidate_pairs(boxes)

    for k1, k2 in pairs:
        if k2 >= nseg:
            if k1 >= nseg:
                continue
            p = d.vertices[vids[k2 - nseg]]
            if on_segment_interior(p, table.segs[k1]):
                violations.append(Violation("ThroughVertex", (d.edges[table.owner[k1][0]].id,), p))
            continue
        (i1, pos1), (i2, pos2) = table.owner[k1], table.owner[k2]
        hit = intersect(table.segs[k1], table.segs[k2])
        if hit.kind is Kind.DISJOINT:
            continue
        id1, id2 = d.edges[i1].id, d.edges[i2].id
        if i1 == i2:
            if abs(pos1 - pos2) == 1:
                if hit.kind is not Kind.ENDPOINT_TOUCH:
                    violations.append(Violation("Overlap", (id1,), hit.point))
            elif hit.kind is Kind.OVERLAP:
                violations.append(Violation("Overlap", (id1,), None))
            elif not (hit.kind is Kind.ENDPOINT_TOUCH and table.is_outer(k1, hit.point)
                      and table.is_outer(k2, hit.point)):  # a loop closing at its vertex
                violations.append(Violation("SelfCross", (id1,), hit.point))
            continue
        if hit.kind is Kind.INTERIOR_CROSS:
            crossings += 1
            if not perpendicular(table.segs[k1].vector, table.segs[k2].vector):
                violations.append(Violation("NonRightCrossing", (id1, id2), hit.point))
        elif hit.kind is Kind.OVERLAP:
            violations.append(Violation("Overlap", (id1, id2), None))
        elif hit.kind is Kind.ENDPOINT_TOUCH:
            p = hit.point
            if table.is_outer(k1, p) and table.is_outer(k2, p):
                continue
            if p not in vertex_at:
                violations.append(Violation("TouchingInterior", (id1, id2), p))
        else:
            if hit.point not in vertex_at:
                violations.append(Violation("TouchingInterior", (id1, id2), hit.point))
    # one geometric event can show up once per segment pair
    violations = sorted(set(violations), key=_violation_key)
    return ValidationReport(not violations, tuple(violations), crossings)


def _violation_key(v: Violation):
    pt = (Fraction(v.point.x), Fraction(v.point.y)) if v.point is not None else (Fraction(0), Fraction(0))
    return (v.kind, v.edges, v.point is None, pt)


def segment_crossing_points(d: Drawing, method: str = "sweep") -> dict[tuple[int, int], list[Point]]:
    """Interior crossing points per (edge index, segment position), for valid drawings."""
    table = _SegmentTable(d)
    out: dict[tuple[int, int], list[Point]] = defaultdict(list)
    for k1, k2 in table.pairs(method):
        if table.owner[k1][0] == table.owner[k2][0]:
            continue
        hit = intersect(table.segs[k1], table.segs[k2])
        if hit.kind is Kind.INTERIOR_CROSS:
            out[table.owner[k1]].append(hit.point)
            out[table.owner[k2]].append(hit.point)
    return out


# ----------------------------------------------------------------------------
# normalization

# canonical subdivision parameters first, then fallbacks that dodge crossing points
_THIRDS = [(Fraction(1, q), Fraction(q - 1, q)) for q in range(3, 40)]
_SPLITS = [Fraction(1, 2)] + [Fraction(k, q) for q in range(3, 40) for k in range(1, q) if Fraction(k, q).denominator == q]


def _lerp(p: Point, q: Point, t) -> Point:
    return Point(as_rational(p.x + (q.x - p.x) * t), as_rational(p.y + (q.y - p.y) * t))


def _subdivide(d: Drawing) -> Drawing:
    if all(len(e.bends) == 2 for e in d.edges):
        return d
    blocked = segment_crossing_points(d)
    edges = []
    for i, e in enumerate(d.edges):
        pts = d.points(e)
        if len(e.bends) == 0:
            busy = set(blocked.get((i, 0), ()))
            for t1, t2 in _THIRDS:
                b1, b2 = _lerp(pts[0], pts[1], t1), _lerp(pts[0], pts[1], t2)
                if b1 not in busy and b2 not in busy:
                    break
            else:
                raise GeometryError(f"edge {e.id}: no free subdivision points")
            e = replace(e, bends=(b1, b2))
        elif len(e.bends) == 1:
            s0, s1 = Segment(pts[0], pts[1]), Segment(pts[1], pts[2])
            longer = 0 if _sqlen(s0) >= _sqlen(s1) else 1
            s = (s0, s1)[longer]
            busy = set(blocked.get((i, longer), ()))
            for t in _SPLITS:
                mid = _lerp(s.a, s.b, t)
                if mid not in busy:
                    break
            else:
                raise GeometryError(f"edge {e.id}: no free subdivision point")
            e = replace(e, bends=(mid, e.bends[0]) if longer == 0 else (e.bends[0], mid))
        edges.append(e)
    return Drawing(d.vertices, tuple(edges), d.normalized)


def _sqlen(s: Segment):
    v = s.vector
    return v.x * v.x + v.y * v.y


def middle_slopes(d: Drawing) -> dict[str, SlopeClass]:
    out = {}
    for e in d.edges:
        if len(e.bends) != 2:
            raise NotNormalized(f"edge {e.id} has {len(e.bends)} bends")
        v = e.bends[1] - e.bends[0]
        out[e.id] = slope_class((v.x, v.y))
    return out


def rotate_drawing(d: Drawing, t) -> Drawing:
    vertices = {vid: rotate_rational(p, t) for vid, p in d.vertices.items()}
    edges = tuple(replace(e, bends=tuple(rotate_rational(b, t) for b in e.bends)) for e in d.edges)
    return Drawing(vertices, edges, d.normalized)


def _admissible(middles: list[Point], t) -> bool:
    c, s = t
    for v in middles:
        x = c * v.x - s * v.y
        y = s * v.x + c * v.y
        if x == 0 or y == 0:
            return False
    return True


def choose_rotation(d: Drawing, depth: int = ROTATION_SEARCH_DEPTH):
    middles = [e.bends[1] - e.bends[0] for e in d.edges]
    for t in [(1, 0)] + pythagorean_rotations(depth):
        if _admissible(middles, t):
            return t
    raise NoValidRotation(f"no admissible rotation among the first {depth} Pythagorean triples")


def normalize(d: Drawing, *, check: bool = True) -> Drawing:
    """Subdivide to exactly two bends per edge and rotate so no middle segment is axis-parallel."""
    if check:
        report = validate_rac(d)
        if not report.valid:
            raise InvalidDrawing(report)
    d = _subdivide(d)
    t = choose_rotation(d)
    if t != (1, 0):
        d = rotate_drawing(d, t)
    return Drawing(d.vertices, d.edges, True)
