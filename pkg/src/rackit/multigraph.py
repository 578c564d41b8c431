"""Plane multigraphs with polyline edges: faces, exact face potentials and edge-count checks.

A face's potential is the sum of its interior angles at graph vertices only.
Angles are tracked exactly as a number of quarter turns plus a residual
Gaussian-integer direction that must end up on the positive real axis.
"""
from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import NamedTuple, Optional

from .drawing import DrawingFormatError, _pair, _xy, dump_json, load_json, parse_vertices
from .geometry import (
    Kind,
    Point,
    Segment,
    angle_key,
    candidate_pairs,
    common_denominator,
    ccw_angle_key,
    intersect,
    parallel,
    perpendicular,
    point,
    primitive,
)


class EmbeddingError(RuntimeError):
    """Face traversal did not close or Euler's formula failed."""


class InconsistentRotation(EmbeddingError):
    pass


class NotMultipleOfQuarterTurn(ValueError):
    pass


class PlanarityViolation(RuntimeError):
    pass


@dataclass(frozen=True)
class OrthoFinEdge:
    id: str
    tail: str
    head: str
    path: tuple[Point, ...]
    represents: tuple[str, ...] = ()
    block: Optional[int] = None
    pair: Optional[int] = None

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head

    def segments(self) -> list[Segment]:
        return [Segment(self.path[i], self.path[i + 1]) for i in range(len(self.path) - 1)]

    def end_directions(self) -> tuple[tuple[int, int], tuple[int, int]]:
        first = self.path[1] - self.path[0]
        last = self.path[-1] - self.path[-2]
        return primitive(first.x, first.y), primitive(last.x, last.y)

    def is_orthofin(self) -> bool:
        a, b = self.end_directions()
        return parallel(a, b) or perpendicular(a, b)


@dataclass(frozen=True)
class Multigraph:
    vertices: dict[str, Point]
    edges: tuple[OrthoFinEdge, ...]

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)


# ----------------------------------------------------------------------------
# text format (drawing format with unbounded bends and provenance annotations)


def to_document(g: Multigraph) -> dict:
    edges = []
    for e in g.edges:
        rec = {"id": e.id, "tail": e.tail, "head": e.head, "bends": [_xy(p) for p in e.path[1:-1]]}
        if e.represents:
            rec["represents"] = list(e.represents)
        if e.block is not None:
            rec["block"] = e.block
            rec["pair"] = e.pair
        edges.append(rec)
    return {
        "kind": "multigraph",
        "vertices": {vid: _xy(p) for vid, p in g.vertices.items()},
        "edges": edges,
    }


def serialize(g: Multigraph, fmt: str = "json") -> str:
    return dump_json(to_document(g), fmt)


def parse(text: str) -> Multigraph:
    doc = load_json(text)
    vertices = parse_vertices(doc)
    edges = []
    for k, raw in enumerate(doc.get("edges", [])):
        if not isinstance(raw, dict):
            raise DrawingFormatError(f"edge #{k} must be an object")
        eid = str(raw.get("id", k))
        tail, head = str(raw.get("tail")), str(raw.get("head"))
        for vid in (tail, head):
            if vid not in vertices:
                raise DrawingFormatError(f"edge {eid}: unknown vertex {vid!r}")
        bends = tuple(_pair(b, f"edge {eid} bend") for b in raw.get("bends", []))
        path = (vertices[tail], *bends, vertices[head])
        if any(path[i] == path[i + 1] for i in range(len(path) - 1)):
            raise DrawingFormatError(f"edge {eid}: consecutive points coincide")
        edges.append(OrthoFinEdge(eid, tail, head, path, tuple(str(r) for r in raw.get("represents", [])),
                                  raw.get("block"), raw.get("pair")))
    return Multigraph(vertices, tuple(edges))


# ----------------------------------------------------------------------------
# plane + ortho-fin verification


def _arms(path: tuple[Point, ...], p: Point) -> list[Point]:
    """Directions leaving p along the polyline, for p not an endpoint of the path."""
    arms = []
    for i in range(len(path) - 1):
        a, b = path[i], path[i + 1]
        if p == a:
            arms.append(b - a)
        elif p == b:
            arms.append(a - b)
        elif intersect((a, b), (p, p)).kind is not Kind.DISJOINT:
            arms.extend([b - a, a - b])
    return arms


def _alternate(arms1: list, arms2: list) -> bool:
    tagged = sorted([(angle_key(v), 0) for v in arms1] + [(angle_key(v), 1) for v in arms2])
    tags = [t for _, t in tagged]
    return tags in ([0, 1, 0, 1], [1, 0, 1, 0])


def plane_violations(g: Multigraph) -> list[tuple[str, str, str, Optional[Point]]]:
    # predicates are scale-invariant, so clear denominators once and work in integers
    scale = common_denominator(p for e in g.edges for p in e.path)
    if scale == 1:
        return _plane_violations(g)
    def up(p):
        return point(p.x * scale, p.y * scale)

    scaled = Multigraph({v: up(p) for v, p in g.vertices.items()},
                        tuple(replace(e, path=tuple(up(p) for p in e.path)) for e in g.edges))
    return [(kind, a, b, None if p is None else point(Fraction(p.x) / scale, Fraction(p.y) / scale))
            for kind, a, b, p in _plane_violations(scaled)]


def _plane_violations(g: Multigraph) -> list[tuple[str, str, str, Optional[Point]]]:
    """Pairs of edges that cross, overlap, or touch outside a shared end vertex.

    Two edges may meet at an interior point of both without crossing (they
    touch and separate locally); that is allowed, a transversal meeting is not.
    """
    segs = []
    owner = []
    for k, e in enumerate(g.edges):
        for s in e.segments():
            segs.append(s)
            owner.append(k)
    vertex_at = {p: vid for vid, p in g.vertices.items()}
    out = []
    touch_points: dict[tuple[int, int], set] = defaultdict(set)
    for i, j in candidate_pairs([s.bbox() for s in segs]):
        ki, kj = owner[i], owner[j]
        if ki == kj:
            continue
        hit = intersect(segs[i], segs[j])
        if hit.kind is Kind.DISJOINT:
            continue
        ei, ej = g.edges[ki], g.edges[kj]
        if hit.kind is Kind.INTERIOR_CROSS:
            out.append(("Cross", ei.id, ej.id, hit.point))
        elif hit.kind is Kind.OVERLAP:
            out.append(("Overlap", ei.id, ej.id, None))
        else:
            p = hit.point
            if p in vertex_at:
                vid = vertex_at[p]
                ends_i = p in (ei.path[0], ei.path[-1])
                ends_j = p in (ej.path[0], ej.path[-1])
                if not (ends_i and ends_j):
                    out.append(("ThroughVertex", ei.id, ej.id, p))
            else:
                touch_points[(min(ki, kj), max(ki, kj))].add(p)
    for (ki, kj), pts in touch_points.items():
        for p in pts:
            if _alternate(_arms(g.edges[ki].path, p), _arms(g.edges[kj].path, p)):
                out.append(("Cross", g.edges[ki].id, g.edges[kj].id, p))
    for e in g.edges:
        for p in e.path[1:-1]:
            if p in vertex_at:
                out.append(("ThroughVertex", e.id, e.id, p))
    out.sort(key=lambda r: (r[0], r[1], r[2]))
    return out


def verify_orthofin(g: Multigraph) -> list[str]:
    """Human-readable problems; empty when g is a plane ortho-fin multigraph."""
    problems = [f"edge {e.id}: first/last segments neither parallel nor perpendicular"
                for e in g.edges if not e.is_orthofin()]
    problems += [f"{kind} between {a} and {b}" for kind, a, b, _ in plane_violations(g)]
    return problems


# ----------------------------------------------------------------------------
# rotation system and faces


class HalfEdge(NamedTuple):
    edge: int
    forward: bool
    origin: str
    dest: str
    out_dir: tuple[int, int]  # leaving origin
    in_dir: tuple[int, int]  # arriving at dest, direction of travel


@dataclass
class EmbeddedMultigraph:
    graph: Multigraph
    half_edges: list[HalfEdge]
    rotation: dict[str, list[int]]  # counterclockwise outgoing half-edges per vertex
    _pos: dict[int, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for ring in self.rotation.values():
            for i, h in enumerate(ring):
                self._pos[h] = i

    @staticmethod
    def twin(h: int) -> int:
        return h ^ 1

    def next(self, h: int) -> int:
        """Next half-edge of the face to the left of h."""
        t = self.twin(h)
        ring = self.rotation[self.half_edges[t].origin]
        return ring[(self._pos[t] - 1) % len(ring)]


def embed(g: Multigraph) -> EmbeddedMultigraph:
    half_edges = []
    for k, e in enumerate(g.edges):
        first, last = e.end_directions()
        half_edges.append(HalfEdge(k, True, e.tail, e.head, first, last))
        half_edges.append(HalfEdge(k, False, e.head, e.tail, (-last[0], -last[1]), (-first[0], -first[1])))
    rotation: dict[str, list[int]] = {vid: [] for vid in g.vertices}
    for h, he in enumerate(half_edges):
        rotation[he.origin].append(h)
    for vid, ring in rotation.items():
        ring.sort(key=lambda h: angle_key(half_edges[h].out_dir))
        for a, b in zip(ring, ring[1:]):
            if angle_key(half_edges[a].out_dir) == angle_key(half_edges[b].out_dir):
                raise InconsistentRotation(f"two edges leave {vid} in the same direction")
    return EmbeddedMultigraph(g, half_edges, rotation)


class Occurrence(NamedTuple):
    vertex: str
    in_dir: tuple[int, int]
    out_dir: tuple[int, int]
    half_in: int
    half_out: int


@dataclass
class FaceWalk:
    id: int
    half_edges: tuple[int, ...]
    occurrences: tuple[Occurrence, ...]
    component: int
    is_outer: bool = False


class Potential(NamedTuple):
    quarter_turns: int

    @property
    def radians(self) -> float:
        return self.quarter_turns * math.pi / 2


def _components(g: Multigraph) -> dict[str, int]:
    parent = {v: v for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in g.edges:
        parent[find(e.tail)] = find(e.head)
    roots: dict[str, int] = {}
    comp = {}
    for v in g.vertices:
        comp[v] = roots.setdefault(find(v), len(roots))
    return comp


def faces(g: Multigraph, emb: Optional[EmbeddedMultigraph] = None) -> list[FaceWalk]:
    """Face walks by next-half-edge traversal, with the outer walk of every component marked."""
    if emb is None:
        emb = embed(g)
    comp = _components(g)
    used = [False] * len(emb.half_edges)
    walks: list[FaceWalk] = []
    walk_of = [0] * len(emb.half_edges)
    limit = len(emb.half_edges) + 1
    for start in range(len(emb.half_edges)):
        if used[start]:
            continue
        hs = []
        occ = []
        h = start
        while True:
            if used[h]:
                raise InconsistentRotation(f"half-edge {h} reached twice")
            used[h] = True
            walk_of[h] = len(walks)
            hs.append(h)
            nxt = emb.next(h)
            he, hn = emb.half_edges[h], emb.half_edges[nxt]
            occ.append(Occurrence(he.dest, he.in_dir, hn.out_dir, h, nxt))
            h = nxt
            if h == start:
                break
            if len(hs) > limit:
                raise InconsistentRotation("face walk does not close")
        walks.append(FaceWalk(len(walks), tuple(hs), tuple(occ), comp[emb.half_edges[start].origin]))

    by_comp: dict[int, list[FaceWalk]] = defaultdict(list)
    for w in walks:
        by_comp[w.component].append(w)
    for c, ws in by_comp.items():
        walks[_outer_walk(g, emb, walk_of, comp, c)].is_outer = True

    counts = Counter(comp.values())
    edge_counts = Counter(comp[e.tail] for e in g.edges)
    for c, n_c in counts.items():
        f_c = len(by_comp.get(c, ())) or 1
        if n_c - edge_counts.get(c, 0) + f_c != 2:
            raise EmbeddingError(f"Euler's formula fails on component {c}: "
                                 f"n={n_c}, m={edge_counts.get(c, 0)}, f={f_c}")
    return walks


_LEFT = (-1, 0)


def _outer_walk(g: Multigraph, emb: EmbeddedMultigraph, walk_of, comp, c: int) -> int:
    """The walk whose left side contains the ray pointing left from the lexicographically smallest point."""
    best = None
    for k, e in enumerate(g.edges):
        if comp[e.tail] != c:
            continue
        for i, p in enumerate(e.path):
            key = (Fraction(p.x), Fraction(p.y))
            if best is None or key < best[0]:
                best = (key, k, i)
    _, k, i = best
    e = g.edges[k]
    if 0 < i < len(e.path) - 1:
        p = e.path[i]
        a = primitive(*(p - e.path[i - 1]))
        b = primitive(*(e.path[i + 1] - p))
        h = 2 * k if _in_sector(a, b, _LEFT) else 2 * k + 1
        return walk_of[h]
    vid = e.tail if i == 0 else e.head
    for h in emb.rotation[vid]:
        prev_in = _incoming_before(emb, h)
        a = emb.half_edges[prev_in].in_dir
        b = emb.half_edges[h].out_dir
        if _in_sector(a, b, _LEFT):
            return walk_of[h]
    raise InconsistentRotation(f"no face contains the outer ray at {vid}")


def _incoming_before(emb: EmbeddedMultigraph, h: int) -> int:
    """The half-edge whose successor is h (they share h's origin)."""
    ring = emb.rotation[emb.half_edges[h].origin]
    nxt_out = ring[(emb._pos[h] + 1) % len(ring)]
    return emb.twin(nxt_out)


def _in_sector(a, b, d) -> bool:
    """Is direction d strictly inside the counterclockwise sector from b to -a?"""
    na = (-a[0], -a[1])
    return ccw_angle_key(b, d) < ccw_angle_key(b, na)


# ----------------------------------------------------------------------------
# potentials


def _gauss_mul(z, w):
    return (z[0] * w[0] - z[1] * w[1], z[0] * w[1] + z[1] * w[0])


def quarter_turn_angle(in_dir, out_dir) -> tuple[int, tuple[int, int]]:
    """Interior angle at an occurrence as (quarter turns, residual in [0, pi/2)).

    The angle runs counterclockwise from the outgoing direction to the reversed
    incoming one and lies in (0, 2*pi]; a spur counts a full turn.
    """
    c = (-in_dir[0], -in_dir[1])
    b = out_dir
    w = (c[0] * b[0] + c[1] * b[1], c[1] * b[0] - c[0] * b[1])
    if w[1] == 0 and w[0] > 0:
        return 4, (1, 0)
    q = 0
    while not (w[0] > 0 and w[1] >= 0):
        w = (w[1], -w[0])
        q += 1
    return q, w


def face_potential(w: FaceWalk) -> Potential:
    quarters = 0
    residual = (1, 0)
    for occ in w.occurrences:
        q, r = quarter_turn_angle(occ.in_dir, occ.out_dir)
        quarters += q
        residual = _gauss_mul(residual, r)
        # residual angle stays in [0, pi/2) after at most one quarter rotation
        if not (residual[0] > 0 and residual[1] >= 0):
            residual = (residual[1], -residual[0])
            quarters += 1
        g = math.gcd(residual[0], residual[1])
        residual = (residual[0] // g, residual[1] // g)
    if residual[1] != 0:
        raise NotMultipleOfQuarterTurn(f"face {w.id}: residual direction {residual} is not axis-aligned")
    return Potential(quarters)


def float_potential(w: FaceWalk) -> float:
    total = 0.0
    for occ in w.occurrences:
        c = (-occ.in_dir[0], -occ.in_dir[1])
        ang = math.atan2(c[1], c[0]) - math.atan2(occ.out_dir[1], occ.out_dir[0])
        ang %= 2 * math.pi
        if ang <= 1e-12:
            ang = 2 * math.pi
        total += ang
    return total


# ----------------------------------------------------------------------------
# edge-count checks


def multiplicity_stats(g: Multigraph) -> tuple[Counter, Counter]:
    loops: Counter = Counter()
    mult: Counter = Counter()
    for e in g.edges:
        if e.is_loop:
            loops[e.tail] += 1
        else:
            mult[tuple(sorted((e.tail, e.head)))] += 1
    return loops, mult


def check_theorem2(g: Multigraph, *, verify: bool = True) -> dict:
    """Per-component and global edge-count checks for a plane ortho-fin multigraph.

    Failures become counterexample records; ``ok`` is true iff there are none.
    """
    counterexamples: list[dict] = []
    if verify:
        for problem in verify_orthofin(g):
            counterexamples.append({"check": "plane-orthofin", "detail": problem})
    walks = faces(g)
    comp = _components(g)
    potentials: dict[int, int] = {}
    for w in walks:
        try:
            k = face_potential(w).quarter_turns
        except NotMultipleOfQuarterTurn as exc:
            counterexamples.append({"check": "multiple-of-quarter-turn", "face": w.id, "detail": str(exc)})
            continue
        potentials[w.id] = k
        if k < 1:
            counterexamples.append({"check": "positive-potential", "face": w.id, "quarter_turns": k})

    n_by = Counter(comp.values())
    m_by = Counter(comp[e.tail] for e in g.edges)
    walks_by: dict[int, list[FaceWalk]] = defaultdict(list)
    for w in walks:
        walks_by[w.component].append(w)
    components = []
    for c in sorted(n_by):
        ws = walks_by.get(c, [])
        n_c, m_c = n_by[c], m_by.get(c, 0)
        ks = [potentials[w.id] for w in ws if w.id in potentials]
        if ws:
            f_c, total = len(ws), sum(ks)
        else:
            f_c, total, ks = 1, 4, [4]  # isolated vertex: one face, full turn
        rec = {
            "component": c, "n": n_c, "m": m_c, "f": f_c,
            "min_quarter_turns": min(ks) if ks else None,
            "max_quarter_turns": max(ks) if ks else None,
            "sum_quarter_turns": total,
            "sum_eq_4n": total == 4 * n_c,
            "f_le_4n": f_c <= 4 * n_c,
            "m_le_5n_minus_2": m_c <= 5 * n_c - 2,
        }
        components.append(rec)
        for key in ("sum_eq_4n", "f_le_4n", "m_le_5n_minus_2"):
            if not rec[key] and len(ks) == f_c:
                counterexamples.append({"check": key, "component": c})

    loops, mult = multiplicity_stats(g)
    for v, k in sorted(loops.items()):
        if k > 3:
            counterexamples.append({"check": "loops-per-vertex", "vertex": v, "count": k})
    for pair, k in sorted(mult.items()):
        if k > 8:
            counterexamples.append({"check": "multiplicity", "vertices": list(pair), "count": k})
    n, m = g.n, g.m
    if n >= 1 and m > 5 * n - 2:
        counterexamples.append({"check": "m_le_5n_minus_2", "n": n, "m": m})
    return {
        "n": n,
        "m": m,
        "faces": len(walks),
        "components": components,
        "face_quarter_turns": [potentials.get(w.id) for w in walks],
        "outer_faces": [w.id for w in walks if w.is_outer],
        "max_loops_per_vertex": max(loops.values(), default=0),
        "max_multiplicity": max(mult.values(), default=0),
        "m_le_5n_minus_2": n >= 1 and m <= 5 * n - 2,
        "counterexamples": counterexamples,
        "ok": not counterexamples,
    }
