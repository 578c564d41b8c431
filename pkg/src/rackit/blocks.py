"""Crossing blocks and their planar arrangements."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional

from .drawing import END0, END1, MIDDLE, Drawing, NotNormalized, _SegmentTable
from .geometry import Direction, Kind, Point, Segment, dot, intersect, perpendicular

POSITION_NAMES = {END0: "End0", MIDDLE: "Middle", END1: "End1"}


class DirectionOverflow(RuntimeError):
    pass


class SegmentRef(NamedTuple):
    edge: str
    pos: int

    @property
    def is_end(self) -> bool:
        return self.pos != MIDDLE

    def __str__(self):
        return f"{self.edge}:{POSITION_NAMES[self.pos]}"


class Crossing(NamedTuple):
    a: SegmentRef
    b: SegmentRef
    point: Point

    @property
    def kind(self) -> str:
        ends = self.a.is_end + self.b.is_end
        return ("middle-middle", "end-middle", "end-end")[ends]


def _require_normalized(d: Drawing) -> None:
    for e in d.edges:
        if len(e.bends) != 2:
            raise NotNormalized(f"edge {e.id} has {len(e.bends)} bends; normalize first")


def all_crossings(d: Drawing, method: str = "sweep") -> list[Crossing]:
    """Every interior crossing between segments of distinct edges.

    ``method="naive"`` checks all segment pairs and is the reference oracle;
    the default sweep prefilters by bounding box and must agree with it exactly.
    """
    _require_normalized(d)
    table = _SegmentTable(d)
    found = []
    for k1, k2 in table.pairs(method):
        if k1 > k2:
            k1, k2 = k2, k1
        (i1, p1), (i2, p2) = table.owner[k1], table.owner[k2]
        if i1 == i2:
            continue
        hit = intersect(table.segs[k1], table.segs[k2])
        if hit.kind is Kind.INTERIOR_CROSS:
            found.append((k1, k2, hit.point))
    found.sort(key=lambda c: (c[0], c[1]))
    out = []
    for k1, k2, p in found:
        (i1, p1), (i2, p2) = table.owner[k1], table.owner[k2]
        out.append(Crossing(SegmentRef(d.edges[i1].id, p1), SegmentRef(d.edges[i2].id, p2), p))
    return out


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return
        if self.rank[rx] < self.rank[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        if self.rank[rx] == self.rank[ry]:
            self.rank[rx] += 1


@dataclass
class Block:
    id: int
    members: tuple[SegmentRef, ...]
    directions: tuple[Direction, ...]
    crossings: list[Crossing] = field(default_factory=list)

    @property
    def end_count(self) -> int:
        return sum(1 for r in self.members if r.is_end)

    def to_json(self) -> dict:
        return {
            "block": self.id,
            "members": len(self.members),
            "directions": [[d.dx, d.dy] for d in self.directions],
            "end": self.end_count,
            "crossings": len(self.crossings),
        }


def compute_blocks(d: Drawing, crossings: Optional[list[Crossing]] = None) -> list[Block]:
    _require_normalized(d)
    if crossings is None:
        crossings = all_crossings(d)
    index = {}
    refs = []
    for e in d.edges:
        for pos in (END0, MIDDLE, END1):
            index[(e.id, pos)] = len(refs)
            refs.append(SegmentRef(e.id, pos))
    uf = UnionFind(len(refs))
    for c in crossings:
        uf.union(index[c.a], index[c.b])

    groups: dict[int, list[int]] = {}
    for k in range(len(refs)):
        groups.setdefault(uf.find(k), []).append(k)
    by_root = {}
    blocks = []
    for root, ks in sorted(groups.items(), key=lambda kv: kv[1][0]):
        members = tuple(refs[k] for k in ks)
        dirs = sorted({Direction.of_segment(d.segment(r.edge, r.pos)) for r in members})
        if len(dirs) > 2 or (len(dirs) == 2 and not perpendicular(dirs[0], dirs[1])):
            raise DirectionOverflow(f"block of {members[0]} has directions {[str(x) for x in dirs]}")
        by_root[root] = len(blocks)
        blocks.append(Block(len(blocks), members, tuple(dirs)))
    for c in crossings:
        blocks[by_root[uf.find(index[c.a])]].crossings.append(c)
    return blocks


# ----------------------------------------------------------------------------
# arrangement


class NodeKind:
    TERMINAL = "Terminal"
    BEND = "Bend"
    CROSSING = "Crossing"


@dataclass(frozen=True)
class Node:
    point: Point
    kind: str
    vertex: Optional[str] = None
    edge: Optional[str] = None


@dataclass(frozen=True)
class Arc:
    u: int
    v: int
    segment: SegmentRef
    length: Fraction  # in units of the block's common direction norm


@dataclass
class ArrangementGraph:
    block: int
    nodes: list[Node]
    arcs: list[Arc]
    terminals: list[int]
    _adj: list = field(default=None, repr=False)

    def adjacency(self) -> list[list[tuple[int, int]]]:
        """Per node, (arc id, neighbour) pairs in arc order."""
        if self._adj is None:
            adj: list[list[tuple[int, int]]] = [[] for _ in self.nodes]
            for k, a in enumerate(self.arcs):
                adj[a.u].append((k, a.v))
                adj[a.v].append((k, a.u))
            self._adj = adj
        return self._adj

    def degree(self, node: int) -> int:
        return len(self.adjacency()[node])

    def is_connected(self) -> bool:
        if not self.nodes:
            return True
        adj = self.adjacency()
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for _, w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.nodes)


def build_arrangement(b: Block, d: Drawing) -> ArrangementGraph:
    """Nodes are segment endpoints and crossings; each graph-vertex endpoint of
    an end segment becomes its own degree-1 terminal node."""
    nodes: list[Node] = []
    shared: dict[Point, int] = {}
    on_segment: dict[SegmentRef, list[Point]] = {r: [] for r in b.members}
    for c in b.crossings:
        on_segment[c.a].append(c.point)
        on_segment[c.b].append(c.point)

    def shared_node(p: Point, kind: str) -> int:
        k = shared.get(p)
        if k is None:
            k = shared[p] = len(nodes)
            nodes.append(Node(p, kind))
        return k

    arcs: list[Arc] = []
    terminals: list[int] = []
    for ref in b.members:
        e = d.edge(ref.edge)
        seg = d.segment(ref.edge, ref.pos)
        ends = []
        for p, outer, vid in ((seg.a, ref.pos == END0, e.tail), (seg.b, ref.pos == END1, e.head)):
            if outer:
                k = len(nodes)
                nodes.append(Node(p, NodeKind.TERMINAL, vid, e.id))
                terminals.append(k)
            else:
                k = shared_node(p, NodeKind.BEND)
            ends.append(k)
        v = seg.vector
        norm2 = dot(v, v)
        inner = sorted(set(on_segment[ref]), key=lambda p: dot(p - seg.a, v))
        chain = [ends[0]] + [shared_node(p, NodeKind.CROSSING) for p in inner] + [ends[1]]
        params = [Fraction(0)] + [Fraction(dot(p - seg.a, v), norm2) for p in inner] + [Fraction(1)]
        unit = _unit_scale(v)
        for k in range(len(chain) - 1):
            arcs.append(Arc(chain[k], chain[k + 1], ref, (params[k + 1] - params[k]) * unit))
    return ArrangementGraph(b.id, nodes, arcs, terminals)


def _unit_scale(v) -> Fraction:
    """Length of v measured in multiples of its primitive direction vector."""
    d = Direction.of(v[0], v[1])
    return abs(Fraction(v[0], d.dx) if d.dx != 0 else Fraction(v[1], d.dy))
