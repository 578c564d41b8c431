"""Extract the plane ortho-fin multigraph H from a normalized RAC_2 drawing.

Per block: a tree in the arrangement spanning all terminals, a pairing of
floor(k/2) terminals along pairwise arc-disjoint tree paths, and one H edge
per pair.  Each H edge represents the (at most two) drawing edges whose end
segments carry its first and last arcs.
"""
from __future__ import annotations

import heapq
import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .blocks import ArrangementGraph, Block, build_arrangement, compute_blocks
from .drawing import Drawing
from .geometry import angle_key, orientation
from .multigraph import Multigraph, OrthoFinEdge, PlanarityViolation, plane_violations


class DisjointnessViolation(RuntimeError):
    pass


class OrthoFinViolation(RuntimeError):
    pass


@dataclass(frozen=True)
class TerminalTree:
    arcs: frozenset[int]
    nodes: frozenset[int]
    root: Optional[int]


@dataclass(frozen=True)
class TerminalPairing:
    tree: TerminalTree
    pairs: tuple[tuple[int, int], ...]
    paths: tuple[tuple[int, ...], ...]  # node sequences, first and last are the paired terminals
    arc_paths: tuple[tuple[int, ...], ...]
    unmatched: Optional[int]


def spanning_terminal_tree(a: ArrangementGraph) -> TerminalTree:
    """Shortest-path tree from the first terminal, pruned until every leaf is a terminal."""
    if not a.terminals:
        return TerminalTree(frozenset(), frozenset(), None)
    root = a.terminals[0]
    adj = a.adjacency()
    dist: dict[int, Fraction] = {root: Fraction(0)}
    via: dict[int, int] = {}
    heap = [(Fraction(0), root)]
    done = set()
    while heap:
        du, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for arc, w in adj[u]:
            dw = du + a.arcs[arc].length
            if w not in dist or dw < dist[w]:
                dist[w] = dw
                via[w] = arc
                heapq.heappush(heap, (dw, w))
    arcs = set(via.values())
    nodes = set(done)
    terminals = set(a.terminals)
    degree = Counter()
    for k in arcs:
        degree[a.arcs[k].u] += 1
        degree[a.arcs[k].v] += 1
    leaves = [v for v in nodes if degree[v] <= 1 and v not in terminals]
    while leaves:
        v = leaves.pop()
        nodes.discard(v)
        for arc, w in adj[v]:
            if arc in arcs:
                arcs.discard(arc)
                degree[w] -= 1
                if degree[w] <= 1 and w not in terminals and w in nodes:
                    leaves.append(w)
    missing = terminals - nodes
    if missing:
        raise ValueError(f"arrangement of block {a.block} is not connected")
    return TerminalTree(frozenset(arcs), frozenset(nodes), root)


def _chords_cross(c1, c2, order: dict) -> bool:
    a, b = sorted((order[c1[0]], order[c1[1]]))
    inside = [a < order[x] < b for x in c2]
    return inside[0] != inside[1]


def _matchings(items: list):
    """Perfect matchings of an even-length list, greedy consecutive pairing first."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for i, partner in enumerate(rest):
        for tail in _matchings(rest[:i] + rest[i + 1:]):
            yield [(first, partner)] + tail


def _choose(items: list, parent_arm, arm_key):
    """Pick pairs among items and at most one item to pass upward so no two
    routes through this node cross.  Items are arc ids or ``None`` for the node
    itself; ``arm_key`` gives the angular position of an arc around the node."""
    odd = len(items) % 2 == 1
    for k in range(len(items) if odd else 1):
        up = items[k] if odd else None
        rest = items[:k] + items[k + 1:] if odd else list(items)
        for matching in _matchings(rest):
            chords = list(matching)
            if odd and parent_arm is not None:
                chords.append((up, parent_arm))
            geometric = [c for c in chords if None not in c]
            arms = {x for c in geometric for x in c}
            order = {x: i for i, x in enumerate(sorted(arms, key=arm_key))}
            if all(not _chords_cross(c1, c2, order) for c1, c2 in itertools.combinations(geometric, 2)):
                return matching, (up if odd else None)
    raise DisjointnessViolation("no non-crossing pairing at node")


def pair_terminals(a: ArrangementGraph, tree: TerminalTree) -> TerminalPairing:
    """Bottom-up greedy pairing over the rooted tree.

    Every node passes at most one unmatched terminal to its parent, so each
    tree arc is used by at most one path.  Routes meeting at a node are paired
    so that they do not cross there.
    """
    if tree.root is None:
        return TerminalPairing(tree, (), (), (), None)
    adj = a.adjacency()
    terminals = set(a.terminals)
    children: dict[int, list[tuple[int, int]]] = {v: [] for v in tree.nodes}
    parent_arc: dict[int, Optional[int]] = {tree.root: None}
    order = [tree.root]
    for v in order:
        for arc, w in adj[v]:
            if arc in tree.arcs and w not in parent_arc:
                parent_arc[w] = arc
                children[v].append((w, arc))
                order.append(w)
    for v in children:
        children[v].sort()

    # route[v]: (terminal, node path from terminal up to v, arc path) still unmatched
    route: dict[int, Optional[tuple[int, list[int], list[int]]]] = {}
    pairs, paths, arc_paths = [], [], []
    for v in reversed(order):
        arriving = {}
        items: list = []
        if v in terminals:
            arriving[None] = (v, [v], [])
            items.append(None)
        for w, arc in children[v]:
            r = route.get(w)
            if r is not None:
                t, nodes, arcs = r
                arriving[arc] = (t, nodes + [v], arcs + [arc])
                items.append(arc)

        def arm_key(arc, v=v):
            other = a.arcs[arc].v if a.arcs[arc].u == v else a.arcs[arc].u
            p, q = a.nodes[v].point, a.nodes[other].point
            return angle_key((q.x - p.x, q.y - p.y))

        matching, up = _choose(items, parent_arc[v], arm_key)
        for x, y in matching:
            (t1, n1, a1), (t2, n2, a2) = arriving[x], arriving[y]
            pairs.append((t1, t2))
            paths.append(tuple(n1 + n2[::-1][1:]))
            arc_paths.append(tuple(a1 + a2[::-1]))
        route[v] = arriving[up] if len(items) % 2 == 1 else None
    unmatched = route[tree.root][0] if route.get(tree.root) else None

    used = Counter(arc for p in arc_paths for arc in p)
    overused = [arc for arc, k in used.items() if k > 1]
    if overused:
        raise DisjointnessViolation(f"block {a.block}: arcs {sorted(overused)} shared by several paths")
    if len(pairs) != len(a.terminals) // 2:
        raise DisjointnessViolation(f"block {a.block}: {len(pairs)} pairs for {len(a.terminals)} terminals")
    return TerminalPairing(tree, tuple(pairs), tuple(paths), tuple(arc_paths), unmatched)


def _simplify(points: list) -> tuple:
    out = [points[0]]
    for i in range(1, len(points) - 1):
        if orientation(out[-1], points[i], points[i + 1]) != 0:
            out.append(points[i])
    out.append(points[-1])
    return tuple(out)


@dataclass
class BlockExtraction:
    block: Block
    arrangement: ArrangementGraph
    pairing: TerminalPairing


def extract_blocks(d: Drawing, blocks: Optional[list[Block]] = None) -> list[BlockExtraction]:
    if blocks is None:
        blocks = compute_blocks(d)
    out = []
    for b in blocks:
        arr = build_arrangement(b, d)
        tree = spanning_terminal_tree(arr)
        out.append(BlockExtraction(b, arr, pair_terminals(arr, tree)))
    return out


def assemble_orthofin(d: Drawing, extractions: list[BlockExtraction], *, verify: bool = True) -> Multigraph:
    edges = []
    for ex in extractions:
        arr = ex.arrangement
        for idx, ((t1, t2), nodes) in enumerate(zip(ex.pairing.pairs, ex.pairing.paths)):
            n1, n2 = arr.nodes[t1], arr.nodes[t2]
            path = _simplify([arr.nodes[k].point for k in nodes])
            represents = tuple(sorted({n1.edge, n2.edge}, key=d.edge_index))
            edges.append(OrthoFinEdge(f"h{len(edges)}", n1.vertex, n2.vertex, path, represents, ex.block.id, idx))
    g = Multigraph(dict(d.vertices), tuple(edges))
    if verify:
        bad = [e.id for e in g.edges if not e.is_orthofin()]
        if bad:
            raise OrthoFinViolation(f"H edges {bad} are not ortho-fin")
        crossings = plane_violations(g)
        if crossings:
            kind, e1, e2, p = crossings[0]
            raise PlanarityViolation(f"{kind} between H edges {e1} and {e2} at {p}")
    return g


def extract(d: Drawing) -> tuple[Multigraph, list[BlockExtraction]]:
    extractions = extract_blocks(d)
    return assemble_orthofin(d, extractions), extractions
