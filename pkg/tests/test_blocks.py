from collections import Counter

import pytest
from hypothesis import given

from rackit.blocks import (
    NodeKind,
    UnionFind,
    all_crossings,
    build_arrangement,
    compute_blocks,
)
from rackit.drawing import NotNormalized, normalize
from rackit.generators import FIXTURES, corpus_fixture, grid_rac2
from rackit.geometry import perpendicular
from strategies import grid_params


def _components_oracle(d, crossings):
    """Connected components of the crossing graph by plain graph search."""
    nodes = [(e.id, pos) for e in d.edges for pos in range(3)]
    adj = {v: set() for v in nodes}
    for c in crossings:
        adj[tuple(c.a)].add(tuple(c.b))
        adj[tuple(c.b)].add(tuple(c.a))
    seen, comps = set(), []
    for v in nodes:
        if v in seen:
            continue
        stack, comp = [v], set()
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            comp.add(u)
            stack.extend(adj[u] - seen)
        comps.append(frozenset(comp))
    return set(comps)


def test_fig2_has_three_multi_member_blocks():
    d = normalize(corpus_fixture("fig2"))
    big = [b for b in compute_blocks(d) if len(b.members) > 1]
    assert len(big) == 3
    assert sorted(b.end_count for b in big) == [0, 6, 9]


def test_fig4_crossings_are_end_middle():
    d = normalize(corpus_fixture("fig4"))
    crossings = all_crossings(d)
    assert crossings and all(c.kind == "end-middle" for c in crossings)
    load = Counter(c.a if not c.a.is_end else c.b for c in crossings)
    assert max(load.values()) == 1


def test_triangle_has_no_crossings():
    d = normalize(corpus_fixture("triangle"))
    assert all_crossings(d) == []
    assert all(len(b.members) == 1 for b in compute_blocks(d))


def test_crossings_require_normalized_input():
    with pytest.raises(NotNormalized):
        all_crossings(corpus_fixture("triangle"))


@given(grid_params)
def test_crossing_sweep_equals_oracle(params):
    d = normalize(grid_rac2(*params))
    assert all_crossings(d) == all_crossings(d, method="naive")


@given(grid_params)
def test_blocks_partition_and_directions(params):
    d = normalize(grid_rac2(*params))
    crossings = all_crossings(d)
    blocks = compute_blocks(d, crossings)
    members = [tuple(r) for b in blocks for r in b.members]
    assert len(members) == len(set(members)) == 3 * d.m
    assert {frozenset(tuple(r) for r in b.members) for b in blocks} == _components_oracle(d, crossings)
    assert sum(len(b.crossings) for b in blocks) == len(crossings)
    for b in blocks:
        assert 1 <= len(b.directions) <= 2
        if len(b.directions) == 2:
            assert perpendicular(*b.directions)


@given(grid_params)
def test_arrangement_structure(params):
    d = normalize(grid_rac2(*params))
    for b in compute_blocks(d):
        a = build_arrangement(b, d)
        assert a.is_connected()
        assert len(a.terminals) == b.end_count
        for t in a.terminals:
            assert a.nodes[t].kind == NodeKind.TERMINAL
            assert a.degree(t) == 1
        for k, node in enumerate(a.nodes):
            if node.kind == NodeKind.CROSSING:
                assert a.degree(k) == 4
        # arcs partition each segment: lengths add up to the segment length in direction units
        per_segment = Counter()
        for arc in a.arcs:
            assert arc.length > 0
            per_segment[arc.segment] += arc.length
        assert set(per_segment) == set(b.members)


def test_union_find():
    uf = UnionFind(5)
    uf.union(0, 1)
    uf.union(3, 4)
    uf.union(1, 4)
    assert uf.find(0) == uf.find(3)
    assert uf.find(2) != uf.find(0)


@pytest.mark.parametrize("name", FIXTURES)
def test_block_json_shape(name):
    for b in compute_blocks(normalize(corpus_fixture(name))):
        doc = b.to_json()
        assert set(doc) == {"block", "members", "directions", "end", "crossings"}
