import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rackit.geometry import Point
from rackit.generators import extremal_orthofin
from rackit.multigraph import (
    InconsistentRotation,
    Multigraph,
    NotMultipleOfQuarterTurn,
    OrthoFinEdge,
    check_theorem2,
    embed,
    face_potential,
    faces,
    float_potential,
    parse,
    plane_violations,
    quarter_turn_angle,
    serialize,
)


def _g(vertices, edges):
    vs = {k: Point(*v) for k, v in vertices.items()}
    es = tuple(OrthoFinEdge(eid, t, h, tuple(Point(*p) for p in (vertices[t], *bends, vertices[h])))
               for eid, t, h, bends in edges)
    return Multigraph(vs, es)


def subsample(g: Multigraph, rng: random.Random) -> Multigraph:
    """Random induced-and-thinned subgraph; stays plane and ortho-fin."""
    keep_v = {v for v in g.vertices if rng.random() < 0.8} or {next(iter(g.vertices))}
    edges = tuple(e for e in g.edges if e.tail in keep_v and e.head in keep_v and rng.random() < 0.7)
    return Multigraph({v: p for v, p in g.vertices.items() if v in keep_v}, edges)


def test_quarter_turn_angle_basics():
    assert quarter_turn_angle((1, 0), (0, 1))[0] == 1  # arrive heading east, leave north
    assert quarter_turn_angle((1, 0), (1, 0))[0] == 2  # straight through
    assert quarter_turn_angle((1, 0), (-1, 0)) == (4, (1, 0))  # spur


def test_single_edge_is_two_spurs():
    g = _g({"a": (0, 0), "b": (2, 0)}, [("e", "a", "b", [])])
    (w,) = faces(g)
    assert face_potential(w).quarter_turns == 8


def test_triangle_potentials_exact_with_irrational_angles():
    g = _g({"a": (0, 0), "b": (4, 0), "c": (2, 3)}, [("ab", "a", "b", []), ("bc", "b", "c", []), ("ca", "c", "a", [])])
    ks = sorted(face_potential(w).quarter_turns for w in faces(g))
    assert ks == [2, 10]


def test_outer_face_marked_per_component():
    g = _g({"a": (0, 0), "b": (4, 0), "c": (10, 0), "d": (12, 0)},
           [("ab", "a", "b", [(2, 2)]), ("ba", "a", "b", [(2, -2)]), ("cd", "c", "d", [])])
    walks = faces(g)
    outer = [w for w in walks if w.is_outer]
    assert len(outer) == 2
    assert sorted(face_potential(w).quarter_turns for w in outer) == [6, 8]


def test_non_orthofin_face_is_rejected():
    g = _g({"a": (0, 0), "b": (4, 0)}, [("s", "a", "b", []), ("t", "a", "b", [(2, 1)])])
    with pytest.raises(NotMultipleOfQuarterTurn):
        for w in faces(g):
            face_potential(w)
    report = check_theorem2(g)
    assert not report["ok"]
    checks = {c["check"] for c in report["counterexamples"]}
    assert "multiple-of-quarter-turn" in checks and "plane-orthofin" in checks


def test_plane_violations():
    crossing = _g({"a": (0, 0), "b": (4, 4), "c": (0, 4), "d": (4, 0)}, [("ab", "a", "b", []), ("cd", "c", "d", [])])
    assert [v[0] for v in plane_violations(crossing)] == ["Cross"]
    # two edges meeting at a shared bend point without crossing
    kiss = _g({"a": (0, 0), "b": (4, 0), "c": (0, 4), "d": (4, 4)},
              [("ab", "a", "b", [(2, 2)]), ("cd", "c", "d", [(2, 2)])])
    assert plane_violations(kiss) == []
    # the same bend point, but the edges swap sides there
    swap = _g({"a": (0, 0), "b": (4, 4), "c": (0, 4), "d": (4, 0)},
              [("ab", "a", "b", [(2, 2)]), ("cd", "c", "d", [(2, 2)])])
    assert [v[0] for v in plane_violations(swap)] == ["Cross"]


def test_embedding_rejects_shared_direction():
    g = _g({"a": (0, 0), "b": (4, 0), "c": (2, 0)}, [("ab", "a", "b", [(2, 0), (2, 1)]), ("ac", "a", "c", [])])
    with pytest.raises(InconsistentRotation):
        embed(g)


@pytest.mark.parametrize("n", [1, 2, 3, 7])
def test_multigraph_round_trip(n):
    g = extremal_orthofin(n)
    assert parse(serialize(g)) == g
    assert parse(serialize(g, "compact")) == g


@pytest.mark.parametrize("n, m", [(1, 3), (2, 8), (7, 33)])
def test_extremal_edge_counts(n, m):
    assert extremal_orthofin(n).m == m


@given(st.integers(1, 12))
def test_extremal_every_face_is_a_quarter_turn(n):
    report = check_theorem2(extremal_orthofin(n))
    assert report["ok"], report["counterexamples"]
    assert set(report["face_quarter_turns"]) == {1}
    assert report["faces"] == 4 * n


@given(st.integers(1, 10), st.integers(0, 2**32))
def test_subsampled_extremal_graphs(n, seed):
    g = subsample(extremal_orthofin(n), random.Random(seed))
    report = check_theorem2(g)
    assert report["ok"], report["counterexamples"]
    assert report["max_loops_per_vertex"] <= 3 and report["max_multiplicity"] <= 8
    for comp in report["components"]:
        assert comp["sum_eq_4n"] and comp["f_le_4n"] and comp["m_le_5n_minus_2"]
    for w in faces(g):
        k = face_potential(w).quarter_turns
        assert k >= 1
        assert math.isclose(float_potential(w), k * math.pi / 2, abs_tol=1e-6 * math.pi)


def test_isolated_vertex_counts_one_face():
    g = Multigraph({"a": Point(0, 0), "b": Point(Fraction(1, 3), 5)}, ())
    report = check_theorem2(g)
    assert report["ok"]
    assert [c["f"] for c in report["components"]] == [1, 1]
