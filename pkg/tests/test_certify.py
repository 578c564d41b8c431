import json

import pytest
from hypothesis import given

from rackit.certify import SCHEMA, LemmaViolation, certify, verify_and_assign_gaps, verify_lemma3
from rackit.drawing import Drawing, InvalidDrawing, PolylineEdge, normalize, parse
from rackit.generators import FIXTURES, corpus_fixture, grid_rac2
from rackit.geometry import Point
from conftest import DATA
from strategies import grid_params


def _assert_sound(cert):
    assert cert.verdict, [c for c in cert.bound_checks if not c["pass"]]
    n = cert.n
    assert cert.h_edges <= 5 * n - 2
    assert cert.represented_count + len(cert.split.e0) == cert.m
    assert set(cert.split.e1) | set(cert.split.e2) == set(cert.split.e0)
    assert not set(cert.split.e1) & set(cert.split.e2)
    if n >= 3:
        assert len(cert.split.e1) <= 5 * n - 10 and len(cert.split.e2) <= 5 * n - 10
        assert cert.m <= 20 * n - 24
    assert cert.lemma3["ok"]
    assert all(g.max_load <= 1 for g in cert.gaps.values())


@pytest.mark.parametrize("name", FIXTURES)
def test_fixtures_certify(name):
    _assert_sound(certify(corpus_fixture(name)))


@given(grid_params)
def test_grid_drawings_certify(params):
    _assert_sound(certify(grid_rac2(*params)))


@given(grid_params)
def test_mixed_grid_drawings_certify(params):
    _assert_sound(certify(grid_rac2(*params, mixed=True)))


def test_fig4_residual_edges():
    cert = certify(corpus_fixture("fig4"))
    assert cert.h_edges == 0
    assert len(cert.split.e0) == 4
    assert cert.lemma3["crossings"] == {"end-end": 0, "end-middle": 3, "middle-middle": 0}
    assert cert.lemma3["max_end_crossings_per_middle"] == 1
    loads = cert.gaps["G1"].loads() + cert.gaps["G2"].loads()
    assert sorted(loads.values()) == [1, 1, 1]


def test_small_drawings_mark_bounds_not_applicable():
    d = Drawing({"a": Point(0, 0), "b": Point(6, 3)}, (PolylineEdge("ab", "a", "b", ()),))
    cert = certify(d)
    skipped = [c["name"] for c in cert.bound_checks if "note" in c]
    assert skipped == ["|E1| <= 5n-10", "|E2| <= 5n-10", "m <= 20n-24"]


def test_certificate_json():
    doc = json.loads(certify(corpus_fixture("fig2")).dumps())
    assert doc["schema"] == SCHEMA
    assert doc["verdict"] is True
    assert doc["h_edges"] == 7
    assert len(doc["blocks"]) == 3
    assert doc["e0"] == doc["e1"] + doc["e2"]


def test_invalid_drawing_is_refused():
    with pytest.raises(InvalidDrawing):
        certify(parse((DATA / "bad60.rac").read_text()))


def _two_end_crossings():
    # two positive-middle edges whose end segments both cross one middle
    vs = {"a": (0, 1), "b": (10, 9), "p": (4, 2), "q": (0, 4), "r": (8, 6), "s": (4, 8)}
    es = [("m", "a", "b", [(1, 1), (9, 9)]),
          ("x", "p", "q", [(2, 4), (1, 3)]),
          ("y", "r", "s", [(6, 8), (5, 7)])]
    return Drawing({k: Point(*v) for k, v in vs.items()},
                   tuple(PolylineEdge(i, t, h, tuple(Point(*b) for b in bs)) for i, t, h, bs in es))


def test_gap_assignment_rejects_overloaded_middle():
    d = normalize(_two_end_crossings(), check=False)
    ids = [e.id for e in d.edges]
    with pytest.raises(LemmaViolation):
        verify_and_assign_gaps(d, ids)
    report = verify_lemma3(d, ids)
    assert not report["ok"]
