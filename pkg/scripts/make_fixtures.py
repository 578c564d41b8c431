"""Regenerate the bundled .rac fixtures (and the invalid test drawings) from coordinates."""
from __future__ import annotations

import argparse
from pathlib import Path

from rackit.drawing import Drawing, PolylineEdge, serialize
from rackit.geometry import Point

ROOT = Path(__file__).resolve().parents[1]


def _drawing(vertices: dict, edges: list) -> Drawing:
    vs = {k: Point(*v) for k, v in vertices.items()}
    es = tuple(PolylineEdge(eid, t, h, tuple(Point(*b) for b in bends)) for eid, t, h, bends in edges)
    return Drawing(vs, es)


def triangle() -> Drawing:
    return _drawing({"a": (0, 0), "b": (4, 0), "c": (2, 3)},
                    [("ab", "a", "b", []), ("bc", "b", "c", []), ("ca", "c", "a", [])])


def x_cross() -> Drawing:
    return _drawing({"a": (0, 0), "b": (4, 4), "c": (0, 4), "d": (4, 0)},
                    [("ab", "a", "b", []), ("cd", "c", "d", [])])


def fig2() -> Drawing:
    """Three crossing blocks: a grid of axis-parallel ends (9 terminals), a
    second end block (6 terminals) and a block of middle segments only."""
    vs, es = {}, []
    for i in range(5):
        y = 11 + 2 * i
        vs[f"L{i}"], vs[f"W{i}"] = (8, y), (34, y - 8)
        es.append((f"h{i}", f"L{i}", f"W{i}", [(22, y), (30, y - 8)]))
    for j in range(4):
        x = 12 + 2 * j
        vs[f"D{j}"], vs[f"U{j}"] = (x, 8), (x + 4, 30)
        es.append((f"v{j}", f"D{j}", f"U{j}", [(x, 22), (x + 4, 26)]))
    vs["Z"], vs["Y"] = (32, 0), (40, 17)
    es.append(("z", "Z", "Y", [(32, 13), (36, 17)]))
    vs["P"], vs["Q"] = (6, 29), (25, 20)
    es.append(("m", "P", "Q", [(12, 29), (21, 20)]))
    return _drawing(vs, es)


def fig4() -> Drawing:
    """A chain where each end segment crosses the next edge's middle once."""
    vs, es = {}, []
    for i in range(4):
        ox = 6 * i
        vs[f"s{i}"], vs[f"t{i}"] = (ox, 2), (ox + 9, 1)
        es.append((f"e{i}", f"s{i}", f"t{i}", [(ox + 1, 1), (ox + 5, 5)]))
    return _drawing(vs, es)


def horizontal_middle() -> Drawing:
    """Needs a rotation before its middle slopes are all diagonal."""
    return _drawing({"a": (0, 0), "b": (4, 0), "c": (5, 0), "d": (8, 3)},
                    [("ab", "a", "b", [(1, 1), (3, 1)]), ("cd", "c", "d", [(6, 1), (7, 3)])])


def bad60() -> Drawing:
    """Two straight edges crossing at roughly 60 degrees."""
    return _drawing({"a": (0, 0), "b": (8, 0), "c": (0, -7), "d": (8, 7)},
                    [("ab", "a", "b", []), ("cd", "c", "d", [])])


FIXTURES = {f.__name__: f for f in (triangle, x_cross, fig2, fig4, horizontal_middle)}
INVALID = {"bad60": bad60}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fixtures", type=Path, default=ROOT / "src" / "rackit" / "fixtures")
    ap.add_argument("--data", type=Path, default=ROOT / "tests" / "data")
    args = ap.parse_args()
    for target, table in ((args.fixtures, FIXTURES), (args.data, INVALID)):
        target.mkdir(parents=True, exist_ok=True)
        for name, make in table.items():
            (target / f"{name}.rac").write_text(serialize(make(), "json"))
            print(target / f"{name}.rac")


if __name__ == "__main__":
    main()
