"""Inputs and producers for the byte-exact golden files in tests/golden."""
from rackit.certify import certify
from rackit.drawing import dump_json
from rackit.generators import corpus_fixture, extremal_orthofin
from rackit.multigraph import check_theorem2
from rackit.render import RenderOptions, render_svg

LAYERS = RenderOptions(bends=True, blocks_by_color=True, h_overlay=True, gap_arrows=True)


def _drawing_cases(name):
    d = corpus_fixture(name)
    yield f"{name}.cert.json", lambda: certify(d).dumps()
    yield f"{name}.svg", lambda: render_svg(d)
    yield f"{name}.layers.svg", lambda: render_svg(d, LAYERS)


def _extremal_cases(n):
    g = extremal_orthofin(n)
    yield f"extremal{n}.potential.json", lambda: dump_json(check_theorem2(g))
    yield f"extremal{n}.svg", lambda: render_svg(g)


def cases() -> dict:
    out = {}
    for name in ("fig2", "fig4", "triangle"):
        out.update(_drawing_cases(name))
    for n in (1, 2, 5):
        out.update(_extremal_cases(n))
    return out
