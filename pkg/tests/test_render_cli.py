import json
import re

import pytest

from rackit.cli import run
from rackit.generators import corpus_fixture, extremal_orthofin, fixture_text
from rackit.multigraph import serialize as serialize_multigraph
from rackit.render import RenderOptions, render_svg
from conftest import DATA


def test_triangle_svg_has_three_lines():
    svg = render_svg(corpus_fixture("triangle"))
    assert svg.count("<line") == 3
    assert svg.startswith('<?xml version="1.0"') and 'version="1.1"' in svg


def test_fig2_block_colours():
    svg = render_svg(corpus_fixture("fig2"), RenderOptions(blocks_by_color=True))
    colours = set(re.findall(r'<line[^>]*stroke="([^"]+)"', svg))
    assert len(colours) == 3


def test_extremal2_paths_and_vertex_marks():
    svg = render_svg(extremal_orthofin(2))
    assert svg.count("<path") == 8
    assert svg.count('class="vertex"') == 2


def test_crossing_ticks():
    svg = render_svg(corpus_fixture("fig4"))
    assert svg.count('class="tick"') == 3
    assert 'class="tick"' not in render_svg(corpus_fixture("fig4"), RenderOptions(crossings=False))


def test_precision_controls_digits():
    svg = render_svg(corpus_fixture("fig2"), RenderOptions(precision=2))
    assert not re.search(r"\d\.\d{3}", svg)


def test_render_options_validate():
    with pytest.raises(ValueError):
        RenderOptions(width=0)


@pytest.fixture
def files(tmp_path):
    out = {}
    for name in ("triangle", "fig2", "fig4"):
        p = tmp_path / f"{name}.json"
        p.write_text(fixture_text(name))
        out[name] = str(p)
    out["bad60"] = str(DATA / "bad60.rac")
    g = tmp_path / "g3.json"
    g.write_text(serialize_multigraph(extremal_orthofin(3)))
    out["g3"] = str(g)
    out["tmp"] = tmp_path
    return out


def test_validate_exit_codes(files, capsys):
    assert run(["validate", files["triangle"]]) == 0
    assert run(["validate", files["bad60"]]) == 1
    out = capsys.readouterr().out
    assert "NonRightCrossing" in out


def test_certify_writes_report(files):
    report = files["tmp"] / "cert.json"
    assert run(["certify", files["fig2"], "--report", str(report)]) == 0
    assert json.loads(report.read_text())["verdict"] is True
    assert run(["certify", files["bad60"]]) == 1


def test_blocks_json_lines(files, capsys):
    assert run(["blocks", files["fig2"]]) == 0
    lines = capsys.readouterr().out.splitlines()
    docs = [json.loads(line) for line in lines]
    assert sum(1 for d in docs if d["members"] > 1) == 3


def test_extract_then_potential(files):
    h = files["tmp"] / "h.json"
    assert run(["extract", files["fig2"], "-o", str(h)]) == 0
    assert json.loads(h.read_text())["kind"] == "multigraph"
    assert run(["potential", str(h)]) == 0
    assert run(["potential", files["g3"], "--format", "compact"]) == 0


def test_generate_commands(files):
    tmp = files["tmp"]
    assert run(["generate", "extremal", "--n", "10", "-o", str(tmp / "g10.json")]) == 0
    assert len(json.loads((tmp / "g10.json").read_text())["edges"]) == 48
    assert run(["generate", "grid", "--n", "50", "--seed", "7", "-o", str(tmp / "grid.json")]) == 0
    assert run(["validate", str(tmp / "grid.json")]) == 0
    assert run(["generate", "fixture", "fig2", "-o", str(tmp / "f.json")]) == 0
    assert run(["certify", str(tmp / "f.json")]) == 0


def test_render_command(files):
    out = files["tmp"] / "f.svg"
    assert run(["render", files["fig2"], "--blocks", "--h-overlay", "--gaps", "-o", str(out)]) == 0
    assert out.read_text().count('class="h-overlay"') == 1
    assert run(["render", files["g3"], "-o", str(out)]) == 0


def test_usage_errors(files, capsys):
    assert run([]) == 2
    assert run(["bogus"]) == 2
    assert run(["generate", "extremal"]) == 2
    assert run(["generate", "fixture", "nope"]) == 2
    assert run(["validate", str(files["tmp"] / "missing.json")]) == 2


def test_json_errors(files, capsys):
    bad = files["tmp"] / "broken.json"
    bad.write_text('{\n  "vertices": ,\n}')
    assert run(["validate", str(bad), "--json-errors"]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "DrawingFormatError" and err["line"] == 2
    assert run(["--json-errors", "nonsense"]) == 2
    assert json.loads(capsys.readouterr().err)["error"] == "UsageError"
    assert run(["certify", files["bad60"], "--json-errors"]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["report"]["violations"][0]["kind"] == "NonRightCrossing"


@pytest.mark.parametrize("argv", [["validate"], ["blocks"], ["extract"], ["certify"], ["render"]])
def test_every_subcommand_on_invalid_input(files, argv):
    expected = 1 if argv[0] != "render" else 0
    assert run(argv + [files["bad60"]]) == expected
