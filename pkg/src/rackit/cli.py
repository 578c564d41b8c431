"""Command-line entry point: ``rackit <command> ...``.

Exit codes: 0 success or true verdict, 1 violation or false verdict,
2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import drawing as dr
from . import multigraph as mg
from .blocks import compute_blocks
from .certify import LemmaViolation, certify
from .drawing import DrawingFormatError, InvalidDrawing, NoValidRotation, NotNormalized
from .generators import FIXTURES, GenerationFailed, UnknownFixture, extremal_orthofin, fixture_text, grid_rac2
from .multigraph import EmbeddingError, NotMultipleOfQuarterTurn, PlanarityViolation, check_theorem2
from .orthofin import DisjointnessViolation, OrthoFinViolation, extract
from .render import RenderOptions, render_svg

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

# failures of the checked mathematics rather than of the invocation
_VIOLATIONS = (InvalidDrawing, LemmaViolation, PlanarityViolation, NotMultipleOfQuarterTurn, EmbeddingError,
               DisjointnessViolation, OrthoFinViolation, NoValidRotation, GenerationFailed)
_INPUT_ERRORS = (DrawingFormatError, UnknownFixture, NotNormalized, OSError, ValueError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def _write(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _load(path: str):
    text = _read(path)
    doc = dr.load_json(text)
    if doc.get("kind") == "multigraph":
        return mg.parse(text)
    return dr.parse(text)


def _load_drawing(path: str) -> dr.Drawing:
    obj = _load(path)
    if not isinstance(obj, dr.Drawing):
        raise DrawingFormatError("expected a drawing, got a multigraph document")
    return obj


def _valid_normalized(d: dr.Drawing) -> dr.Drawing:
    report = dr.validate_rac(d)
    if not report.valid:
        raise InvalidDrawing(report)
    return dr.normalize(d, check=False)


def cmd_validate(args) -> int:
    report = dr.validate_rac(_load_drawing(args.file), method=args.method)
    _write(dr.dump_json(report.to_json(), args.format), args.output)
    return EXIT_OK if report.valid else EXIT_VIOLATION


def cmd_blocks(args) -> int:
    d = _valid_normalized(_load_drawing(args.file))
    lines = [json.dumps(b.to_json(), separators=(",", ":")) for b in compute_blocks(d)]
    _write("".join(line + "\n" for line in lines), args.output)
    return EXIT_OK


def cmd_extract(args) -> int:
    h, _ = extract(_valid_normalized(_load_drawing(args.file)))
    _write(mg.serialize(h, args.format), args.output)
    return EXIT_OK


def cmd_potential(args) -> int:
    obj = _load(args.file)
    if isinstance(obj, dr.Drawing):
        obj, _ = extract(_valid_normalized(obj))
    report = check_theorem2(obj)
    _write(dr.dump_json(report, args.format), args.output)
    return EXIT_OK if report["ok"] else EXIT_VIOLATION


def cmd_certify(args) -> int:
    cert = certify(_load_drawing(args.file))
    _write(dr.dump_json(cert.to_json(), args.format), args.report or args.output)
    return EXIT_OK if cert.verdict else EXIT_VIOLATION


def cmd_generate(args) -> int:
    if args.family == "extremal":
        text = mg.serialize(extremal_orthofin(args.n), args.format)
    elif args.family == "grid":
        d = grid_rac2(args.n, args.seed, edges_per_vertex=args.edges_per_vertex, mixed=args.mixed)
        text = dr.serialize(d, args.format)
    else:
        text = dr.serialize(dr.parse(fixture_text(args.name)), args.format)
    _write(text, args.output)
    return EXIT_OK


def cmd_render(args) -> int:
    opts = RenderOptions(
        width=args.width, height=args.height, precision=args.precision,
        vertices=not args.no_vertices, bends=args.bends, crossings=not args.no_crossings,
        blocks_by_color=args.blocks, h_overlay=args.h_overlay, gap_arrows=args.gaps,
    )
    obj = _load(args.file)
    if isinstance(obj, dr.Drawing) and (opts.blocks_by_color or opts.h_overlay or opts.gap_arrows):
        obj = _valid_normalized(obj)
    _write(render_svg(obj, opts), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "compact"), default=argparse.SUPPRESS,
                        help="JSON layout of written documents")
    common.add_argument("--json-errors", action="store_true", default=argparse.SUPPRESS,
                        help="report errors on stderr as JSON")
    common.add_argument("-o", "--output", default=argparse.SUPPRESS, help="output file (default stdout)")

    p = _Parser(prog="rackit", parents=[common], description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    s = sub.add_parser("validate", parents=[common], help="check the RAC_2 conditions")
    s.add_argument("file")
    s.add_argument("--method", choices=("sweep", "naive"), default="sweep")
    s.set_defaults(func=cmd_validate)

    for name, func, text in (("blocks", cmd_blocks, "list crossing blocks as JSON lines"),
                             ("extract", cmd_extract, "write the ortho-fin multigraph H"),
                             ("potential", cmd_potential, "face potentials and edge-count checks")):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("file")
        s.set_defaults(func=func)

    s = sub.add_parser("certify", parents=[common], help="full density certificate")
    s.add_argument("file")
    s.add_argument("--report", help="write the certificate here instead of stdout")
    s.set_defaults(func=cmd_certify)

    g = sub.add_parser("generate", parents=[common], help="write a generated instance")
    gsub = g.add_subparsers(dest="family", parser_class=_Parser, required=True)
    ge = gsub.add_parser("extremal", parents=[common])
    ge.add_argument("--n", type=int, required=True)
    gg = gsub.add_parser("grid", parents=[common])
    gg.add_argument("--n", type=int, required=True)
    gg.add_argument("--seed", type=int, default=0)
    gg.add_argument("--edges-per-vertex", type=float, default=3.0)
    gg.add_argument("--mixed", action="store_true")
    gf = gsub.add_parser("fixture", parents=[common])
    gf.add_argument("name", choices=FIXTURES)
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("render", parents=[common], help="SVG rendering")
    s.add_argument("file")
    s.add_argument("--width", type=int, default=640)
    s.add_argument("--height", type=int, default=640)
    s.add_argument("--precision", type=int, default=9)
    s.add_argument("--bends", action="store_true")
    s.add_argument("--blocks", action="store_true", help="colour segments by block")
    s.add_argument("--h-overlay", action="store_true")
    s.add_argument("--gaps", action="store_true", help="draw gap-assignment arrows")
    s.add_argument("--no-vertices", action="store_true")
    s.add_argument("--no-crossings", action="store_true")
    s.set_defaults(func=cmd_render)
    return p


def _report_error(exc: BaseException, as_json: bool) -> None:
    if as_json:
        doc = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, DrawingFormatError):
            doc["line"], doc["column"] = exc.line, exc.column
        if isinstance(exc, InvalidDrawing):
            doc["report"] = exc.report.to_json()
        sys.stderr.write(json.dumps(doc, sort_keys=True) + "\n")
    else:
        sys.stderr.write(f"rackit: {type(exc).__name__}: {exc}\n")


def run(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    as_json = "--json-errors" in argv  # known before parsing so usage errors honour it
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        if not as_json:
            parser.print_usage(sys.stderr)
        _report_error(exc, as_json)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    for name, default in (("format", "json"), ("json_errors", False), ("output", None)):
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        return args.func(args)
    except _VIOLATIONS as exc:
        _report_error(exc, as_json)
        return EXIT_VIOLATION
    except _INPUT_ERRORS as exc:
        _report_error(exc, as_json)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
