"""Deterministic SVG 1.1 output for drawings and ortho-fin multigraphs.

Rendering is the only place coordinates leave exact arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .blocks import compute_blocks
from .certify import certify
from .drawing import Drawing, _SegmentTable, normalize
from .geometry import Kind, Point, intersect
from .multigraph import Multigraph

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf", "#bcbd22")
NEUTRAL = "#999999"
H_COLOR = "#ff7f0e"
TICK = 6.0


@dataclass(frozen=True)
class RenderOptions:
    width: int = 640
    height: int = 640
    margin: int = 20
    precision: int = 9
    vertices: bool = True
    bends: bool = False
    crossings: bool = True
    blocks_by_color: bool = False
    h_overlay: bool = False
    gap_arrows: bool = False

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("width and height must be positive")
        if self.margin < 0 or 2 * self.margin >= min(self.width, self.height):
            raise ValueError("margin does not fit the canvas")
        if self.precision < 0:
            raise ValueError("precision must be non-negative")


class _Frame:
    """Maps exact world coordinates to pixel strings, y axis pointing up."""

    def __init__(self, points: list[Point], opts: RenderOptions):
        self.opts = opts
        xs = [Fraction(p.x) for p in points] or [Fraction(0)]
        ys = [Fraction(p.y) for p in points] or [Fraction(0)]
        self.x0, self.y0 = min(xs), min(ys)
        span_x, span_y = max(xs) - self.x0, max(ys) - self.y0
        inner_w = opts.width - 2 * opts.margin
        inner_h = opts.height - 2 * opts.margin
        scales = [Fraction(inner_w) / span_x if span_x else None, Fraction(inner_h) / span_y if span_y else None]
        scales = [s for s in scales if s is not None]
        self.s = min(scales) if scales else Fraction(1)
        # centre the drawing
        self.ox = opts.margin + (inner_w - span_x * self.s) / 2
        self.oy = opts.margin + (inner_h - span_y * self.s) / 2

    def num(self, v) -> str:
        text = f"{float(v):.{self.opts.precision}f}"
        if "." in text:
            text = text.rstrip("0").rstrip(".")
        return "0" if text in ("-0", "") else text

    def px(self, p: Point) -> tuple[float, float]:
        x = self.ox + (Fraction(p.x) - self.x0) * self.s
        y = self.opts.height - (self.oy + (Fraction(p.y) - self.y0) * self.s)
        return float(x), float(y)

    def xy(self, p: Point) -> tuple[str, str]:
        x, y = self.px(p)
        return self.num(x), self.num(y)


def _path_d(frame: _Frame, pts) -> str:
    parts = []
    for i, p in enumerate(pts):
        x, y = frame.xy(p)
        parts.append(f"{'M' if i == 0 else 'L'}{x} {y}")
    return " ".join(parts)


def _line(frame: _Frame, a: Point, b: Point, extra: str = "") -> str:
    (x1, y1), (x2, y2) = frame.xy(a), frame.xy(b)
    return f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"{extra}/>'


def _tick(frame: _Frame, p: Point, u: Point, v: Point) -> str:
    """Small square in the corner between the two crossing directions."""
    cx, cy = frame.px(p)

    def unit(w):
        dx, dy = float(w.x), -float(w.y)
        n = math.hypot(dx, dy)
        return dx / n * TICK, dy / n * TICK

    (ux, uy), (vx, vy) = unit(u), unit(v)
    pts = [(cx + ux, cy + uy), (cx + ux + vx, cy + uy + vy), (cx + vx, cy + vy)]
    return '<polyline class="tick" points="' + " ".join(f"{frame.num(x)},{frame.num(y)}" for x, y in pts) + '"/>'


def _header(opts: RenderOptions) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{opts.width}" height="{opts.height}" '
        f'viewBox="0 0 {opts.width} {opts.height}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]


def _vertex_marks(frame: _Frame, vertices: dict) -> list[str]:
    out = ['<g class="vertices" fill="black">']
    for vid, p in vertices.items():
        x, y = frame.xy(p)
        out.append(f'<circle class="vertex" cx="{x}" cy="{y}" r="3"><title>{vid}</title></circle>')
    out.append("</g>")
    return out


def _render_multigraph(g: Multigraph, opts: RenderOptions) -> str:
    pts = list(g.vertices.values()) + [p for e in g.edges for p in e.path]
    frame = _Frame(pts, opts)
    out = _header(opts)
    out.append('<g class="edges" fill="none" stroke="black" stroke-width="1.5">')
    for e in g.edges:
        out.append(f'<path id="{e.id}" d="{_path_d(frame, e.path)}"/>')
    out.append("</g>")
    if opts.vertices:
        out += _vertex_marks(frame, g.vertices)
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _render_drawing(d: Drawing, opts: RenderOptions) -> str:
    needs_pipeline = opts.blocks_by_color or opts.h_overlay or opts.gap_arrows
    if needs_pipeline and not d.normalized:
        d = normalize(d)
    pts = list(d.vertices.values()) + [b for e in d.edges for b in e.bends]
    frame = _Frame(pts, opts)
    out = _header(opts)

    if opts.blocks_by_color:
        colour = {}
        for b in compute_blocks(d):
            if len(b.members) > 1:
                c = PALETTE[len(set(colour.values())) % len(PALETTE)]
                for r in b.members:
                    colour[(r.edge, r.pos)] = c
        out.append(f'<g class="edges" fill="none" stroke="{NEUTRAL}" stroke-width="1.5">')
        for e in d.edges:
            for pos, s in enumerate(d.segments(e)):
                c = colour.get((e.id, pos))
                out.append(_line(frame, s.a, s.b, f' stroke="{c}"' if c else ""))
        out.append("</g>")
    else:
        out.append('<g class="edges" fill="none" stroke="black" stroke-width="1.5">')
        for e in d.edges:
            p = d.points(e)
            if len(p) == 2:
                out.append(_line(frame, p[0], p[1], f' id="{e.id}"'))
            else:
                out.append(f'<path id="{e.id}" d="{_path_d(frame, p)}"/>')
        out.append("</g>")

    if opts.crossings:
        crossings = _crossings(d)
        if crossings:
            out.append('<g class="crossings" fill="none" stroke="black" stroke-width="1">')
            for p, u, v in crossings:
                out.append(_tick(frame, p, u, v))
            out.append("</g>")

    if opts.h_overlay or opts.gap_arrows:
        cert = certify(d)
        if opts.h_overlay and cert.h is not None:
            out.append(f'<g class="h-overlay" fill="none" stroke="{H_COLOR}" stroke-width="3" stroke-opacity="0.5">')
            for e in cert.h.edges:
                out.append(f'<path d="{_path_d(frame, e.path)}"/>')
            out.append("</g>")
        if opts.gap_arrows:
            nd = cert.normalized
            out.append('<g class="gaps" fill="none" stroke="#2ca02c" stroke-width="1" stroke-dasharray="3 2">')
            for name in sorted(cert.gaps):
                for c, eid in cert.gaps[name].assigned:
                    seg = nd.segment(eid, 1)
                    mid = Point((Fraction(seg.a.x) + seg.b.x) / 2, (Fraction(seg.a.y) + seg.b.y) / 2)
                    (x1, y1), (x2, y2) = frame.xy(c.point), frame.xy(mid)
                    out.append(f'<polyline class="gap" points="{x1},{y1} {x2},{y2}"/>')
            out.append("</g>")

    if opts.bends:
        out.append(f'<g class="bends" fill="{NEUTRAL}">')
        for e in d.edges:
            for b in e.bends:
                x, y = frame.xy(b)
                out.append(f'<rect class="bend" x="{frame.num(float(x) - 2)}" y="{frame.num(float(y) - 2)}" '
                           f'width="4" height="4"/>')
        out.append("</g>")
    if opts.vertices:
        out += _vertex_marks(frame, d.vertices)
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _crossings(d: Drawing) -> list[tuple[Point, Point, Point]]:
    """Crossing points with the two segment directions, for any bend count."""
    table = _SegmentTable(d)
    out = []
    for k1, k2 in sorted(tuple(sorted(pair)) for pair in table.pairs("sweep")):
        if table.owner[k1][0] == table.owner[k2][0]:
            continue
        s1, s2 = table.segs[k1], table.segs[k2]
        hit = intersect(s1, s2)
        if hit.kind is Kind.INTERIOR_CROSS:
            out.append((hit.point, s1.vector, s2.vector))
    return out


def render_svg(obj: Union[Drawing, Multigraph], opts: Optional[RenderOptions] = None) -> str:
    opts = opts or RenderOptions()
    if isinstance(obj, Multigraph):
        return _render_multigraph(obj, opts)
    return _render_drawing(obj, opts)
