"""Deterministic SVG drawings of compositions, words, paths, trees and polygons.

Every drawn primitive carries a class so that structure can be counted from
the output: ``step`` (path steps), ``side``/``base``/``diagonal`` (polygons),
``edge`` (tree edges), ``cell``/``separator`` (composition boards),
``letter`` (words) and ``dot`` (one per mark).
"""
from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass

from .model import (
    BinaryCompositionWord,
    Composition,
    DyckPath,
    InvalidObject,
    MarkedComposition,
    MarkedDyckPeak,
    MarkedDyckSteps,
    PlaneTree,
    PolygonPartition,
    check_tree,
)


@dataclass(frozen=True)
class RenderOptions:
    unit: float = 20.0
    margin: float = 10.0
    stroke: str = "#000000"
    grid: str = "#cccccc"
    mark_color: str = "#d62728"
    base_dash: str = "6,3"
    dot_radius: float = 3.5


@dataclass(frozen=True)
class Diagram:
    svg: str
    viewbox: tuple[float, float, float, float]
    options: RenderOptions

    def count(self, cls: str) -> int:
        """Number of elements whose class list contains ``cls``."""
        root = ET.fromstring(self.svg)
        return sum(1 for el in root.iter() if cls in el.get("class", "").split())


def _num(x: float) -> str:
    s = f"{x:.2f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class _Canvas:
    def __init__(self, opts: RenderOptions):
        self.opts = opts
        self.items: list[tuple[str, dict[str, str], str | None]] = []
        self.xs: list[float] = []
        self.ys: list[float] = []

    def _track(self, *pts):
        for x, y in pts:
            if not (math.isfinite(x) and math.isfinite(y)):
                raise ValueError("non-finite coordinate")
            self.xs.append(x)
            self.ys.append(y)

    def line(self, p, q, cls, **extra):
        self._track(p, q)
        attrs = {"class": cls, "x1": _num(p[0]), "y1": _num(p[1]),
                 "x2": _num(q[0]), "y2": _num(q[1])}
        attrs.update(extra)
        self.items.append(("line", attrs, None))

    def rect(self, x, y, w, h, cls, **extra):
        self._track((x, y), (x + w, y + h))
        attrs = {"class": cls, "x": _num(x), "y": _num(y), "width": _num(w), "height": _num(h)}
        attrs.update(extra)
        self.items.append(("rect", attrs, None))

    def circle(self, c, r, cls, **extra):
        self._track((c[0] - r, c[1] - r), (c[0] + r, c[1] + r))
        attrs = {"class": cls, "cx": _num(c[0]), "cy": _num(c[1]), "r": _num(r)}
        attrs.update(extra)
        self.items.append(("circle", attrs, None))

    def dot(self, c):
        self.circle(c, self.opts.dot_radius, "dot", fill=self.opts.mark_color)

    def text(self, c, s, cls):
        self._track(c)
        attrs = {"class": cls, "x": _num(c[0]), "y": _num(c[1]),
                 "font-size": _num(self.opts.unit * 0.6), "text-anchor": "middle"}
        self.items.append(("text", attrs, s))

    def finish(self) -> Diagram:
        m = self.opts.margin
        x0, y0 = min(self.xs) - m, min(self.ys) - m
        w, h = max(self.xs) + m - x0, max(self.ys) + m - y0
        root = ET.Element("svg", {
            "xmlns": "http://www.w3.org/2000/svg", "version": "1.1",
            "viewBox": " ".join(_num(v) for v in (x0, y0, w, h)),
            "width": _num(w), "height": _num(h),
        })
        g = ET.SubElement(root, "g", {"stroke": self.opts.stroke, "stroke-width": "1.5",
                                      "fill": "none", "stroke-linecap": "round"})
        for tag, attrs, body in self.items:
            if tag == "text":
                attrs = dict(attrs, stroke="none", fill=self.opts.stroke)
            el = ET.SubElement(g, tag, attrs)
            if body is not None:
                el.text = body
        ET.indent(root)
        svg = ET.tostring(root, encoding="unicode") + "\n"
        return Diagram(svg, tuple(float(_num(v)) for v in (x0, y0, w, h)), self.opts)


# -- compositions and words -------------------------------------------------


def _board(c: _Canvas, parts, colors, cells):
    u = c.opts.unit
    n = sum(parts)
    for i in range(n):
        c.rect(i * u, 0, u, u, "cell", stroke=c.opts.grid)
    c.rect(0, 0, n * u, u, "frame", **{"stroke-width": "2"})
    pos = 0
    for i, p in enumerate(parts):
        if i:
            c.line((pos * u, 0), (pos * u, u), "separator", **{"stroke-width": "2"})
        if colors:
            c.text(((pos + p / 2) * u, -0.25 * u), str(colors[i]), "color")
        pos += p
    for m in cells:
        c.dot(((m - 0.5) * u, 0.5 * u))


def _word(c: _Canvas, w: BinaryCompositionWord):
    u = c.opts.unit
    marked = set(w.marked_positions)
    for i, ch in enumerate(w.letters):
        c.rect(i * u, 0, u, u, "letter", stroke=c.opts.grid)
        c.text(((i + 0.5) * u, 0.72 * u), ch, "glyph")
        if i + 1 in marked:
            c.dot(((i + 0.5) * u, 1.35 * u))
    if w.colors:
        for i, (start, _) in enumerate(w.factors()):
            c.text(((start + 0.5) * u, -0.25 * u), str(w.colors[i]), "color")


# -- Dyck paths -------------------------------------------------------------


def _path(c: _Canvas, path: DyckPath, step_marks=(), peak=None):
    u = c.opts.unit
    n = path.n
    top = max(_heights(path.steps)) * u
    c.line((0, top), (2 * n * u, top), "axis", stroke=c.opts.grid)
    x, h = 0, 0
    ends = []
    for s in path.steps:
        nh = h + (1 if s == "U" else -1)
        c.line((x * u, top - h * u), ((x + 1) * u, top - nh * u), "step")
        ends.append((x, h, nh))
        x, h = x + 1, nh
    for m in step_marks:
        x0, h0, h1 = ends[m - 1]
        c.dot(((x0 + 0.5) * u, top - (h0 + h1) / 2 * u))
    peaks = [i for i in range(len(path.steps) - 1) if path.steps[i:i + 2] == "UD"]
    if peak is not None:
        i = peaks[peak - 1]
        c.dot(((i + 1) * u, top - ends[i][2] * u))
    if path.colors:
        # label each colored block at the peak it contains
        for i, col in zip(peaks, path.colors):
            c.text(((i + 1) * u, top - (ends[i][2] + 0.4) * u), str(col), "color")


def _heights(steps: str):
    h = 0
    yield h
    for s in steps:
        h += 1 if s == "U" else -1
        yield h


# -- trees and polygons -----------------------------------------------------


def _tree(c: _Canvas, t: PlaneTree):
    u = c.opts.unit
    edges, nodes = [], []
    leaves = 0

    def height(v):
        return 0 if v.is_leaf else 1 + max(height(w) for w in v.children)

    base = height(t)

    # subtrees may be shared objects, so positions travel with the recursion
    def place(v, d):
        nonlocal leaves
        if v.is_leaf:
            p = (leaves * u, base * u)
            leaves += 1
            nodes.append((v, p))
            return p
        slot = len(nodes)
        nodes.append(None)
        kids = [place(w, d + 1) for w in v.children]
        p = (sum(x for x, _ in kids) / len(kids), d * u)
        nodes[slot] = (v, p)
        edges.extend((p, q) for q in kids)
        return p

    place(t, 0)
    for p, q in edges:
        c.line(p, q, "edge")
    for v, p in nodes:
        if v.is_leaf:
            if v.marked:
                c.dot(p)
            else:
                c.circle(p, c.opts.dot_radius, "leaf", fill="#ffffff")
        else:
            c.circle(p, c.opts.dot_radius * 0.6, "node", fill=c.opts.stroke)
            if v.color is not None:
                c.text((p[0] + 0.45 * u, p[1] - 0.2 * u), str(v.color), "color")


def _polygon(c: _Canvas, p: PolygonPartition):
    u = c.opts.unit
    N = p.n + 2
    R = u * max(2.0, N / 3)
    # vertex 1 at the left end of the bottom base, labels increasing clockwise
    pts = {}
    for v in range(1, N + 1):
        a = math.pi / 2 + math.pi / N + (v - 1) * 2 * math.pi / N
        pts[v] = (R * math.cos(a), R * math.sin(a))
    for v in range(1, N):
        c.line(pts[v], pts[v + 1], "side")
    c.line(pts[N], pts[1], "side base", **{"stroke-dasharray": c.opts.base_dash})
    for a, b in p.diagonals:
        c.line(pts[a], pts[b], "diagonal", stroke="#666666")
    for s in p.marked_sides:
        (x1, y1), (x2, y2) = pts[s], pts[s + 1]
        c.dot(((x1 + x2) / 2, (y1 + y2) / 2))
    if p.cell_colors:
        for cell, col in zip(p.cells(), p.cell_colors):
            cx = sum(pts[v][0] for v in cell) / len(cell)
            cy = sum(pts[v][1] for v in cell) / len(cell)
            c.text((cx, cy + 0.2 * u), str(col), "color")


def render(obj, options: RenderOptions | None = None) -> Diagram:
    """Draw any supported object as an SVG document."""
    c = _Canvas(options or RenderOptions())
    if isinstance(obj, MarkedComposition):
        _board(c, obj.base.parts, obj.base.colors, obj.marked_cells)
    elif isinstance(obj, Composition):
        _board(c, obj.parts, obj.colors, ())
    elif isinstance(obj, BinaryCompositionWord):
        _word(c, obj)
    elif isinstance(obj, MarkedDyckSteps):
        _path(c, obj.path, step_marks=obj.marked_steps)
    elif isinstance(obj, MarkedDyckPeak):
        _path(c, obj.path, peak=obj.marked_peak)
    elif isinstance(obj, DyckPath):
        _path(c, obj)
    elif isinstance(obj, PlaneTree):
        _tree(c, check_tree(obj))
    elif isinstance(obj, PolygonPartition):
        _polygon(c, obj)
    else:
        raise InvalidObject(f"cannot render {type(obj).__name__}")
    return c.finish()
