"""Deterministic SVG rendering of polygon documents."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from ..core.geometry import ConvexPolygon, diameter, diameter_graph
from ..core.reinhardt import Arc, Composition, build_reuleaux
from .models import PolygonDocument

PREAMBLE = """\
<?xml version="1.0" encoding="UTF-8" standalone="no"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="{lo} {lo} {span} {span}">
<rect x="{lo}" y="{lo}" width="{span}" height="{span}" style="fill:#ffffff"/>
"""

POSTAMBLE = "</svg>\n"


@dataclass(frozen=True)
class RenderOptions:
    size: int = 600
    stroke_width: float = 1.5
    show_arcs: bool = True
    show_diameter_graph: bool = False
    labels: bool = False
    precision: int = 6

    def __post_init__(self) -> None:
        if self.size <= 0 or self.stroke_width <= 0:
            raise ValueError("canvas size and stroke width must be positive")
        if not 1 <= self.precision <= 15:
            raise ValueError("precision must be between 1 and 15")


class SVGCanvas:
    """Collects path commands in a fixed [-1.1 d, 1.1 d]^2 frame with y pointing up."""

    def __init__(self, d: float, center: Sequence[float], options: RenderOptions) -> None:
        self.d = d
        self.center = np.asarray(center, dtype=float)
        self.options = options
        self.unit = 2.2 * d / options.size
        self.commands: List[str] = []

    def num(self, value: float) -> str:
        text = f"{value:.{self.options.precision}f}"
        if text.startswith("-") and float(text) == 0.0:
            text = text[1:]
        return text

    def point(self, xy: Sequence[float]) -> str:
        x = xy[0] - self.center[0]
        y = -(xy[1] - self.center[1])
        return f"{self.num(x)} {self.num(y)}"

    def stroke(self, scale: float = 1.0) -> str:
        return self.num(self.options.stroke_width * scale * self.unit)

    def polygon(self, points: np.ndarray, color: str = "#000000") -> None:
        path = "M " + " L ".join(self.point(p) for p in points) + " Z"
        self.commands.append(
            f'<path class="polygon" d="{path}" style="fill:#e8eef7;stroke:{color};stroke-width:{self.stroke()}"/>'
        )

    def arc(self, start: np.ndarray, end: np.ndarray, color: str = "#c0392b") -> None:
        r = self.num(self.d)
        # counterclockwise in y-up coordinates is sweep-flag 1 once y is flipped
        path = f"M {self.point(start)} A {r} {r} 0 0 1 {self.point(end)}"
        self.commands.append(
            f'<path class="arc" d="{path}" style="fill:none;stroke:{color};stroke-width:{self.stroke()}"/>'
        )

    def chord(self, a: np.ndarray, b: np.ndarray, color: str = "#2e86c1") -> None:
        path = f"M {self.point(a)} L {self.point(b)}"
        self.commands.append(
            f'<path class="chord" d="{path}" style="fill:none;stroke:{color};stroke-width:{self.stroke(0.6)}"/>'
        )

    def label(self, xy: Sequence[float], text: str) -> None:
        x, y = self.point(xy).split()
        self.commands.append(
            f'<text x="{x}" y="{y}" font-size="{self.num(12 * self.unit)}" fill="#333333">{text}</text>'
        )

    def render(self) -> str:
        lo = self.num(-1.1 * self.d)
        span = self.num(2.2 * self.d)
        head = PREAMBLE.format(size=self.options.size, lo=lo, span=span)
        return head + "".join(c + "\n" for c in self.commands) + POSTAMBLE


def _arc_endpoints(
    vertices: np.ndarray, arc: Arc, d: float
) -> Tuple[np.ndarray, np.ndarray]:
    ctr = vertices[arc.center]
    start = ctr + d * np.array([np.cos(arc.start), np.sin(arc.start)])
    end = ctr + d * np.array([np.cos(arc.end), np.sin(arc.end)])
    return start, end


def _document_arcs(doc: PolygonDocument) -> Tuple[np.ndarray, List[Arc]]:
    if doc.kind == "reuleaux":
        arcs = [Arc(a.center, a.start, a.end, a.steps) for a in doc.arcs]
        return np.asarray(doc.vertices, dtype=float), arcs
    if doc.kind == "reinhardt":
        body = build_reuleaux(Composition.of(doc.signature), doc.d)
        return np.asarray(body.vertices, dtype=float), list(body.arcs)
    return np.zeros((0, 2)), []


def render_svg(doc: PolygonDocument, options: RenderOptions | None = None) -> str:
    """SVG text for a document; identical inputs give identical bytes."""

    options = options or RenderOptions()
    coords = np.asarray(doc.vertices, dtype=float)
    polygon = ConvexPolygon(coords)
    d = doc.d if doc.d is not None else diameter(polygon)
    lo, hi = coords.min(axis=0), coords.max(axis=0)
    canvas = SVGCanvas(d, (lo + hi) / 2.0, options)

    canvas.polygon(coords)
    if options.show_arcs:
        centers, arcs = _document_arcs(doc)
        for arc in arcs:
            canvas.arc(*_arc_endpoints(centers, arc, d))
    if options.show_diameter_graph:
        graph = diameter_graph(polygon, tol=1e-6)
        for i, j in graph.edges:
            canvas.chord(polygon.coords[i], polygon.coords[j])
    if options.labels:
        for i, xy in enumerate(coords):
            canvas.label(xy, str(i))
    return canvas.render()
