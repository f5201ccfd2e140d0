import math

import pytest

from polygon_extrema.core.geometry import ConvexPolygon
from polygon_extrema.core.graham import GrahamParameterization
from polygon_extrema.core.reinhardt import Composition, build_reuleaux, construct, regular_signature
from polygon_extrema.io import documents
from polygon_extrema.io.svg import RenderOptions, render_svg


def _square_doc():
    return documents.generic_document(ConvexPolygon([(0, 0), (1, 0), (1, 1), (0, 1)]), "test")


def _polygon_path(svg):
    line = next(line for line in svg.splitlines() if 'class="polygon"' in line)
    return line.split(' d="', 1)[1].split('"', 1)[0]


def test_square_renders_closed_four_segment_path():
    svg = render_svg(_square_doc())
    path = _polygon_path(svg)
    assert path.startswith("M ")
    assert path.endswith(" Z")
    assert path.count(" L ") == 3
    assert svg.count('class="arc"') == 0
    assert svg.endswith("</svg>\n")


def test_view_box_is_fixed_by_diameter():
    svg = render_svg(_square_doc(), RenderOptions(size=400))
    side = 2.2 * math.sqrt(2)
    assert f'viewBox="-{1.1 * math.sqrt(2):.6f} -{1.1 * math.sqrt(2):.6f} {side:.6f} {side:.6f}"' in svg
    assert 'width="400"' in svg


def test_reinhardt_thirty_gon_shows_three_arcs():
    body = construct(regular_signature(30))
    svg = render_svg(documents.reinhardt_document(body, "construct"))
    assert _polygon_path(svg).count(" L ") == 29
    assert svg.count('class="arc"') == 3
    assert " A 1.000000 1.000000 0 0 1 " in svg
    plain = render_svg(documents.reinhardt_document(body, "construct"), RenderOptions(show_arcs=False))
    assert plain.count('class="arc"') == 0


def test_reuleaux_document_draws_one_arc_per_vertex():
    body = build_reuleaux(Composition.of((1, 1, 1, 1, 1)))
    svg = render_svg(documents.reuleaux_document(body, "construct"))
    assert svg.count('class="arc"') == 5


def test_cycle_with_pendant_chords():
    m = 5
    headings = tuple(k * (math.pi - math.pi / m) for k in range(m))
    polygon = GrahamParameterization(6, headings, math.pi / (2 * m)).polygon()
    svg = render_svg(documents.generic_document(polygon, "x"), RenderOptions(show_diameter_graph=True, labels=True))
    assert svg.count('class="chord"') == 6
    assert svg.count("<text ") == 6


def test_rendering_is_deterministic():
    doc = documents.reinhardt_document(construct(Composition.of((1, 1, 1, 1, 1))), "construct")
    options = RenderOptions(show_diameter_graph=True, labels=True)
    assert render_svg(doc, options) == render_svg(documents.loads(documents.dumps(doc)), options)


@pytest.mark.parametrize("kwargs", [{"size": 0}, {"stroke_width": -1.0}, {"precision": 0}])
def test_render_options_validation(kwargs):
    with pytest.raises(ValueError):
        RenderOptions(**kwargs)
