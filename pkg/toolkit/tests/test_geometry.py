import math

import numpy as np
import pytest

from polygon_extrema.core.errors import MalformedPolygon, NotCentrallySymmetric
from polygon_extrema.core.geometry import (
    ConvexPolygon,
    DiameterGraph,
    central_symmetrize,
    diameter,
    diameter_graph,
    diameter_pair,
    is_centrally_symmetric,
    is_convex,
    is_strictly_convex,
    metrics,
    pairwise_distances,
    symmetric_radii,
    width,
)
from polygon_extrema.core.families import regular_polygon
from polygon_extrema.core.utils import random_convex_polygon

SQUARE = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]


def test_unit_square_metrics():
    m = metrics(ConvexPolygon(SQUARE))
    assert m.area == pytest.approx(1.0)
    assert m.perimeter == pytest.approx(4.0)
    assert m.width == pytest.approx(1.0)
    assert m.diameter == pytest.approx(math.sqrt(2.0))


def test_clockwise_input_is_reoriented():
    clockwise = ConvexPolygon(SQUARE[::-1])
    assert clockwise == ConvexPolygon(SQUARE)
    assert clockwise.vertices[0] == (0.0, 0.0)


def test_rotated_start_gives_same_canonical_order():
    shifted = SQUARE[2:] + SQUARE[:2]
    assert ConvexPolygon(shifted).canonical_key() == ConvexPolygon(SQUARE).canonical_key()


def test_reflex_vertex_is_rejected_with_index():
    with pytest.raises(MalformedPolygon) as info:
        ConvexPolygon([(0, 0), (2, 0), (1, 1), (2, 2), (0, 2)])
    assert info.value.index == 2


@pytest.mark.parametrize(
    "vertices",
    [
        [(0, 0), (1, 0)],
        [(0, 0), (0, 0), (1, 0), (0, 1)],
        [(0, 0), (1, 0), (2, 0)],
        [(0, 0), (1, 0), (float("nan"), 1)],
    ],
)
def test_degenerate_inputs_are_rejected(vertices):
    with pytest.raises(MalformedPolygon):
        ConvexPolygon(vertices)


def test_pentagram_winds_twice_and_is_rejected():
    angles = [math.pi / 2 + 2 * math.pi * k / 5 for k in (0, 2, 4, 1, 3)]
    star = [(math.cos(a), math.sin(a)) for a in angles]
    assert not is_convex(star).convex
    with pytest.raises(MalformedPolygon):
        ConvexPolygon(star)


def test_collinear_vertex_is_weakly_convex():
    polygon = ConvexPolygon([(0, 0), (1, 0), (2, 0), (2, 2), (0, 2)])
    assert polygon.n == 5
    assert not is_strictly_convex(polygon)
    assert width(polygon) == pytest.approx(2.0)


def test_equilateral_triangle_width_and_diameter():
    triangle = ConvexPolygon([(0, 0), (1, 0), (0.5, math.sqrt(3) / 2)])
    assert width(triangle) == pytest.approx(math.sqrt(3) / 2)
    assert diameter(triangle) == pytest.approx(1.0)


def test_diameter_pair_of_rectangle():
    rect = ConvexPolygon([(0, 0), (2, 0), (2, 1), (0, 1)])
    dist, i, j = diameter_pair(rect)
    assert dist == pytest.approx(math.sqrt(5.0))
    assert {i, j} in ({0, 2}, {1, 3})


def _brute_width(coords):
    """Smallest extent over the normals of every vertex pair."""

    i, j = np.triu_indices(len(coords), k=1)
    chords = coords[j] - coords[i]
    normals = np.column_stack([-chords[:, 1], chords[:, 0]]) / np.hypot(*chords.T)[:, None]
    proj = coords @ normals.T
    return float((proj.max(axis=0) - proj.min(axis=0)).min())


def test_calipers_agree_with_brute_force():
    rng = np.random.default_rng(11)
    for _ in range(10_000):
        n = int(rng.integers(3, 13))
        polygon = ConvexPolygon(random_convex_polygon(rng, n))
        assert abs(diameter(polygon) - pairwise_distances(polygon).max()) <= 1e-10
        assert abs(width(polygon) - _brute_width(polygon.coords)) <= 1e-10


def test_metrics_scale_and_ignore_rigid_motions():
    rng = np.random.default_rng(5)
    for _ in range(1000):
        polygon = ConvexPolygon(random_convex_polygon(rng, int(rng.integers(3, 21))))
        base = metrics(polygon)
        factor = float(rng.uniform(0.01, 100.0))
        expected, scaled = base.scaled(factor), metrics(polygon.scaled(factor))
        for name in ("area", "perimeter", "width", "diameter"):
            assert abs(getattr(scaled, name) - getattr(expected, name)) <= 1e-12 * getattr(expected, name)
        moved = metrics(polygon.rotated(float(rng.uniform(0, 2 * math.pi))).translated(*rng.uniform(-10, 10, 2)))
        for name in ("area", "perimeter", "width", "diameter"):
            assert abs(getattr(moved, name) - getattr(base, name)) <= 1e-9


def test_transforms_preserve_metrics():
    polygon = regular_polygon(7, diameter=1.0)
    moved = polygon.rotated(0.3).translated(2.0, -1.0)
    a, b = polygon.metrics(), moved.metrics()
    assert b.area == pytest.approx(a.area)
    assert b.width == pytest.approx(a.width)
    assert b.diameter == pytest.approx(a.diameter)
    assert polygon.scaled(2.0).metrics().area == pytest.approx(4.0 * a.area)
    with pytest.raises(ValueError):
        polygon.scaled(0.0)


def test_difference_body_of_triangle_is_hexagon():
    triangle = ConvexPolygon([(0, 0), (1, 0), (0.5, math.sqrt(3) / 2)])
    star = central_symmetrize(triangle)
    assert star.n == 6
    assert is_centrally_symmetric(star)
    m, ms = metrics(triangle), metrics(star)
    assert ms.perimeter == pytest.approx(m.perimeter, abs=1e-12)
    assert ms.width == pytest.approx(m.width, abs=1e-12)
    assert ms.diameter == pytest.approx(m.diameter, abs=1e-12)


def test_difference_body_merges_parallel_edges():
    assert central_symmetrize(ConvexPolygon(SQUARE)).n == 4


def test_symmetrization_invariants_on_random_corpus():
    rng = np.random.default_rng(2024)
    for _ in range(10_000):
        n = int(rng.integers(3, 21))
        polygon = ConvexPolygon(random_convex_polygon(rng, n))
        star = central_symmetrize(polygon)
        m, ms = metrics(polygon), metrics(star)
        assert star.n <= 2 * n
        assert abs(ms.perimeter - m.perimeter) <= 1e-9
        assert abs(ms.width - m.width) <= 1e-9
        assert abs(ms.diameter - m.diameter) <= 1e-9
        inradius, circumradius = symmetric_radii(star)
        assert abs(inradius - m.width / 2) <= 1e-9
        assert abs(circumradius - m.diameter / 2) <= 1e-9


def test_symmetric_radii_of_centered_square():
    square = ConvexPolygon([(-1, -1), (1, -1), (1, 1), (-1, 1)])
    inradius, circumradius = symmetric_radii(square)
    assert inradius == pytest.approx(1.0)
    assert circumradius == pytest.approx(math.sqrt(2.0))
    with pytest.raises(NotCentrallySymmetric):
        symmetric_radii(ConvexPolygon(SQUARE))


def test_diameter_graph_of_regular_polygons():
    pentagon = diameter_graph(regular_polygon(5, diameter=1.0), tol=1e-9)
    assert len(pentagon.edges) == 5
    assert pentagon.degrees() == [2] * 5
    hexagon = diameter_graph(regular_polygon(6, diameter=1.0), tol=1e-9)
    assert len(hexagon.edges) == 3


def test_cycle_with_pendant_shape():
    graph = DiameterGraph(
        n=6,
        edges=((0, 2), (0, 3), (0, 5), (1, 3), (1, 4), (2, 4)),
        tolerance=1e-6,
    )
    assert graph.is_cycle_with_pendant()
    cycle = DiameterGraph(n=5, edges=((0, 2), (0, 3), (1, 3), (1, 4), (2, 4)), tolerance=1e-6)
    assert not cycle.is_cycle_with_pendant()


def test_diameter_graph_tolerance_range():
    with pytest.raises(ValueError):
        diameter_graph(ConvexPolygon(SQUARE), tol=0.1)
