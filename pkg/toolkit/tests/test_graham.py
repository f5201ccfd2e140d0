import math

import numpy as np
import pytest

from polygon_extrema.core.geometry import diameter_graph, metrics
from polygon_extrema.core.graham import (
    PENDANT,
    GrahamParameterization,
    boundary_order,
    coords_and_jacobian,
    graham_solve,
)
from polygon_extrema.core.families import regular_polygon
from polygon_extrema.core.optimizer import (
    Constraint,
    ConstraintKind,
    Objective,
    OptimizationProblem,
    SolverConfig,
    solve,
)
from polygon_extrema.core.utils import central_jacobian

GRAHAM_HEXAGON_AREA = 0.674981


def _star_with_pendant(n):
    m = n - 1
    headings = tuple(k * (math.pi - math.pi / m) for k in range(m))
    return GrahamParameterization(n, headings, math.pi / (2 * m))


def test_boundary_order_places_pendant_opposite_attachment():
    assert boundary_order(5) == [0, 3, 1, PENDANT, 4, 2]
    assert boundary_order(7) == [0, 5, 3, 1, PENDANT, 6, 4, 2]


def test_regular_star_with_pendant_is_a_convex_hexagon():
    param = _star_with_pendant(6)
    assert param.closure_defect() < 1e-12
    polygon = param.polygon()
    assert polygon.n == 6
    graph = diameter_graph(polygon, tol=1e-6)
    assert graph.is_cycle_with_pendant()
    vector = param.vector()
    assert GrahamParameterization.from_vector(6, vector) == param


def test_coordinate_jacobian_matches_finite_differences():
    x = _star_with_pendant(8).vector() + 0.01
    _, jac = coords_and_jacobian(x, 7)
    numeric = central_jacobian(lambda v: coords_and_jacobian(v, 7)[0].ravel(), x)
    assert np.allclose(jac.reshape(-1, 8), numeric, atol=1e-6)


@pytest.mark.parametrize("n", [5, 7, 14, 4])
def test_only_even_n_in_range(n):
    with pytest.raises(ValueError):
        graham_solve(n, SolverConfig(starts=1))


def test_parameterization_shape_checks():
    with pytest.raises(ValueError):
        GrahamParameterization(6, (0.0, 1.0), 0.0)
    with pytest.raises(ValueError):
        GrahamParameterization(7, (0.0,) * 6, 0.0)


def test_graham_hexagon():
    result = graham_solve(6, SolverConfig.from_profile("quick", starts=16))
    assert result.method == "graham"
    assert abs(result.value - GRAHAM_HEXAGON_AREA) <= 1e-5
    assert result.value >= 3 * math.sqrt(3) / 8 + 0.02
    assert metrics(result.best).diameter == pytest.approx(1.0, abs=1e-7)
    graph = diameter_graph(result.best, tol=1e-6)
    assert graph.is_cycle_with_pendant()


def test_graham_octagon_beats_regular_octagon():
    result = graham_solve(8, SolverConfig.from_profile("quick", starts=16))
    assert result.value > metrics(regular_polygon(8, diameter=1.0)).area
    assert result.value <= result.bound + 1e-7


def test_graham_hexagon_matches_dense_free_search():
    problem = OptimizationProblem(
        Objective.MAXIMIZE_AREA, Constraint(ConstraintKind.DIAMETER_AT_MOST, 1.0), 6
    )
    oracle = solve(problem, SolverConfig.from_profile("desk", seed=3))
    structured = graham_solve(6, SolverConfig.from_profile("quick", starts=16))
    assert oracle.value <= structured.value + 1e-6
    assert abs(oracle.value - structured.value) <= 1e-4
    assert diameter_graph(oracle.best, tol=1e-6).is_cycle_with_pendant()
