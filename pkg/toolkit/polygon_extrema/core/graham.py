"""Largest small polygons for even n: an (n-1)-cycle of diameters plus a pendant.

The optimal polygon's diameter graph is an odd cycle of unit diagonals with one
extra unit segment hanging off a cycle vertex. The search variables are the
headings of the cycle's unit steps and the heading of the pendant segment, so
those n diameters hold by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import List, Tuple

import numpy as np
from loguru import logger
from scipy.optimize import minimize

from .errors import MalformedPolygon
from .geometry import ConvexPolygon, area
from .optimizer import (
    Constraint,
    ConstraintKind,
    Objective,
    OptimizationProblem,
    OptimizationResult,
    SolverConfig,
    StartOutcome,
    area_with_grad,
    convexity_rows,
    distance_rows,
    normalize_to_constraint,
    reduce_candidates,
    run_starts,
)

PENDANT = -1


@dataclass(frozen=True)
class GrahamParameterization:
    n: int
    headings: Tuple[float, ...]
    pendant: float
    attach: int = 0

    def __post_init__(self) -> None:
        if self.n < 6 or self.n % 2:
            raise ValueError(f"cycle-plus-pendant search needs even n >= 6, got {self.n}")
        if len(self.headings) != self.n - 1:
            raise ValueError(f"expected {self.n - 1} headings, got {len(self.headings)}")

    @property
    def m(self) -> int:
        return self.n - 1

    @classmethod
    def from_vector(cls, n: int, x: np.ndarray, attach: int = 0) -> "GrahamParameterization":
        return cls(n, tuple(float(v) for v in x[: n - 1]), float(x[n - 1]), attach)

    def vector(self) -> np.ndarray:
        return np.array(self.headings + (self.pendant,))

    def boundary_order(self) -> List[int]:
        return boundary_order(self.m, self.attach)

    def closure_defect(self) -> float:
        phi = np.asarray(self.headings)
        return float(math.hypot(np.cos(phi).sum(), np.sin(phi).sum()))

    def coords(self) -> np.ndarray:
        return coords_and_jacobian(self.vector(), self.m, self.attach)[0]

    def polygon(self) -> ConvexPolygon:
        return ConvexPolygon(self.coords())


def boundary_order(m: int, attach: int = 0) -> List[int]:
    """Cycle vertices in counterclockwise order, PENDANT placed opposite `attach`."""

    order = [(-2 * i + attach) % m for i in range(m)]
    slot = order.index((attach + 1) % m)
    return order[: slot + 1] + [PENDANT] + order[slot + 1 :]


def coords_and_jacobian(x: np.ndarray, m: int, attach: int = 0) -> Tuple[np.ndarray, np.ndarray]:
    """Boundary coordinates (m + 1, 2) and their derivative (m + 1, 2, m + 1)."""

    phi, psi = x[:m], x[m]
    steps = np.column_stack([np.cos(phi), np.sin(phi)])
    d_steps = np.column_stack([-np.sin(phi), np.cos(phi)])
    star = np.vstack([np.zeros((1, 2)), np.cumsum(steps, axis=0)[:-1]])
    before = np.arange(m)[None, :] < np.arange(m)[:, None]
    star_jac = np.zeros((m, 2, m + 1))
    star_jac[:, :, :m] = np.transpose(before[:, :, None] * d_steps[None, :, :], (0, 2, 1))

    pendant = star[attach] + np.array([math.cos(psi), math.sin(psi)])
    pendant_jac = star_jac[attach].copy()
    pendant_jac[:, m] = [-math.sin(psi), math.cos(psi)]

    order = boundary_order(m, attach)
    coords = np.array([pendant if k == PENDANT else star[k] for k in order])
    jac = np.array([pendant_jac if k == PENDANT else star_jac[k] for k in order])
    return coords, jac


class _GrahamModel:
    def __init__(self, n: int, margin: float, attach: int = 0) -> None:
        self.n = n
        self.m = n - 1
        self.attach = attach
        self.margin = margin
        order = boundary_order(self.m, attach)
        position = {k: i for i, k in enumerate(order)}
        fixed = {
            frozenset((position[k], position[(k + 1) % self.m])) for k in range(self.m)
        }
        fixed.add(frozenset((position[attach], position[PENDANT])))
        self.pairs = np.array(
            [p for p in combinations(range(n), 2) if frozenset(p) not in fixed]
        )

    def initial(self, rng: np.random.Generator) -> np.ndarray:
        m = self.m
        jitter = rng.uniform(-0.25, 0.25, size=m + 1) * math.pi / m
        start = rng.uniform(0.0, 2.0 * math.pi)
        phi = start + np.arange(m) * (math.pi - math.pi / m)
        psi = phi[self.attach] + math.pi / (2 * m)
        return np.append(phi, psi) + jitter

    def area(self, x: np.ndarray) -> Tuple[float, np.ndarray]:
        coords, jac = coords_and_jacobian(x, self.m, self.attach)
        value, grad = area_with_grad(coords)
        return value, np.einsum("kd,kdj->j", grad, jac)

    def inequalities(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        coords, jac = coords_and_jacobian(x, self.m, self.attach)
        cross, cross_jac = convexity_rows(coords)
        sq, sq_jac = distance_rows(coords, self.pairs)
        values = np.concatenate([cross - self.margin, 1.0 - sq])
        rows = np.concatenate([cross_jac, -sq_jac])
        return values, np.einsum("rkd,kdj->rj", rows, jac)

    def closure(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        phi = x[: self.m]
        values = np.array([np.cos(phi).sum(), np.sin(phi).sum()])
        jac = np.zeros((2, self.m + 1))
        jac[0, : self.m] = -np.sin(phi)
        jac[1, : self.m] = np.cos(phi)
        return values, jac


def _search_start(
    model: _GrahamModel,
    config: SolverConfig,
    index: int,
    seed: np.random.SeedSequence,
) -> StartOutcome:
    rng = np.random.default_rng(seed)
    x = model.initial(rng)
    res = minimize(
        lambda v: -model.area(v)[0],
        x,
        jac=lambda v: -model.area(v)[1],
        method="SLSQP",
        constraints=[
            {
                "type": "ineq",
                "fun": lambda v: model.inequalities(v)[0],
                "jac": lambda v: model.inequalities(v)[1],
            },
            {
                "type": "eq",
                "fun": lambda v: model.closure(v)[0],
                "jac": lambda v: model.closure(v)[1],
            },
        ],
        options={"maxiter": config.max_iter, "ftol": config.ftol},
    )
    param = GrahamParameterization.from_vector(model.n, res.x, model.attach)
    try:
        polygon = normalize_to_constraint(param.polygon(), ConstraintKind.DIAMETER_AT_MOST)
    except (MalformedPolygon, ValueError) as exc:
        logger.debug("start {} ended on a degenerate polygon: {}", index, exc)
        return StartOutcome(index, None, math.nan, False, bool(res.success))
    feasible = param.closure_defect() <= config.tolerances.feasibility
    return StartOutcome(index, polygon, area(polygon), feasible, bool(res.success))


def graham_solve(
    n: int, config: SolverConfig | None = None, diameter: float = 1.0
) -> OptimizationResult:
    """Maximise area at the given diameter over cycle-plus-pendant polygons (even n, 6..12)."""

    config = config or SolverConfig()
    if int(n) != n or n % 2 or not 6 <= n <= 12:
        raise ValueError(f"cycle-plus-pendant search covers even n in 6..12, got {n}")
    if config.starts < 1:
        raise ValueError("starts must be at least 1")
    problem = OptimizationProblem(
        Objective.MAXIMIZE_AREA, Constraint(ConstraintKind.DIAMETER_AT_MOST, diameter), n
    )
    model = _GrahamModel(n, config.convexity_margin)
    candidates = run_starts(
        lambda i, s: _search_start(model, config, i, s),
        config.seed,
        config.starts,
        config.workers,
    )
    return reduce_candidates(problem, candidates, config, "graham")
