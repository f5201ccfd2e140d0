"""Multistart search for extremal n-gons under one measurement constraint.

Each start places random vertices on a circle, or, for the first few starts
under a diameter constraint, perturbs a clipped Reuleaux polygon. The start
is scaled to the active constraint, warmed up on a penalty energy with
L-BFGS-B and polished with SLSQP under hard constraints. Width enters
through edge/antipode pairs that are reassigned between rounds, so every
width row is a smooth function of the coordinates.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from enum import Enum
from functools import lru_cache
from itertools import combinations
from typing import Callable, Dict, List, Literal, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy.optimize import minimize

from .bounds import (
    max_area_given_diameter,
    max_area_given_perimeter,
    max_perimeter_given_diameter,
    max_width_given_diameter,
    max_width_given_perimeter,
)
from .config import MAX_SEARCH_N, PROFILE_DEFAULTS, Settings, Tolerances
from .errors import Infeasible, MalformedPolygon
from .families import audet_ninin_reference, equilateral_max_area_reference
from .geometry import ConvexPolygon, Metrics, metrics
from .recorder import BestLine, StartLine, TraceHeader, TraceWriter
from .reinhardt import construct, enumerate_signatures
from .utils import central_gradient, central_jacobian, random_cyclic_polygon

GradientMode = Literal["analytic", "central"]


class Objective(str, Enum):
    MAXIMIZE_AREA = "area"
    MAXIMIZE_PERIMETER = "perimeter"
    MAXIMIZE_WIDTH = "width"


class ConstraintKind(str, Enum):
    DIAMETER_AT_MOST = "diameter"
    WIDTH_AT_LEAST = "width"
    PERIMETER_AT_MOST = "perimeter"


@dataclass(frozen=True)
class Constraint:
    kind: ConstraintKind
    value: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.value) and self.value > 0):
            raise ValueError(f"constraint value must be positive, got {self.value}")

    @classmethod
    def parse(cls, text: str) -> "Constraint":
        """Parse `diameter=1`, `width=2.5` or `perimeter=3`."""

        name, sep, raw = text.partition("=")
        if not sep:
            raise ValueError(f"constraint must look like quantity=value, got {text!r}")
        try:
            kind = ConstraintKind(name.strip().lower())
        except ValueError:
            raise ValueError(f"unknown constraint quantity {name!r}") from None
        return cls(kind, float(raw))

    def __str__(self) -> str:
        return f"{self.kind.value}={self.value!r}"


def _measure(m: Metrics, quantity: str) -> float:
    return float(getattr(m, quantity))


@dataclass(frozen=True)
class OptimizationProblem:
    objective: Objective
    constraint: Constraint
    n: int
    equilateral: bool = False

    def validate(self, max_n: int = MAX_SEARCH_N) -> None:
        if int(self.n) != self.n or self.n < 3:
            raise ValueError(f"n must be an integer >= 3, got {self.n}")
        if self.n > max_n:
            raise ValueError(f"n={self.n} is above the search limit {max_n}")
        if self.objective.value == self.constraint.kind.value:
            raise ValueError("objective and constraint measure the same quantity")
        if self.constraint.kind is ConstraintKind.WIDTH_AT_LEAST and not (
            self.equilateral and self.n % 2 == 1
        ):
            raise ValueError(
                "fixed-width problems are unbounded unless the polygon is equilateral with odd n"
            )

    def bound(self) -> float:
        """Closed-form upper bound for the objective at this constraint value."""

        n, v = self.n, self.constraint.value
        kind, obj = self.constraint.kind, self.objective
        if kind is ConstraintKind.DIAMETER_AT_MOST:
            if obj is Objective.MAXIMIZE_AREA:
                if self.equilateral:
                    return equilateral_max_area_reference(n, v)
                return max_area_given_diameter(n, v)
            if obj is Objective.MAXIMIZE_PERIMETER:
                return max_perimeter_given_diameter(n, v)
            return max_width_given_diameter(n, v)
        if kind is ConstraintKind.PERIMETER_AT_MOST:
            if obj is Objective.MAXIMIZE_AREA:
                return max_area_given_perimeter(n, v)
            return max_width_given_perimeter(n, v)
        reference = audet_ninin_reference(n, v)
        if obj is Objective.MAXIMIZE_AREA:
            return reference.area
        return reference.perimeter

    def to_dict(self) -> Dict[str, object]:
        return {
            "objective": self.objective.value,
            "constraint": str(self.constraint),
            "n": self.n,
            "equilateral": self.equilateral,
        }


@dataclass
class SolverConfig:
    starts: int = 64
    seed: int = 0
    max_iter: int = 500
    penalty_rounds: int = 3
    penalty_weight: float = 10.0
    ftol: float = 1e-12
    width_rounds: int = 6
    seeded_starts: int = 4
    convexity_margin: float = 1e-9
    workers: int = 1
    gradient: GradientMode = "analytic"
    tolerances: Tolerances = field(default_factory=Tolerances)
    record_path: str | None = None

    @classmethod
    def from_profile(
        cls, name: str = "desk", settings: Settings | None = None, **overrides
    ) -> "SolverConfig":
        profiles = settings.profiles if settings is not None else PROFILE_DEFAULTS
        if name not in profiles:
            raise ValueError(f"unknown solver profile {name!r}")
        values = dict(profiles[name])
        unknown = set(values) - {f.name for f in fields(cls)}
        if unknown:
            raise ValueError(f"profile {name!r} has unknown keys {sorted(unknown)}")
        if settings is not None:
            values["tolerances"] = settings.tolerances
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def config_hash(self) -> str:
        payload = {k: v for k, v in asdict(self).items() if k not in ("record_path", "workers")}
        blob = json.dumps(payload, sort_keys=True, default=str).encode("utf-8")
        return hashlib.sha256(blob).hexdigest()[:12]


@dataclass
class OptimizationResult:
    problem: OptimizationProblem
    best: ConvexPolygon
    value: float
    bound: float
    gap: float
    starts: int
    seed: int
    converged: bool
    method: str = "multistart"
    feasible_starts: int = 0
    history: List[float] = field(default_factory=list)

    def summary(self) -> Dict[str, object]:
        return {
            "method": self.method,
            "value": self.value,
            "bound": self.bound,
            "gap": self.gap,
            "starts": self.starts,
            "feasible_starts": self.feasible_starts,
            "seed": self.seed,
            "converged": self.converged,
        }


# measurement kernels: value plus gradient with respect to the (n, 2) coordinates


def area_with_grad(coords: np.ndarray) -> Tuple[float, np.ndarray]:
    x, y = coords[:, 0], coords[:, 1]
    nxt, prv = np.roll(coords, -1, axis=0), np.roll(coords, 1, axis=0)
    value = 0.5 * float(np.dot(x, nxt[:, 1]) - np.dot(nxt[:, 0], y))
    grad = 0.5 * np.column_stack([nxt[:, 1] - prv[:, 1], prv[:, 0] - nxt[:, 0]])
    return value, grad


def perimeter_with_grad(coords: np.ndarray) -> Tuple[float, np.ndarray]:
    edges = np.roll(coords, -1, axis=0) - coords
    lengths = np.hypot(edges[:, 0], edges[:, 1])
    units = edges / lengths[:, None]
    return float(lengths.sum()), np.roll(units, 1, axis=0) - units


def convexity_rows(coords: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Cross product of the two edges at every vertex and its Jacobian (n, n, 2)."""

    n = len(coords)
    a = coords - np.roll(coords, 1, axis=0)
    b = np.roll(coords, -1, axis=0) - coords
    cross = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
    d_a = np.column_stack([b[:, 1], -b[:, 0]])
    d_b = np.column_stack([-a[:, 1], a[:, 0]])
    jac = np.zeros((n, n, 2))
    rows = np.arange(n)
    jac[rows, (rows - 1) % n] -= d_a
    jac[rows, rows] += d_a - d_b
    jac[rows, (rows + 1) % n] += d_b
    return cross, jac


def distance_rows(coords: np.ndarray, pairs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Squared distances of vertex pairs and their Jacobian (len(pairs), n, 2)."""

    n = len(coords)
    diff = coords[pairs[:, 0]] - coords[pairs[:, 1]]
    jac = np.zeros((len(pairs), n, 2))
    rows = np.arange(len(pairs))
    jac[rows, pairs[:, 0]] = 2.0 * diff
    jac[rows, pairs[:, 1]] = -2.0 * diff
    return np.einsum("ij,ij->i", diff, diff), jac


def line_distance_row(coords: np.ndarray, edge: int, point: int) -> Tuple[float, np.ndarray]:
    """Signed distance of a vertex from the line through an edge (inside positive)."""

    n = len(coords)
    start, end = edge, (edge + 1) % n
    e = coords[end] - coords[start]
    q = coords[point] - coords[start]
    length = math.hypot(e[0], e[1])
    cross = e[0] * q[1] - e[1] * q[0]
    d_e = np.array([q[1], -q[0]]) / length - cross * e / length**3
    d_q = np.array([-e[1], e[0]]) / length
    grad = np.zeros((n, 2))
    grad[end] += d_e
    grad[point] += d_q
    grad[start] -= d_e + d_q
    return cross / length, grad


def equal_side_rows(coords: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """|e_i|^2 - |e_0|^2 for i >= 1 and the Jacobian (n - 1, n, 2)."""

    n = len(coords)
    edges = np.roll(coords, -1, axis=0) - coords
    squares = np.einsum("ij,ij->i", edges, edges)
    full = np.zeros((n, n, 2))
    rows = np.arange(n)
    full[rows, (rows + 1) % n] += 2.0 * edges
    full[rows, rows] -= 2.0 * edges
    return squares[1:] - squares[0], full[1:] - full[0]


def edge_depths(coords: np.ndarray) -> np.ndarray:
    """depth[i, j]: distance of vertex j from the line of edge i."""

    edges = np.roll(coords, -1, axis=0) - coords
    lengths = np.hypot(edges[:, 0], edges[:, 1])
    rel = coords[None, :, :] - coords[:, None, :]
    cross = edges[:, None, 0] * rel[..., 1] - edges[:, None, 1] * rel[..., 0]
    return cross / lengths[:, None]


class _SearchModel:
    """Objective and constraints for one start, at unit constraint value.

    The variable vector holds the flattened vertex coordinates, followed by
    the epigraph level t when width is maximised.
    """

    def __init__(self, problem: OptimizationProblem, config: SolverConfig) -> None:
        self.problem = problem
        self.n = problem.n
        self.kind = problem.constraint.kind
        self.epigraph = problem.objective is Objective.MAXIMIZE_WIDTH
        self.uses_width = self.epigraph or self.kind is ConstraintKind.WIDTH_AT_LEAST
        self.size = 2 * self.n + (1 if self.epigraph else 0)
        self.margin = config.convexity_margin
        self.central = config.gradient == "central"
        self.pairs = np.array(list(combinations(range(self.n), 2)))
        self.antipodes = np.zeros(self.n, dtype=int)
        self.narrowest = 0

    def coords(self, z: np.ndarray) -> np.ndarray:
        return np.asarray(z[: 2 * self.n]).reshape(self.n, 2)

    def pack(self, coords: np.ndarray) -> np.ndarray:
        z = np.asarray(coords, dtype=float).ravel()
        if self.epigraph:
            z = np.append(z, edge_depths(coords).max(axis=1).min())
        return z

    def _pad(self, jac: np.ndarray) -> np.ndarray:
        flat = jac.reshape(len(jac), 2 * self.n)
        if self.epigraph:
            flat = np.hstack([flat, np.zeros((len(flat), 1))])
        return flat

    def refresh(self, z: np.ndarray) -> bool:
        """Reassign the farthest vertex of every edge; True if anything moved."""

        if not self.uses_width:
            return False
        depths = edge_depths(self.coords(z))
        antipodes = depths.argmax(axis=1)
        narrowest = int(depths.max(axis=1).argmin())
        changed = not np.array_equal(antipodes, self.antipodes) or narrowest != self.narrowest
        self.antipodes = antipodes
        self.narrowest = narrowest
        return changed

    def _value(self, z: np.ndarray) -> Tuple[float, np.ndarray]:
        if self.epigraph:
            grad = np.zeros(self.size)
            grad[-1] = 1.0
            return float(z[-1]), grad
        coords = self.coords(z)
        if self.problem.objective is Objective.MAXIMIZE_AREA:
            value, grad = area_with_grad(coords)
        else:
            value, grad = perimeter_with_grad(coords)
        return value, grad.ravel()

    def value(self, z: np.ndarray) -> Tuple[float, np.ndarray]:
        value, grad = self._value(z)
        if self.central:
            grad = central_gradient(lambda x: self._value(x)[0], z)
        return value, grad

    def _inequalities(self, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        coords = self.coords(z)
        cross, cross_jac = convexity_rows(coords)
        values = [cross - self.margin]
        jacs = [self._pad(cross_jac)]

        if self.kind is ConstraintKind.DIAMETER_AT_MOST:
            sq, sq_jac = distance_rows(coords, self.pairs)
            values.append(1.0 - sq)
            jacs.append(-self._pad(sq_jac))
        elif self.kind is ConstraintKind.PERIMETER_AT_MOST:
            p, p_grad = perimeter_with_grad(coords)
            values.append(np.array([1.0 - p]))
            jacs.append(-self._pad(p_grad[None]))
        else:
            rows, grads = [], []
            for i in range(self.n):
                h, g = line_distance_row(coords, i, int(self.antipodes[i]))
                rows.append(h - 1.0)
                grads.append(g)
            k = self.narrowest
            for j in range(self.n):
                if j in (k, (k + 1) % self.n):
                    continue
                h, g = line_distance_row(coords, k, j)
                rows.append(1.0 - h)
                grads.append(-g)
            values.append(np.asarray(rows))
            jacs.append(self._pad(np.asarray(grads)))

        if self.epigraph:
            rows, grads = [], []
            for i in range(self.n):
                h, g = line_distance_row(coords, i, int(self.antipodes[i]))
                rows.append(h - z[-1])
                grads.append(g)
            block = self._pad(np.asarray(grads))
            block[:, -1] = -1.0
            values.append(np.asarray(rows))
            jacs.append(block)
        return np.concatenate(values), np.vstack(jacs)

    def inequalities(self, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        values, jac = self._inequalities(z)
        if self.central:
            jac = central_jacobian(lambda x: self._inequalities(x)[0], z)
        return values, jac

    def _equalities(self, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        if not self.problem.equilateral:
            return np.zeros(0), np.zeros((0, self.size))
        values, jac = equal_side_rows(self.coords(z))
        return values, self._pad(jac)

    def equalities(self, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        values, jac = self._equalities(z)
        if self.central and len(values):
            jac = central_jacobian(lambda x: self._equalities(x)[0], z)
        return values, jac

    def penalty(self, z: np.ndarray, weight: float) -> Tuple[float, np.ndarray]:
        f, df = self.value(z)
        g, jg = self.inequalities(z)
        h, jh = self.equalities(z)
        slack = np.minimum(g, 0.0)
        energy = -f + weight * (slack @ slack + h @ h)
        grad = -df + 2.0 * weight * (jg.T @ slack + jh.T @ h)
        return energy, grad

    def scipy_constraints(self) -> List[Dict[str, Callable]]:
        constraints = [
            {
                "type": "ineq",
                "fun": lambda z: self.inequalities(z)[0],
                "jac": lambda z: self.inequalities(z)[1],
            }
        ]
        if self.problem.equilateral:
            constraints.append(
                {
                    "type": "eq",
                    "fun": lambda z: self.equalities(z)[0],
                    "jac": lambda z: self.equalities(z)[1],
                }
            )
        return constraints


@dataclass
class StartOutcome:
    index: int
    polygon: ConvexPolygon | None
    value: float
    feasible: bool
    converged: bool


def normalize_to_constraint(polygon: ConvexPolygon, kind: ConstraintKind) -> ConvexPolygon:
    """Scale so the constrained quantity equals exactly one."""

    measured = _measure(metrics(polygon), kind.value)
    return polygon.scaled(1.0 / measured)


def is_feasible(
    polygon: ConvexPolygon,
    problem: OptimizationProblem,
    tolerances: Tolerances,
    scale: float = 1.0,
) -> bool:
    """Constraint within the feasibility tolerance (relative), plus equal sides if required."""

    tol = tolerances.feasibility
    measured = _measure(metrics(polygon), problem.constraint.kind.value)
    target = problem.constraint.value * scale
    if problem.constraint.kind is ConstraintKind.WIDTH_AT_LEAST:
        ok = measured >= target * (1.0 - tol)
    else:
        ok = measured <= target * (1.0 + tol)
    if ok and problem.equilateral:
        sides = polygon.side_lengths()
        ok = float(sides.max() - sides.min()) <= tol * float(sides.mean())
    return ok


def _objective_scale(objective: Objective, v: float) -> float:
    return v * v if objective is Objective.MAXIMIZE_AREA else v


def run_starts(
    search: Callable[[int, np.random.SeedSequence], StartOutcome],
    seed: int,
    starts: int,
    workers: int,
) -> List[StartOutcome]:
    seeds = np.random.SeedSequence(seed).spawn(starts)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(search, range(starts), seeds))
    return [search(i, s) for i, s in enumerate(seeds)]


def _open_trace(
    problem: OptimizationProblem,
    candidates: Sequence[StartOutcome],
    config: SolverConfig,
    method: str,
    bound: float,
) -> TraceWriter | None:
    if not config.record_path:
        return None
    header = TraceHeader(
        method=method,
        objective=problem.objective.value,
        constraint=problem.constraint.kind.value,
        constraint_value=problem.constraint.value,
        n=problem.n,
        equilateral=problem.equilateral,
        bound=bound,
        starts=len(candidates),
        seed=config.seed,
        config_hash=config.config_hash(),
    )
    return TraceWriter(config.record_path, header)


def reduce_candidates(
    problem: OptimizationProblem,
    candidates: Sequence[StartOutcome],
    config: SolverConfig,
    method: str,
) -> OptimizationResult:
    """Pick the best feasible candidate by value, then by canonical vertex order."""

    v = problem.constraint.value
    factor = _objective_scale(problem.objective, v)
    bound = problem.bound()
    history: List[float] = []
    best: StartOutcome | None = None
    trace = _open_trace(problem, candidates, config, method, bound)
    try:
        for cand in candidates:
            if cand.feasible and (
                best is None
                or cand.value > best.value
                or (cand.value == best.value and cand.polygon.canonical_key() < best.polygon.canonical_key())
            ):
                best = cand
            if best is not None:
                history.append(best.value * factor)
            scaled = None if math.isnan(cand.value) else cand.value * factor
            logger.bind(start=cand.index, value=scaled, feasible=cand.feasible).info(
                "start {}: value={} feasible={} converged={}",
                cand.index, scaled, cand.feasible, cand.converged,
            )
            if trace is not None:
                trace.start(
                    StartLine(
                        index=cand.index,
                        value=scaled,
                        feasible=cand.feasible,
                        converged=cand.converged,
                        best=history[-1] if history else None,
                    )
                )
        if best is None:
            raise Infeasible(f"none of {len(candidates)} starts produced a feasible polygon")

        polygon = best.polygon.scaled(v)
        value = _measure(metrics(polygon), problem.objective.value)
        if trace is not None:
            trace.finish(
                BestLine(
                    index=best.index,
                    value=value,
                    gap=bound - value,
                    vertices=polygon.coords.tolist(),
                )
            )
    finally:
        if trace is not None:
            trace.close()

    feasible_starts = sum(1 for c in candidates if c.feasible)
    logger.info(
        "{} n={} {}: value={:.12g} bound={:.12g} ({} of {} starts feasible)",
        method, problem.n, problem.objective.value, value, bound, feasible_starts, len(candidates),
    )
    return OptimizationResult(
        problem=problem,
        best=polygon,
        value=value,
        bound=bound,
        gap=bound - value,
        starts=len(candidates),
        seed=config.seed,
        converged=best.converged,
        method=method,
        feasible_starts=feasible_starts,
        history=history,
    )


SEED_JITTER = 1e-3


@lru_cache(maxsize=None)
def reinhardt_seeds(n: int) -> Tuple[np.ndarray, ...]:
    """Unit-diameter clipped Reuleaux n-gons, one per signature class."""

    return tuple(construct(c).polygon.coords for c, _ in enumerate_signatures(n))


def _initial_coords(
    model: _SearchModel, rng: np.random.Generator, index: int, seeded_starts: int
) -> np.ndarray:
    seeds = reinhardt_seeds(model.n) if model.kind is ConstraintKind.DIAMETER_AT_MOST else ()
    if seeds and index < seeded_starts:
        base = seeds[index % len(seeds)]
        coords = base + rng.normal(scale=SEED_JITTER * index, size=base.shape)
        gaps = np.linalg.norm(coords[:, None, :] - coords[None, :, :], axis=2)
        return coords / gaps.max()
    coords = random_cyclic_polygon(rng, model.n, radius=0.5)
    measured = _measure(metrics(ConvexPolygon(coords)), model.kind.value)
    return coords / measured


def _search_start(
    problem: OptimizationProblem,
    config: SolverConfig,
    index: int,
    seed: np.random.SeedSequence,
) -> StartOutcome:
    model = _SearchModel(problem, config)
    rng = np.random.default_rng(seed)
    z = model.pack(_initial_coords(model, rng, index, config.seeded_starts))

    weight = config.penalty_weight
    for _ in range(config.penalty_rounds):
        model.refresh(z)
        res = minimize(
            model.penalty,
            z,
            args=(weight,),
            method="L-BFGS-B",
            jac=True,
            options={"maxiter": config.max_iter},
        )
        z = res.x
        weight *= 10.0

    converged = False
    rounds = config.width_rounds if model.uses_width else 1
    model.refresh(z)
    for _ in range(max(1, rounds)):
        res = minimize(
            lambda x: -model.value(x)[0],
            z,
            jac=lambda x: -model.value(x)[1],
            method="SLSQP",
            constraints=model.scipy_constraints(),
            options={"maxiter": config.max_iter, "ftol": config.ftol},
        )
        z = res.x
        converged = bool(res.success)
        if not model.refresh(z):
            break
    return _finish(problem, config, index, model.coords(z), converged)


def _finish(
    problem: OptimizationProblem,
    config: SolverConfig,
    index: int,
    coords: np.ndarray,
    converged: bool,
) -> StartOutcome:
    try:
        polygon = ConvexPolygon(coords, config.tolerances)
        polygon = normalize_to_constraint(polygon, problem.constraint.kind)
    except (MalformedPolygon, ValueError) as exc:
        logger.debug("start {} ended on a degenerate polygon: {}", index, exc)
        return StartOutcome(index, None, math.nan, False, converged)
    unit = OptimizationProblem(
        problem.objective, Constraint(problem.constraint.kind, 1.0), problem.n, problem.equilateral
    )
    feasible = is_feasible(polygon, unit, config.tolerances)
    value = _measure(metrics(polygon), problem.objective.value)
    return StartOutcome(index, polygon, value, feasible, converged)


def solve(problem: OptimizationProblem, config: SolverConfig | None = None) -> OptimizationResult:
    config = config or SolverConfig()
    problem.validate()
    if config.starts < 1:
        raise ValueError("starts must be at least 1")
    logger.debug(
        "solving {} with {} starts (seed {}, profile hash {})",
        problem.to_dict(), config.starts, config.seed, config.config_hash(),
    )
    candidates = run_starts(
        lambda i, s: _search_start(problem, config, i, s),
        config.seed,
        config.starts,
        config.workers,
    )
    return reduce_candidates(problem, candidates, config, "multistart")
