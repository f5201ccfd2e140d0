"""Closed-form extremal inequalities for convex n-gons and polygon verification."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Tuple

from .config import TOLERANCES, Tolerances
from .geometry import ConvexPolygon, central_symmetrize, metrics
from .utils import has_odd_factor

SQRT3 = math.sqrt(3.0)


class InequalityId(str, Enum):
    ZENODORUS_ISOPERIMETRIC = "ZenodorusIsoperimetric"
    REINHARDT_PERIMETER_DIAMETER = "ReinhardtPerimeterDiameter"
    REINHARDT_AREA_DIAMETER = "ReinhardtAreaDiameter"
    GASHKOV_PERIMETER_WIDTH = "GashkovPerimeterWidth"
    GASHKOV_WIDTH_DIAMETER = "GashkovWidthDiameter"
    PAL_AREA_WIDTH = "PalAreaWidth"
    EQUILATERAL_AREA_DIAMETER = "EquilateralAreaDiameter"


# inequalities whose bound is a lower bound on the observed quantity
_LOWER_BOUNDS = {InequalityId.GASHKOV_PERIMETER_WIDTH, InequalityId.PAL_AREA_WIDTH}


def _check_n(n: int) -> None:
    if int(n) != n or n < 3:
        raise ValueError(f"n must be an integer >= 3, got {n}")


def _check_positive(name: str, value: float) -> None:
    if not value > 0:
        raise ValueError(f"{name} must be positive, got {value}")


def max_area_given_perimeter(n: int, p: float) -> float:
    _check_n(n)
    _check_positive("p", p)
    return p * p / (4.0 * n * math.tan(math.pi / n))


def max_perimeter_given_diameter(n: int, d: float) -> float:
    _check_n(n)
    _check_positive("d", d)
    return 2.0 * n * math.sin(math.pi / (2 * n)) * d


def max_area_given_diameter(n: int, d: float) -> float:
    _check_n(n)
    _check_positive("d", d)
    return 0.5 * n * math.cos(math.pi / n) * math.tan(math.pi / (2 * n)) * d * d


def max_area_given_diameter_equilateral(n: int, d: float) -> float:
    """The closed form quoted for equilateral n-gons of diameter d.

    It coincides with the general area bound; for even n the equilateral
    maximum is the (smaller) area of the regular n-gon.
    """

    return max_area_given_diameter(n, d)


def min_perimeter_given_width(n: int, w: float) -> float:
    _check_n(n)
    _check_positive("w", w)
    return 2.0 * n * math.tan(math.pi / (2 * n)) * w


def max_width_given_diameter(n: int, d: float) -> float:
    _check_n(n)
    _check_positive("d", d)
    return math.cos(math.pi / (2 * n)) * d


def max_width_given_perimeter(n: int, p: float) -> float:
    _check_n(n)
    _check_positive("p", p)
    return p / (2.0 * n * math.tan(math.pi / (2 * n)))


def min_area_given_width(w: float) -> float:
    _check_positive("w", w)
    return w * w / SQRT3


def attainable(inequality: InequalityId, n: int) -> bool:
    """Whether some convex n-gon attains equality."""

    _check_n(n)
    if inequality is InequalityId.ZENODORUS_ISOPERIMETRIC:
        return True
    if inequality in (
        InequalityId.REINHARDT_PERIMETER_DIAMETER,
        InequalityId.GASHKOV_PERIMETER_WIDTH,
        InequalityId.GASHKOV_WIDTH_DIAMETER,
    ):
        return has_odd_factor(n)
    if inequality in (
        InequalityId.REINHARDT_AREA_DIAMETER,
        InequalityId.EQUILATERAL_AREA_DIAMETER,
    ):
        return n % 2 == 1
    return n == 3


def bound_value(inequality: InequalityId, n: int, a: float, p: float, w: float, d: float) -> Tuple[float, float]:
    """(bound, observed) for one inequality given the four measurements."""

    if inequality is InequalityId.ZENODORUS_ISOPERIMETRIC:
        return max_area_given_perimeter(n, p), a
    if inequality is InequalityId.REINHARDT_PERIMETER_DIAMETER:
        return max_perimeter_given_diameter(n, d), p
    if inequality is InequalityId.REINHARDT_AREA_DIAMETER:
        return max_area_given_diameter(n, d), a
    if inequality is InequalityId.GASHKOV_PERIMETER_WIDTH:
        return min_perimeter_given_width(n, w), p
    if inequality is InequalityId.GASHKOV_WIDTH_DIAMETER:
        return max_width_given_diameter(n, d), w
    if inequality is InequalityId.PAL_AREA_WIDTH:
        return min_area_given_width(w), a
    return max_area_given_diameter_equilateral(n, d), a


@dataclass(frozen=True)
class BoundsEntry:
    inequality: InequalityId
    bound: float
    observed: float
    slack: float
    equality: bool
    attainable: bool


@dataclass
class BoundsReport:
    polygon_id: str
    n: int
    entries: List[BoundsEntry] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations()

    def violations(self, tol: float | None = None) -> List[BoundsEntry]:
        tol = TOLERANCES.equality if tol is None else tol
        return [e for e in self.entries if e.slack < -tol * max(1.0, abs(e.bound))]

    def equalities(self) -> List[InequalityId]:
        return [e.inequality for e in self.entries if e.equality]

    def entry(self, inequality: InequalityId) -> BoundsEntry:
        for e in self.entries:
            if e.inequality is inequality:
                return e
        raise KeyError(inequality)


def verify(
    polygon: ConvexPolygon,
    polygon_id: str = "polygon",
    tolerances: Tolerances = TOLERANCES,
) -> BoundsReport:
    """Evaluate every inequality on the polygon with n = its vertex count."""

    if not isinstance(polygon, ConvexPolygon):
        polygon = ConvexPolygon(polygon, tolerances)
    n = polygon.n
    m = metrics(polygon)
    report = BoundsReport(polygon_id=polygon_id, n=n)
    for inequality in InequalityId:
        bound, observed = bound_value(
            inequality, n, m.area, m.perimeter, m.width, m.diameter
        )
        if inequality in _LOWER_BOUNDS:
            slack = observed - bound
        else:
            slack = bound - observed
        report.entries.append(
            BoundsEntry(
                inequality=inequality,
                bound=bound,
                observed=observed,
                slack=slack,
                equality=abs(slack) <= tolerances.equality * abs(bound),
                attainable=attainable(inequality, n),
            )
        )
    return report


@dataclass(frozen=True)
class ChainCheck:
    m: int
    lhs: float
    p_star: float
    rhs: float
    holds: bool


def symmetrization_chain_check(
    polygon: ConvexPolygon, tolerances: Tolerances = TOLERANCES
) -> ChainCheck:
    """2m sin(pi/2m) d >= p(P*) >= m tan(pi/m) w with m the side count of P*."""

    base = metrics(polygon)
    star = central_symmetrize(polygon, tolerances)
    m = star.n
    lhs = 2.0 * m * math.sin(math.pi / (2 * m)) * base.diameter
    p_star = metrics(star).perimeter
    rhs = m * math.tan(math.pi / m) * base.width
    tol = tolerances.metric
    holds = lhs >= p_star - tol * lhs and p_star >= rhs - tol * rhs
    return ChainCheck(m=m, lhs=lhs, p_star=p_star, rhs=rhs, holds=holds)


@dataclass(frozen=True)
class ExtremalProblem:
    fixed: str
    target: str
    sense: str
    trivial: bool
    disk_optimum: str
    polygon_inequality: InequalityId | None


def problem_catalog() -> List[ExtremalProblem]:
    """The twelve fix-one-quantity problems for area, perimeter, width, diameter.

    Fixing x and maximising y is the same problem as fixing y and minimising x,
    so each unordered pair contributes one maximisation and one minimisation.
    """

    Z = InequalityId
    return [
        ExtremalProblem("p", "a", "max", False, "circle", Z.ZENODORUS_ISOPERIMETRIC),
        ExtremalProblem("p", "a", "min", True, "0 (segment)", None),
        ExtremalProblem("d", "a", "max", False, "circle", Z.REINHARDT_AREA_DIAMETER),
        ExtremalProblem("d", "a", "min", True, "0 (segment)", None),
        ExtremalProblem("w", "a", "min", False, "regular triangle", Z.PAL_AREA_WIDTH),
        ExtremalProblem("w", "a", "max", True, "infinity", None),
        ExtremalProblem("d", "p", "max", False, "constant width", Z.REINHARDT_PERIMETER_DIAMETER),
        ExtremalProblem("d", "p", "min", True, "degenerate (segment)", None),
        ExtremalProblem("w", "p", "min", False, "constant width", Z.GASHKOV_PERIMETER_WIDTH),
        ExtremalProblem("w", "p", "max", True, "infinity", None),
        ExtremalProblem("d", "w", "max", False, "constant width", Z.GASHKOV_WIDTH_DIAMETER),
        ExtremalProblem("d", "w", "min", True, "0 (segment)", None),
    ]
