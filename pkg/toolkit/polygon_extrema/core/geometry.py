"""Planar convex polygon kernel: metrics, convexity, symmetrization, diameter graph."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, NamedTuple, Sequence, Tuple

import numpy as np

from .config import TOLERANCES, Tolerances
from .errors import MalformedPolygon, NotCentrallySymmetric


class Point(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class Metrics:
    area: float
    perimeter: float
    width: float
    diameter: float

    def scaled(self, factor: float) -> "Metrics":
        return Metrics(
            area=self.area * factor * factor,
            perimeter=self.perimeter * factor,
            width=self.width * factor,
            diameter=self.diameter * factor,
        )


class ConvexityCheck(NamedTuple):
    convex: bool
    index: int | None


def _as_coords(vertices: Iterable[Sequence[float]] | np.ndarray) -> np.ndarray:
    coords = np.array(vertices, dtype=float)
    if coords.ndim != 2 or coords.shape[1] != 2:
        raise MalformedPolygon("vertices must be a sequence of (x, y) pairs")
    return coords


def _signed_area(coords: np.ndarray) -> float:
    x, y = coords[:, 0], coords[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def is_convex(
    vertices: Iterable[Sequence[float]] | np.ndarray, tol: float | None = None
) -> ConvexityCheck:
    """Weak convexity test for a counterclockwise vertex sequence.

    Collinear triples are admitted. Returns the index of the first vertex at
    which the boundary turns clockwise, or where the accumulated turning
    overshoots one full revolution.
    """

    tol = TOLERANCES.cross if tol is None else tol
    coords = np.asarray(vertices, dtype=float)
    n = len(coords)
    if n < 3:
        return ConvexityCheck(False, None)
    edges = np.roll(coords, -1, axis=0) - coords
    following = np.roll(edges, -1, axis=0)
    cross = edges[:, 0] * following[:, 1] - edges[:, 1] * following[:, 0]
    dot = edges[:, 0] * following[:, 0] + edges[:, 1] * following[:, 1]
    # cross[i] is the turn at vertex i + 1
    bad = np.nonzero(cross < -tol)[0]
    if bad.size:
        return ConvexityCheck(False, int((bad[0] + 1) % n))
    turning = np.arctan2(cross, dot)
    total = float(turning.sum())
    if abs(total - 2.0 * math.pi) > 1e-9:
        over = np.nonzero(np.cumsum(turning) > 2.0 * math.pi + 1e-9)[0]
        if over.size:
            return ConvexityCheck(False, int((over[0] + 1) % n))
        return ConvexityCheck(False, int((np.argmax(np.abs(turning)) + 1) % n))
    return ConvexityCheck(True, None)


def is_strictly_convex(polygon: "ConvexPolygon", tol: float | None = None) -> bool:
    tol = TOLERANCES.cross if tol is None else tol
    coords = polygon.coords
    edges = np.roll(coords, -1, axis=0) - coords
    following = np.roll(edges, -1, axis=0)
    cross = edges[:, 0] * following[:, 1] - edges[:, 1] * following[:, 0]
    return bool(np.all(cross > tol))


class ConvexPolygon:
    """Immutable weakly convex polygon with canonical vertex order.

    Vertices are stored counterclockwise starting from the lexicographically
    smallest (x, y) pair, so equal polygons compare equal.
    """

    __slots__ = ("_coords",)

    def __init__(
        self,
        vertices: Iterable[Sequence[float]] | np.ndarray,
        tolerances: Tolerances = TOLERANCES,
    ) -> None:
        coords = _as_coords(vertices)
        n = len(coords)
        if n < 3:
            raise MalformedPolygon(f"polygon needs at least 3 vertices, got {n}")
        if not np.all(np.isfinite(coords)):
            raise MalformedPolygon("vertex coordinates must be finite")
        area = _signed_area(coords)
        if area == 0.0:
            raise MalformedPolygon("polygon has zero area")
        if area < 0.0:
            coords = coords[::-1].copy()
        gaps = np.hypot(*(np.roll(coords, -1, axis=0) - coords).T)
        close = np.nonzero(gaps <= tolerances.vertex_separation)[0]
        if close.size:
            raise MalformedPolygon(
                f"vertices {int(close[0])} and {int((close[0] + 1) % n)} coincide",
                int(close[0]),
            )
        check = is_convex(coords, tolerances.cross)
        if not check.convex:
            raise MalformedPolygon(
                f"polygon is not convex at vertex {check.index}", check.index
            )
        start = min(range(n), key=lambda i: (coords[i, 0], coords[i, 1]))
        coords = np.roll(coords, -start, axis=0)
        coords.setflags(write=False)
        self._coords = coords

    @property
    def coords(self) -> np.ndarray:
        return self._coords

    @property
    def vertices(self) -> Tuple[Point, ...]:
        return tuple(Point(float(x), float(y)) for x, y in self._coords)

    @property
    def n(self) -> int:
        return len(self._coords)

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConvexPolygon):
            return NotImplemented
        return self._coords.shape == other._coords.shape and bool(
            np.array_equal(self._coords, other._coords)
        )

    def __hash__(self) -> int:
        return hash(self._coords.tobytes())

    def __repr__(self) -> str:
        return f"ConvexPolygon(n={self.n})"

    def edges(self) -> np.ndarray:
        return np.roll(self._coords, -1, axis=0) - self._coords

    def side_lengths(self) -> np.ndarray:
        return np.hypot(*self.edges().T)

    def scaled(self, factor: float) -> "ConvexPolygon":
        if factor <= 0:
            raise ValueError("scale factor must be positive")
        return ConvexPolygon(self._coords * factor)

    def translated(self, dx: float, dy: float) -> "ConvexPolygon":
        return ConvexPolygon(self._coords + np.array([dx, dy]))

    def rotated(self, angle: float) -> "ConvexPolygon":
        c, s = math.cos(angle), math.sin(angle)
        rot = np.array([[c, -s], [s, c]])
        return ConvexPolygon(self._coords @ rot.T)

    def metrics(self) -> Metrics:
        return metrics(self)

    def canonical_key(self) -> Tuple[float, ...]:
        return tuple(float(v) for v in self._coords.ravel())


def area(polygon: ConvexPolygon) -> float:
    return _signed_area(polygon.coords)


def perimeter(polygon: ConvexPolygon) -> float:
    return float(polygon.side_lengths().sum())


def _orientation(p: np.ndarray, q: np.ndarray, r: np.ndarray) -> float:
    # positive if p-q-r turn clockwise
    return (q[1] - p[1]) * (r[0] - p[0]) - (q[0] - p[0]) * (r[1] - p[1])


def _hull_chains(coords: np.ndarray) -> Tuple[List[int], List[int]]:
    order = sorted(range(len(coords)), key=lambda i: (coords[i, 0], coords[i, 1]))
    upper: List[int] = []
    lower: List[int] = []
    for i in order:
        while len(upper) > 1 and _orientation(coords[upper[-2]], coords[upper[-1]], coords[i]) <= 0:
            upper.pop()
        while len(lower) > 1 and _orientation(coords[lower[-2]], coords[lower[-1]], coords[i]) >= 0:
            lower.pop()
        upper.append(i)
        lower.append(i)
    return upper, lower


def antipodal_pairs(coords: np.ndarray) -> Iterator[Tuple[int, int]]:
    """Rotating calipers over the upper and lower hull chains.

    Yields every pair of vertex indices touched simultaneously by two parallel
    supporting lines.
    """

    upper, lower = _hull_chains(coords)
    i, j = 0, len(lower) - 1
    while i < len(upper) - 1 or j > 0:
        yield upper[i], lower[j]
        if i == len(upper) - 1:
            j -= 1
        elif j == 0:
            i += 1
        else:
            u0, u1 = coords[upper[i]], coords[upper[i + 1]]
            l0, l1 = coords[lower[j - 1]], coords[lower[j]]
            if (u1[1] - u0[1]) * (l1[0] - l0[0]) > (l1[1] - l0[1]) * (u1[0] - u0[0]):
                i += 1
            else:
                j -= 1


def diameter_pair(polygon: ConvexPolygon) -> Tuple[float, int, int]:
    coords = polygon.coords
    best = (-1.0, 0, 0)
    for i, j in antipodal_pairs(coords):
        dist = float(math.hypot(*(coords[i] - coords[j])))
        if dist > best[0]:
            best = (dist, min(i, j), max(i, j))
    return best


def diameter(polygon: ConvexPolygon) -> float:
    return diameter_pair(polygon)[0]


def support_widths(polygon: ConvexPolygon) -> np.ndarray:
    """Width of the polygon perpendicular to each of its edges."""

    coords = polygon.coords
    edges = polygon.edges()
    lengths = np.hypot(*edges.T)
    normals = np.column_stack([-edges[:, 1], edges[:, 0]]) / lengths[:, None]
    proj = coords @ normals.T
    return proj.max(axis=0) - proj.min(axis=0)


def width(polygon: ConvexPolygon) -> float:
    return float(support_widths(polygon).min())


def metrics(polygon: ConvexPolygon) -> Metrics:
    """Area (shoelace), perimeter, width and diameter of a convex polygon."""

    if not isinstance(polygon, ConvexPolygon):
        polygon = ConvexPolygon(polygon)
    return Metrics(
        area=area(polygon),
        perimeter=perimeter(polygon),
        width=width(polygon),
        diameter=diameter(polygon),
    )


def _drop_collinear(coords: np.ndarray, tol: float) -> np.ndarray:
    keep = []
    n = len(coords)
    for i in range(n):
        a = coords[i] - coords[i - 1]
        b = coords[(i + 1) % n] - coords[i]
        cross = a[0] * b[1] - a[1] * b[0]
        dot = a[0] * b[0] + a[1] * b[1]
        scale = math.hypot(*a) * math.hypot(*b)
        if dot > 0 and abs(cross) <= tol * scale:
            continue
        keep.append(i)
    return coords[keep]


def central_symmetrize(
    polygon: ConvexPolygon, tolerances: Tolerances = TOLERANCES
) -> ConvexPolygon:
    """Difference body P* = (P - P) / 2 by merging edge directions.

    The Minkowski sum of P/2 and -P/2 is walked from the sum of their lowest
    (then leftmost) vertices along all edge vectors sorted by direction; parallel
    edges collapse, so the result has at most 2n sides.
    """

    half = polygon.coords / 2.0
    edges = np.roll(half, -1, axis=0) - half
    all_edges = np.vstack([edges, -edges])
    angles = np.mod(np.arctan2(all_edges[:, 1], all_edges[:, 0]), 2.0 * math.pi)
    ordered = all_edges[np.argsort(angles, kind="stable")]

    def _lowest(points: np.ndarray) -> np.ndarray:
        idx = min(range(len(points)), key=lambda i: (points[i, 1], points[i, 0]))
        return points[idx]

    start = _lowest(half) + _lowest(-half)
    walk = start + np.vstack([np.zeros((1, 2)), np.cumsum(ordered, axis=0)[:-1]])
    return ConvexPolygon(_drop_collinear(walk, tolerances.cross), tolerances)


def is_centrally_symmetric(polygon: ConvexPolygon, tol: float | None = None) -> bool:
    tol = TOLERANCES.symmetry if tol is None else tol
    coords = polygon.coords
    scale = max(1.0, float(np.abs(coords).max()))
    gaps = np.linalg.norm(coords[:, None, :] + coords[None, :, :], axis=2)
    return bool(np.all(gaps.min(axis=1) <= tol * scale))


def symmetric_radii(
    polygon: ConvexPolygon, tol: float | None = None
) -> Tuple[float, float]:
    """(inradius, circumradius) of a polygon symmetric about the origin."""

    if not is_centrally_symmetric(polygon, tol):
        raise NotCentrallySymmetric("polygon is not symmetric about the origin")
    coords = polygon.coords
    following = np.roll(coords, -1, axis=0)
    cross = coords[:, 0] * following[:, 1] - coords[:, 1] * following[:, 0]
    inradius = float(np.min(np.abs(cross) / polygon.side_lengths()))
    circumradius = float(np.hypot(*coords.T).max())
    return inradius, circumradius


@dataclass(frozen=True)
class DiameterGraph:
    n: int
    edges: Tuple[Tuple[int, int], ...]
    tolerance: float

    def degrees(self) -> List[int]:
        deg = [0] * self.n
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def neighbors(self) -> Dict[int, List[int]]:
        adj: Dict[int, List[int]] = {i: [] for i in range(self.n)}
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def is_cycle_with_pendant(self) -> bool:
        """An (n-1)-cycle plus one edge hanging off a cycle vertex."""

        if len(self.edges) != self.n:
            return False
        deg = self.degrees()
        leaves = [v for v, k in enumerate(deg) if k == 1]
        if len(leaves) != 1:
            return False
        adj = self.neighbors()
        leaf = leaves[0]
        hub = adj[leaf][0]
        if deg[hub] != 3:
            return False
        if any(k != 2 for v, k in enumerate(deg) if v not in (leaf, hub)):
            return False
        cycle_adj = {v: [u for u in adj[v] if u != leaf] for v in adj if v != leaf}
        seen = {hub}
        prev, cur = hub, cycle_adj[hub][0]
        while cur != hub:
            seen.add(cur)
            nxt = [u for u in cycle_adj[cur] if u != prev]
            if not nxt:
                return False
            prev, cur = cur, nxt[0]
        return len(seen) == self.n - 1


def pairwise_distances(polygon: ConvexPolygon) -> np.ndarray:
    coords = polygon.coords
    return np.linalg.norm(coords[:, None, :] - coords[None, :, :], axis=2)


def diameter_graph(polygon: ConvexPolygon, tol: float = 1e-9) -> DiameterGraph:
    if not 0.0 <= tol <= 1e-3:
        raise ValueError(f"tolerance {tol} outside [0, 1e-3]")
    dist = pairwise_distances(polygon)
    d = float(dist.max())
    rows, cols = np.nonzero(np.triu(dist >= (1.0 - tol) * d, k=1))
    edges = tuple(sorted((int(i), int(j)) for i, j in zip(rows, cols)))
    return DiameterGraph(n=polygon.n, edges=edges, tolerance=tol)
