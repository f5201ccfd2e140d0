"""Reinhardt (clipped Reuleaux) polygons: signatures, construction, enumeration.

A signature is a composition (c_1, ..., c_m) of n with m odd. The Reuleaux
polygon behind it has a star polygon of length-d diagonals whose angle at
vertex k is c_k * pi / n; the signature is valid when that star closes.

Writing g_j = (-1)^k for s_{k-1} < j <= s_k (s_k the partial sums), the
closure sum equals, up to a non-zero factor, sum_j g_j * zeta^j with zeta a
primitive 2n-th root of unity. Enumeration searches these sign sequences.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from itertools import groupby
from typing import Dict, List, Literal, Sequence, Tuple

import numpy as np
from loguru import logger

from .config import ENUMERATION_CAP, ENUMERATION_HALF_BITS, TOLERANCES, Tolerances
from .cyclotomic import cyclotomic_polynomial, divides, power_residues
from .errors import CapExceeded, ConstructionDegenerate, InvalidSignature, MalformedPolygon
from .geometry import ConvexPolygon, Point
from .utils import odd_divisors

ValidityMode = Literal["numeric", "exact"]


@dataclass(frozen=True)
class Composition:
    n: int
    parts: Tuple[int, ...]

    def __post_init__(self) -> None:
        parts = tuple(int(c) for c in self.parts)
        object.__setattr__(self, "parts", parts)
        m = len(parts)
        if m < 3 or m % 2 == 0:
            raise InvalidSignature(f"signature needs an odd number >= 3 of parts, got {m}")
        if any(c < 1 for c in parts):
            raise InvalidSignature("signature parts must be positive")
        if sum(parts) != self.n:
            raise InvalidSignature(f"parts sum to {sum(parts)}, expected n={self.n}")

    @classmethod
    def of(cls, parts: Sequence[int]) -> "Composition":
        return cls(n=sum(int(c) for c in parts), parts=tuple(parts))

    @property
    def m(self) -> int:
        return len(self.parts)

    def angles(self) -> List[float]:
        return [c * math.pi / self.n for c in self.parts]

    def canonical(self) -> "Composition":
        return Composition(self.n, canonical_parts(self.parts))

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.parts) + ")"


class SymmetryKind(str, Enum):
    PERIODIC = "periodic"
    SPORADIC = "sporadic"


@dataclass(frozen=True)
class SymmetryClass:
    kind: SymmetryKind
    canonical: Composition
    k: int | None = None

    def __str__(self) -> str:
        if self.kind is SymmetryKind.PERIODIC:
            return f"periodic({self.k})"
        return "sporadic"


def canonical_parts(parts: Sequence[int]) -> Tuple[int, ...]:
    """Lexicographically smallest rotation of the word or of its reversal."""

    word = tuple(parts)
    m = len(word)
    candidates = []
    for w in (word, word[::-1]):
        candidates.extend(w[i:] + w[:i] for i in range(m))
    return min(candidates)


def smallest_period(word: Sequence[int]) -> int:
    word = tuple(word)
    m = len(word)
    for p in range(1, m + 1):
        if m % p == 0 and word[p:] + word[:p] == word:
            return p
    return m


def headings(c: Composition) -> np.ndarray:
    """Direction of star edge k: sum over j <= k of (pi - c_j pi / n)."""

    turns = math.pi - np.asarray(c.parts, dtype=float) * math.pi / c.n
    return np.cumsum(turns)


def closure_defect(c: Composition) -> float:
    theta = headings(c)
    return float(math.hypot(np.cos(theta).sum(), np.sin(theta).sum()))


def closure_exponents(c: Composition) -> List[int]:
    """Exponents (s_k + n k) mod 2n of the closure sum in powers of zeta_2n."""

    partial = np.cumsum(c.parts)
    return [int((s + c.n * k) % (2 * c.n)) for k, s in enumerate(partial)]


def is_valid(
    c: Composition, mode: ValidityMode = "numeric", tol: float | None = None
) -> bool:
    if not isinstance(c, Composition):
        raise InvalidSignature("expected a Composition")
    if mode == "numeric":
        tol = TOLERANCES.closure if tol is None else tol
        return closure_defect(c) < tol
    if mode == "exact":
        coeffs = [0] * (2 * c.n)
        for e in closure_exponents(c):
            coeffs[e] += 1
        return divides(cyclotomic_polynomial(2 * c.n), coeffs)
    raise ValueError(f"unknown validity mode {mode!r}")


def sign_sequence(c: Composition) -> Tuple[int, ...]:
    signs: List[int] = []
    for k, part in enumerate(c.parts):
        signs.extend([1 if k % 2 == 0 else -1] * part)
    return tuple(signs)


def composition_from_signs(signs: Sequence[int]) -> Composition:
    runs = [len(list(group)) for _, group in groupby(signs)]
    return Composition(n=len(signs), parts=tuple(runs))


def classify(c: Composition) -> SymmetryClass:
    if not is_valid(c):
        raise InvalidSignature(f"{c} does not close for n={c.n}")
    canonical = c.canonical()
    period = smallest_period(canonical.parts)
    if period < canonical.m:
        return SymmetryClass(SymmetryKind.PERIODIC, canonical, canonical.m // period)
    return SymmetryClass(SymmetryKind.SPORADIC, canonical)


def regular_signature(n: int) -> Composition:
    """Most symmetric signature: n/m repeated m times for the smallest odd m."""

    divisors = odd_divisors(n)
    if not divisors:
        raise InvalidSignature(f"no Reinhardt {n}-gon exists: {n} is a power of 2")
    m = divisors[0]
    return Composition(n, (n // m,) * m)


@dataclass(frozen=True)
class Arc:
    """Radius-d arc about vertex `center`, counterclockwise from start to end."""

    center: int
    start: float
    end: float
    steps: int

    @property
    def angle(self) -> float:
        return self.end - self.start


@dataclass(frozen=True)
class ReuleauxPolygon:
    d: float
    vertices: Tuple[Point, ...]
    arcs: Tuple[Arc, ...]
    signature: Composition

    @property
    def m(self) -> int:
        return len(self.vertices)

    def total_arc_angle(self) -> float:
        return sum(arc.angle for arc in self.arcs)

    def arc_endpoints(self, arc: Arc) -> Tuple[np.ndarray, np.ndarray]:
        ctr = np.asarray(self.vertices[arc.center])
        a = ctr + self.d * np.array([math.cos(arc.start), math.sin(arc.start)])
        b = ctr + self.d * np.array([math.cos(arc.end), math.sin(arc.end)])
        return a, b

    def support(self, direction: float) -> float:
        """Support function h(u) for the unit vector at angle `direction`."""

        u = np.array([math.cos(direction), math.sin(direction)])
        best = -math.inf
        for arc in self.arcs:
            ctr = np.asarray(self.vertices[arc.center])
            rel = (direction - arc.start) % (2.0 * math.pi)
            if rel <= arc.angle:
                value = float(ctr @ u) + self.d
            else:
                a, b = self.arc_endpoints(arc)
                value = max(float(a @ u), float(b @ u))
            best = max(best, value)
        return best

    def width_profile(self, samples: int = 360) -> np.ndarray:
        angles = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)
        return np.array([self.support(a) + self.support(a + math.pi) for a in angles])


def build_reuleaux(
    c: Composition, d: float = 1.0, tolerances: Tolerances = TOLERANCES
) -> ReuleauxPolygon:
    """Walk the star of diagonals and attach the arcs in boundary order."""

    if d <= 0:
        raise ValueError("d must be positive")
    if not is_valid(c, "numeric", tolerances.closure):
        raise InvalidSignature(
            f"star polygon of {c} does not close (defect {closure_defect(c):.3g})"
        )
    m = c.m
    theta = headings(c)
    steps = d * np.column_stack([np.cos(theta), np.sin(theta)])
    star = np.vstack([np.zeros((1, 2)), np.cumsum(steps, axis=0)[:-1]])
    star -= star.mean(axis=0)

    gaps = np.linalg.norm(star[:, None, :] - star[None, :, :], axis=2)
    np.fill_diagonal(gaps, math.inf)
    if gaps.min() <= tolerances.vertex_separation * d:
        raise ConstructionDegenerate(f"two star vertices of {c} coincide")

    # counterclockwise boundary order steps back two places along the star
    order = [int(i) for i in np.argsort(np.arctan2(star[:, 1], star[:, 0]))]
    start = order.index(0)
    order = order[start:] + order[:start]
    for i in range(m):
        if order[(i + 1) % m] != (order[i] - 2) % m:
            raise ConstructionDegenerate(f"star vertices of {c} are not in convex position")
    position = {star_idx: i for i, star_idx in enumerate(order)}

    arcs = []
    for i in range(m):
        k = (order[i] - 1) % m
        begin = float(theta[k] % (2.0 * math.pi))
        arcs.append(
            Arc(
                center=position[k],
                start=begin,
                end=begin + c.parts[k] * math.pi / c.n,
                steps=c.parts[k],
            )
        )
    vertices = tuple(Point(float(star[i, 0]), float(star[i, 1])) for i in order)
    return ReuleauxPolygon(d=d, vertices=vertices, arcs=tuple(arcs), signature=c)


@dataclass(frozen=True)
class ReinhardtPolygon:
    polygon: ConvexPolygon
    signature: Composition
    d: float

    def edge_directions(self) -> np.ndarray:
        edges = self.polygon.edges()
        return np.arctan2(edges[:, 1], edges[:, 0])


def clip(reuleaux: ReuleauxPolygon, c: Composition) -> ReinhardtPolygon:
    """Split arc i into c_i sub-arcs of angle pi/n and take the chords."""

    if reuleaux.signature != c:
        raise InvalidSignature(f"Reuleaux polygon was built from {reuleaux.signature}, not {c}")
    step = math.pi / c.n
    points = []
    for arc in reuleaux.arcs:
        ctr = np.asarray(reuleaux.vertices[arc.center])
        for j in range(arc.steps):
            angle = arc.start + j * step
            points.append(ctr + reuleaux.d * np.array([math.cos(angle), math.sin(angle)]))
    if len(points) != c.n:
        raise ConstructionDegenerate(f"clipping produced {len(points)} vertices, expected {c.n}")
    try:
        polygon = ConvexPolygon(points)
    except MalformedPolygon as exc:
        raise ConstructionDegenerate(f"clipped polygon of {c} is not convex: {exc}") from None
    return ReinhardtPolygon(polygon=polygon, signature=c, d=reuleaux.d)


def construct(c: Composition, d: float = 1.0) -> ReinhardtPolygon:
    return clip(build_reuleaux(c, d), c)


PATTERN_CHUNK = 2**16


def _sign_patterns(codes: np.ndarray, count: int) -> np.ndarray:
    """One row of +1/-1 per code; bit j set means sign j is -1."""

    bits = (np.asarray(codes, dtype=np.int64)[:, None] >> np.arange(count, dtype=np.int64)) & 1
    return (1 - 2 * bits).astype(np.int64)


def _code_ranges(count: int, chunk: int) -> List[range]:
    total = 2**count
    return [range(s, min(total, s + chunk)) for s in range(0, total, chunk)]


def _keys(rows: np.ndarray) -> List[bytes]:
    rows = np.ascontiguousarray(rows)
    return [row.tobytes() for row in rows]


def max_enumerable_n() -> int:
    """Largest n whose two sign-pattern halves fit below ENUMERATION_HALF_BITS."""

    return 2 * ENUMERATION_HALF_BITS + 2


def enumerate_signatures(
    n: int,
    mode: ValidityMode = "exact",
    cap: int | None = None,
    workers: int = 1,
) -> List[Tuple[Composition, SymmetryClass]]:
    """All valid signatures of n up to rotation and reflection.

    Sign sequences with g_1 = g_n = +1 are split into two halves whose
    partial sums are matched (exactly as residues modulo Phi_2n, or as
    rounded complex numbers in numeric mode). Only the left half is held in
    memory; the right half is generated from integer codes chunk by chunk.
    """

    cap = ENUMERATION_CAP if cap is None else cap
    if n < 3:
        raise ValueError("n must be at least 3")
    if n > cap:
        raise CapExceeded(n, cap)
    if n > max_enumerable_n():
        raise CapExceeded(n, max_enumerable_n(), "sign-pattern table limit")

    half = 1 + (n - 2) // 2
    left_idx = list(range(2, half + 1))
    right_idx = list(range(half + 1, n))
    if mode == "exact":
        basis = power_residues(n + 1, 2 * n)
    elif mode == "numeric":
        j = np.arange(n + 1)
        roots = np.exp(1j * math.pi * j / n)
        basis = np.column_stack([roots.real, roots.imag])
    else:
        raise ValueError(f"unknown validity mode {mode!r}")

    def _sums(codes: range, idx: List[int], offset: np.ndarray, sign: int) -> List[bytes]:
        signs = _sign_patterns(np.arange(codes.start, codes.stop), len(idx))
        sums = sign * (offset + signs @ basis[idx])
        if mode == "numeric":
            sums = np.round(sums * 1e8).astype(np.int64)
        return _keys(sums)

    logger.debug(
        "enumerating n={} ({}): {} x {} sign patterns",
        n, mode, 2 ** len(left_idx), 2 ** len(right_idx),
    )

    table: Dict[bytes, List[int]] = {}
    for codes in _code_ranges(len(left_idx), PATTERN_CHUNK):
        for offset, key in enumerate(_sums(codes, left_idx, basis[1] + basis[n], 1)):
            table.setdefault(key, []).append(codes.start + offset)

    zero = np.zeros_like(basis[0])

    def _match(codes: range) -> List[Tuple[int, int]]:
        keys = _sums(codes, right_idx, zero, -1)
        return [(li, codes.start + ri) for ri, key in enumerate(keys) for li in table.get(key, ())]

    total = 2 ** len(right_idx)
    size = min(PATTERN_CHUNK, max(1, -(-total // max(1, workers))))
    chunks = _code_ranges(len(right_idx), size)
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            matched = [pair for part in pool.map(_match, chunks) for pair in part]
    else:
        matched = [pair for chunk in chunks for pair in _match(chunk)]

    found: Dict[Tuple[int, ...], Composition] = {}
    for li, ri in sorted(matched):
        signs = np.ones(n, dtype=np.int64)
        signs[[i - 1 for i in left_idx]] = _sign_patterns([li], len(left_idx))[0]
        signs[[i - 1 for i in right_idx]] = _sign_patterns([ri], len(right_idx))[0]
        runs = [len(list(g)) for _, g in groupby(signs.tolist())]
        if len(runs) < 3:
            continue
        canon = canonical_parts(runs)
        if canon not in found:
            found[canon] = Composition(n, canon)

    result = []
    for parts in sorted(found):
        c = found[parts]
        if not is_valid(c, mode):
            logger.warning("discarding {} for n={}: closure check failed", c, n)
            continue
        result.append((c, classify(c)))
    logger.debug("n={}: {} signature classes", n, len(result))
    return result


def census(classes: Sequence[Tuple[Composition, SymmetryClass]]) -> Dict[str, int]:
    counts = {SymmetryKind.PERIODIC.value: 0, SymmetryKind.SPORADIC.value: 0}
    for _, cls in classes:
        counts[cls.kind.value] += 1
    return counts
