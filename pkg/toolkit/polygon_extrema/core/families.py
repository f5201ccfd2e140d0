"""Explicit reference polygons for the solved special families."""

from __future__ import annotations

import math

import numpy as np

from .geometry import ConvexPolygon, Metrics, area, metrics

SQRT3 = math.sqrt(3.0)


def regular_polygon(
    n: int,
    *,
    diameter: float | None = None,
    side: float | None = None,
    width: float | None = None,
) -> ConvexPolygon:
    """Regular n-gon with exactly one of diameter, side or width prescribed.

    The bottom side is horizontal. For odd n the diameter is the distance from
    a vertex to the endpoints of the opposite side, 2R cos(pi/2n).
    """

    given = {k: v for k, v in (("diameter", diameter), ("side", side), ("width", width)) if v is not None}
    if len(given) != 1:
        raise ValueError("pass exactly one of diameter, side, width")
    if int(n) != n or n < 3:
        raise ValueError(f"n must be an integer >= 3, got {n}")
    (kind, value), = given.items()
    if not value > 0:
        raise ValueError(f"{kind} must be positive, got {value}")

    odd = n % 2 == 1
    if kind == "side":
        radius = value / (2.0 * math.sin(math.pi / n))
    elif kind == "diameter":
        radius = value / (2.0 * math.cos(math.pi / (2 * n))) if odd else value / 2.0
    else:
        radius = value / (1.0 + math.cos(math.pi / n)) if odd else value / (2.0 * math.cos(math.pi / n))

    angles = (2.0 * np.arange(n) + 1.0) * math.pi / n - math.pi / 2.0
    return ConvexPolygon(radius * np.column_stack([np.cos(angles), np.sin(angles)]))


def equilateral_max_area_reference(n: int, d: float) -> float:
    """Largest area of an equilateral n-gon of diameter d: the regular n-gon.

    For odd n this is (d^2 n / 2) cos(pi/n) tan(pi/2n); for n = 4 it is the
    square of diagonal d, area d^2 / 2.
    """

    return area(regular_polygon(n, diameter=d))


def audet_ninin_polygon(n: int, w: float = 1.0) -> ConvexPolygon:
    """Equilateral odd n-gon of width w with largest perimeter, diameter and area.

    Sides have length s = 2w / sqrt(3). For n = 3 this is the equilateral
    triangle; for n = 2m + 1 >= 5 a trapezoid built from 2m - 1 equilateral
    triangles, with the base split into m collinear sides and the top into m - 1.
    """

    if int(n) != n or n < 3:
        raise ValueError(f"n must be an integer >= 3, got {n}")
    if n % 2 == 0:
        raise ValueError("equilateral polygons of fixed width are unbounded for even n")
    if not w > 0:
        raise ValueError(f"w must be positive, got {w}")
    s = 2.0 * w / SQRT3
    m = (n - 1) // 2
    bottom = [(k * s, 0.0) for k in range(m + 1)]
    top = [((k - 0.5) * s, w) for k in range(m, 0, -1)]
    coords = np.asarray(bottom + top, dtype=float)
    lo, hi = coords.min(axis=0), coords.max(axis=0)
    return ConvexPolygon(coords - (lo + hi) / 2.0)


def audet_ninin_reference(n: int, w: float = 1.0) -> Metrics:
    return metrics(audet_ninin_polygon(n, w))
