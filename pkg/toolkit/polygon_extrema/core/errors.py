"""Exception hierarchy for the polygon extrema toolkit."""

from __future__ import annotations


class PolygonExtremaError(ValueError):
    """Base class for every error raised by the toolkit."""


class MalformedPolygon(PolygonExtremaError):
    """Vertices do not describe a (weakly) convex polygon."""

    def __init__(self, message: str, index: int | None = None) -> None:
        super().__init__(message)
        self.index = index


class NotCentrallySymmetric(PolygonExtremaError):
    pass


class InvalidSignature(PolygonExtremaError):
    """Composition fails its invariants or its star polygon does not close."""


class ConstructionDegenerate(PolygonExtremaError):
    pass


class CapExceeded(PolygonExtremaError):
    def __init__(self, n: int, cap: int, limit: str = "enumeration cap") -> None:
        super().__init__(f"n={n} exceeds {limit} {cap}")
        self.n = n
        self.cap = cap


class Infeasible(PolygonExtremaError):
    """No multistart candidate satisfied the constraints."""


class MalformedDocument(PolygonExtremaError):
    """A polygon document cannot be read or fails its schema."""
