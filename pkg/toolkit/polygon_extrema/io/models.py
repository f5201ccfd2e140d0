"""Pydantic models for polygon documents."""

from __future__ import annotations

from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

SCHEMA_VERSION = 1

DocumentKind = Literal["generic", "reinhardt", "reuleaux", "optimized"]


class ArcModel(BaseModel):
    center: int = Field(ge=0)
    start: float
    end: float
    steps: int = Field(ge=1)


class Provenance(BaseModel):
    command: str
    seed: Optional[int] = None
    config_hash: Optional[str] = None


class OptimizationSummary(BaseModel):
    objective: str
    constraint: str
    n: int
    equilateral: bool = False
    method: str = "multistart"
    value: float
    bound: float
    gap: float
    starts: int
    feasible_starts: int
    seed: int
    converged: bool


class BoundsRow(BaseModel):
    inequality: str
    bound: float
    observed: float
    slack: float
    equality: bool
    attainable: bool


class PolygonDocument(BaseModel):
    schema_version: int = SCHEMA_VERSION
    kind: DocumentKind
    vertices: List[Tuple[float, float]] = Field(min_length=3)
    signature: Optional[List[int]] = None
    d: Optional[float] = Field(default=None, gt=0)
    arcs: Optional[List[ArcModel]] = None
    optimization: Optional[OptimizationSummary] = None
    provenance: Provenance
    bounds: Optional[List[BoundsRow]] = None

    @model_validator(mode="after")
    def _kind_fields(self) -> "PolygonDocument":
        if self.schema_version != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {self.schema_version}")
        wants_signature = self.kind in ("reinhardt", "reuleaux")
        if wants_signature != (self.signature is not None):
            raise ValueError(f"signature must be present iff kind is reinhardt or reuleaux ({self.kind})")
        if wants_signature != (self.d is not None):
            raise ValueError(f"d must be present iff kind is reinhardt or reuleaux ({self.kind})")
        if (self.kind == "reuleaux") != (self.arcs is not None):
            raise ValueError(f"arcs must be present iff kind is reuleaux ({self.kind})")
        if (self.kind == "optimized") != (self.optimization is not None):
            raise ValueError(f"optimization must be present iff kind is optimized ({self.kind})")
        if self.arcs is not None and len(self.arcs) != len(self.vertices):
            raise ValueError("a Reuleaux document needs one arc per vertex")
        return self
