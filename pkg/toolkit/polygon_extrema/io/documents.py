"""Building, saving and loading polygon documents."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from pydantic import ValidationError

from ..core.bounds import BoundsReport
from ..core.errors import MalformedDocument
from ..core.geometry import ConvexPolygon, Point
from ..core.optimizer import OptimizationResult
from ..core.reinhardt import Arc, Composition, ReinhardtPolygon, ReuleauxPolygon
from ..core.utils import ensure_dir
from .models import (
    ArcModel,
    BoundsRow,
    OptimizationSummary,
    PolygonDocument,
    Provenance,
)

PathLike = Union[str, Path]


def _vertices(polygon: ConvexPolygon) -> list:
    return [(float(x), float(y)) for x, y in polygon.coords]


def generic_document(polygon: ConvexPolygon, command: str, seed: int | None = None) -> PolygonDocument:
    return PolygonDocument(
        kind="generic",
        vertices=_vertices(polygon),
        provenance=Provenance(command=command, seed=seed),
    )


def reinhardt_document(body: ReinhardtPolygon, command: str) -> PolygonDocument:
    return PolygonDocument(
        kind="reinhardt",
        vertices=_vertices(body.polygon),
        signature=list(body.signature.parts),
        d=body.d,
        provenance=Provenance(command=command),
    )


def reuleaux_document(body: ReuleauxPolygon, command: str) -> PolygonDocument:
    return PolygonDocument(
        kind="reuleaux",
        vertices=[(v.x, v.y) for v in body.vertices],
        signature=list(body.signature.parts),
        d=body.d,
        arcs=[ArcModel(center=a.center, start=a.start, end=a.end, steps=a.steps) for a in body.arcs],
        provenance=Provenance(command=command),
    )


def optimized_document(
    result: OptimizationResult, command: str, config_hash: str | None = None
) -> PolygonDocument:
    summary = OptimizationSummary(**result.problem.to_dict(), **result.summary())
    return PolygonDocument(
        kind="optimized",
        vertices=_vertices(result.best),
        optimization=summary,
        provenance=Provenance(command=command, seed=result.seed, config_hash=config_hash),
    )


def with_bounds(doc: PolygonDocument, report: BoundsReport) -> PolygonDocument:
    rows = [
        BoundsRow(
            inequality=e.inequality.value,
            bound=e.bound,
            observed=e.observed,
            slack=e.slack,
            equality=e.equality,
            attainable=e.attainable,
        )
        for e in report.entries
    ]
    return doc.model_copy(update={"bounds": rows})


def dumps(doc: PolygonDocument) -> str:
    """Indented JSON; floats use the shortest repr that round-trips."""

    return json.dumps(doc.model_dump(mode="json", exclude_none=True), indent=2) + "\n"


def loads(text: str) -> PolygonDocument:
    try:
        return PolygonDocument.model_validate_json(text)
    except ValidationError as exc:
        raise MalformedDocument(f"invalid polygon document: {exc.error_count()} error(s)\n{exc}") from None


def save(doc: PolygonDocument, path: PathLike) -> Path:
    path = Path(path)
    ensure_dir(str(path.parent))
    path.write_text(dumps(doc), encoding="utf-8")
    return path


def load(path: PathLike) -> PolygonDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedDocument(f"cannot read {path}: {exc}") from None
    return loads(text)


def to_polygon(doc: PolygonDocument) -> ConvexPolygon:
    """The document's vertices as a validated convex polygon."""

    return ConvexPolygon(doc.vertices)


def to_reuleaux(doc: PolygonDocument) -> ReuleauxPolygon:
    if doc.kind != "reuleaux":
        raise MalformedDocument(f"expected a reuleaux document, got {doc.kind}")
    return ReuleauxPolygon(
        d=doc.d,
        vertices=tuple(Point(x, y) for x, y in doc.vertices),
        arcs=tuple(Arc(a.center, a.start, a.end, a.steps) for a in doc.arcs),
        signature=Composition.of(doc.signature),
    )
