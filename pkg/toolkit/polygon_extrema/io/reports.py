"""CSV, JSON and plain-text writers for bounds reports and enumeration results."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

from ..core.bounds import BoundsReport, InequalityId, attainable, bound_value
from ..core.reinhardt import Composition, SymmetryClass, census
from ..core.utils import ensure_dir

BOUNDS_COLUMNS = ["inequality", "bound", "observed", "slack", "equality", "attainable"]


def _yes_no(flag: bool) -> str:
    return "yes" if flag else "no"


def _csv(rows: Sequence[Sequence[object]], header: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def bounds_report_rows(report: BoundsReport) -> List[Dict[str, object]]:
    return [
        {
            "inequality": e.inequality.value,
            "bound": e.bound,
            "observed": e.observed,
            "slack": e.slack,
            "equality": e.equality,
            "attainable": e.attainable,
        }
        for e in report.entries
    ]


def bounds_report_csv(report: BoundsReport) -> str:
    rows = [
        [r["inequality"], repr(r["bound"]), repr(r["observed"]), repr(r["slack"]),
         _yes_no(r["equality"]), _yes_no(r["attainable"])]
        for r in bounds_report_rows(report)
    ]
    return _csv(rows, BOUNDS_COLUMNS)


def bounds_report_json(report: BoundsReport) -> str:
    payload = {
        "polygon_id": report.polygon_id,
        "n": report.n,
        "ok": report.ok,
        "entries": bounds_report_rows(report),
    }
    return json.dumps(payload, indent=2) + "\n"


def bounds_table(
    n: int,
    *,
    p: float | None = None,
    w: float | None = None,
    d: float | None = None,
) -> List[Tuple[InequalityId, str, float, bool]]:
    """(inequality, bounded quantity, bound, attainable) for each given normalisation.

    An inequality appears when the quantity it is normalised by is supplied.
    """

    given = {"p": p, "w": w, "d": d}
    sources = {
        InequalityId.ZENODORUS_ISOPERIMETRIC: ("p", "a"),
        InequalityId.REINHARDT_PERIMETER_DIAMETER: ("d", "p"),
        InequalityId.REINHARDT_AREA_DIAMETER: ("d", "a"),
        InequalityId.GASHKOV_PERIMETER_WIDTH: ("w", "p"),
        InequalityId.GASHKOV_WIDTH_DIAMETER: ("d", "w"),
        InequalityId.PAL_AREA_WIDTH: ("w", "a"),
        InequalityId.EQUILATERAL_AREA_DIAMETER: ("d", "a"),
    }
    rows = []
    for inequality, (source, target) in sources.items():
        value = given[source]
        if value is None:
            continue
        # only the source measurement matters; the others are placeholders
        measures = {"a": 1.0, "p": 1.0, "w": 1.0, "d": 1.0, source: value}
        bound, _ = bound_value(inequality, n, measures["a"], measures["p"], measures["w"], measures["d"])
        rows.append((inequality, target, bound, attainable(inequality, n)))
    return rows


def bounds_table_csv(rows: Sequence[Tuple[InequalityId, str, float, bool]]) -> str:
    return _csv(
        [[i.value, target, repr(bound), _yes_no(ok)] for i, target, bound, ok in rows],
        ["inequality", "quantity", "bound", "attainable"],
    )


def bounds_table_text(rows: Sequence[Tuple[InequalityId, str, float, bool]]) -> str:
    width = max((len(i.value) for i, *_ in rows), default=10)
    lines = [f"{'inequality':<{width}}  quantity  {'bound':>20}  attainable"]
    for inequality, target, bound, ok in rows:
        lines.append(f"{inequality.value:<{width}}  {target:<8}  {bound:>20.15g}  {_yes_no(ok)}")
    return "\n".join(lines) + "\n"


def enumeration_csv(n: int, classes: Sequence[Tuple[Composition, SymmetryClass]]) -> str:
    rows = [
        [n, c.m, " ".join(str(x) for x in c.parts), cls.kind.value, cls.k if cls.k is not None else ""]
        for c, cls in classes
    ]
    return _csv(rows, ["n", "m", "signature", "class", "k"])


def census_csv(n: int, classes: Sequence[Tuple[Composition, SymmetryClass]]) -> str:
    counts = census(classes)
    return _csv([[n, counts["periodic"], counts["sporadic"]]], ["n", "periodic", "sporadic"])


class ReportWriter:
    def __init__(self, out_dir: str) -> None:
        self.out_dir = Path(out_dir)
        ensure_dir(str(self.out_dir))
        self.written: List[Path] = []

    def write_text(self, filename: str, text: str) -> Path:
        path = self.out_dir / filename
        path.write_text(text, encoding="utf-8")
        path.chmod(0o664)
        self.written.append(path)
        return path

    def write_bounds(self, report: BoundsReport, fmt: str = "csv") -> Path:
        if fmt == "json":
            return self.write_text(f"{report.polygon_id}.bounds.json", bounds_report_json(report))
        return self.write_text(f"{report.polygon_id}.bounds.csv", bounds_report_csv(report))

    def write_enumeration(
        self, n: int, classes: Sequence[Tuple[Composition, SymmetryClass]], census_only: bool = False
    ) -> Path:
        if census_only:
            return self.write_text(f"census-n{n}.csv", census_csv(n, classes))
        return self.write_text(f"signatures-n{n}.csv", enumeration_csv(n, classes))
