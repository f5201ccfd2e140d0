"""Command line interface for the polygon extrema toolkit."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Callable, Dict, List

from loguru import logger

from ..core.bounds import problem_catalog, verify
from ..core.config import Settings, load_settings
from ..core.errors import (
    CapExceeded,
    ConstructionDegenerate,
    Infeasible,
    InvalidSignature,
    MalformedDocument,
    MalformedPolygon,
    PolygonExtremaError,
)
from ..core.families import audet_ninin_polygon, regular_polygon
from ..core.graham import graham_solve
from ..core.optimizer import (
    Constraint,
    Objective,
    OptimizationProblem,
    SolverConfig,
    solve,
)
from ..core.reinhardt import (
    Composition,
    build_reuleaux,
    clip,
    enumerate_signatures,
    regular_signature,
)
from ..core.utils import make_document_name
from ..io import documents
from ..io.reports import (
    ReportWriter,
    bounds_report_csv,
    bounds_report_json,
    bounds_table,
    bounds_table_csv,
    bounds_table_text,
    census_csv,
    enumeration_csv,
)
from ..io.svg import RenderOptions, render_svg

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SIGNATURE = 3
EXIT_CAP = 4
EXIT_INFEASIBLE = 5
EXIT_DOCUMENT = 6
EXIT_VIOLATION = 7


def _positive(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polygon-extrema",
        description="Extremal convex polygons: bounds, constructions, enumeration and search",
    )
    parser.add_argument("--config", help="YAML settings file")
    parser.add_argument("--out", help="Output directory (default $POLYGON_EXTREMA_OUT or ./out)")
    parser.add_argument("--verbose", action="store_true", help="Debug logging")
    parser.add_argument("--log-json", action="store_true", help="Log as JSON lines on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    bounds = sub.add_parser("bounds", help="Print the closed-form bounds for n")
    bounds.add_argument("--n", type=int, help="Number of vertices")
    bounds.add_argument("--p", type=_positive, default=1.0, help="Perimeter normalisation")
    bounds.add_argument("--w", type=_positive, default=1.0, help="Width normalisation")
    bounds.add_argument("--d", type=_positive, default=1.0, help="Diameter normalisation")
    bounds.add_argument("--format", choices=["text", "csv"], default="text")
    bounds.add_argument("--catalog", action="store_true", help="List the extremal problems")
    bounds.set_defaults(func=cmd_bounds)

    construct = sub.add_parser("construct", help="Build a polygon document")
    construct.add_argument("kind", choices=["reinhardt", "reuleaux", "regular", "audet-ninin"])
    construct.add_argument("--n", type=int)
    construct.add_argument(
        "--signature",
        default="auto-regular",
        help="Comma separated parts, or auto-regular",
    )
    construct.add_argument("--d", type=_positive, help="Diameter")
    construct.add_argument("--side", type=_positive, help="Side length (regular)")
    construct.add_argument("--w", type=_positive, help="Width (regular, audet-ninin)")
    construct.add_argument("--verify", action="store_true", help="Attach a bounds report")
    construct.add_argument("--output", help="Document path")
    construct.set_defaults(func=cmd_construct)

    enum = sub.add_parser("enumerate", help="Enumerate Reinhardt signatures of n")
    enum.add_argument("--n", type=int, required=True)
    enum.add_argument("--census", action="store_true", help="Only periodic/sporadic counts")
    enum.add_argument("--mode", choices=["exact", "numeric"], default="exact")
    enum.add_argument("--workers", type=int, default=1)
    enum.add_argument("--allow-large", action="store_true", help="Ignore the enumeration cap")
    enum.add_argument("--save", action="store_true", help="Also write the CSV to the output directory")
    enum.set_defaults(func=cmd_enumerate)

    opt = sub.add_parser("optimize", help="Multistart search for an extremal polygon")
    opt.add_argument("--objective", choices=[o.value for o in Objective], required=True)
    opt.add_argument("--constraint", required=True, help="quantity=value, e.g. diameter=1")
    opt.add_argument("--n", type=int, required=True)
    opt.add_argument("--equilateral", action="store_true")
    opt.add_argument("--graham", action="store_true", help="Cycle-plus-pendant search (even n)")
    opt.add_argument("--profile", default="desk", help="Solver profile")
    opt.add_argument("--seed", type=int, default=0)
    opt.add_argument("--starts", type=int)
    opt.add_argument("--max-iter", type=int)
    opt.add_argument("--workers", type=int)
    opt.add_argument("--gradient", choices=["analytic", "central"])
    opt.add_argument("--record", help="Path to progress record (.jsonl.zst)")
    opt.add_argument("--output", help="Document path")
    opt.set_defaults(func=cmd_optimize)

    render = sub.add_parser("render", help="Render a document to SVG")
    render.add_argument("document")
    render.add_argument("--output", help="SVG path (default: next to the document)")
    render.add_argument("--size", type=int, default=600)
    render.add_argument("--stroke-width", type=float, default=1.5)
    render.add_argument("--no-arcs", dest="show_arcs", action="store_false")
    render.add_argument("--diameter-graph", action="store_true")
    render.add_argument("--labels", action="store_true")
    render.set_defaults(func=cmd_render)

    check = sub.add_parser("verify", help="Check a document against every inequality")
    check.add_argument("document")
    check.add_argument("--format", choices=["csv", "json"], default="csv")
    check.set_defaults(func=cmd_verify)
    return parser


def configure_logging(verbose: bool, log_json: bool) -> None:
    logger.remove()
    if verbose:
        level = "DEBUG"
    elif log_json:
        level = "INFO"
    else:
        level = "WARNING"
    logger.add(sys.stderr, level=level, serialize=log_json)


def _output_dir(args: argparse.Namespace, settings: Settings) -> str:
    return args.out or settings.resolve_output_dir()


def _document_path(args: argparse.Namespace, settings: Settings, kind: str, n: int, tag: str | None = None) -> Path:
    if args.output:
        return Path(args.output)
    return Path(_output_dir(args, settings)) / make_document_name(kind, n, tag)


def _command_line(argv: List[str]) -> str:
    return " ".join(argv)


def cmd_bounds(args: argparse.Namespace, settings: Settings) -> int:
    if args.catalog:
        for problem in problem_catalog():
            ineq = problem.polygon_inequality.value if problem.polygon_inequality else "-"
            kind = "trivial" if problem.trivial else "open/solved"
            print(f"fix {problem.fixed}, {problem.sense} {problem.target}: {kind}; disk: {problem.disk_optimum}; n-gon: {ineq}")
        return EXIT_OK
    if args.n is None:
        raise ValueError("bounds needs --n")
    rows = bounds_table(args.n, p=args.p, w=args.w, d=args.d)
    text = bounds_table_csv(rows) if args.format == "csv" else bounds_table_text(rows)
    sys.stdout.write(text)
    return EXIT_OK


def _parse_signature(text: str, n: int | None) -> Composition:
    if text == "auto-regular":
        if n is None:
            raise ValueError("auto-regular signature needs --n")
        return regular_signature(n)
    try:
        parts = [int(p) for p in text.replace(",", " ").split()]
    except ValueError:
        raise InvalidSignature(f"cannot parse signature {text!r}") from None
    return Composition(n if n is not None else sum(parts), tuple(parts))


def cmd_construct(args: argparse.Namespace, settings: Settings) -> int:
    command = _command_line(args.argv)
    tag = None
    if args.kind in ("reinhardt", "reuleaux"):
        c = _parse_signature(args.signature, args.n)
        d = args.d or 1.0
        reuleaux = build_reuleaux(c, d, settings.tolerances)
        if args.kind == "reuleaux":
            doc = documents.reuleaux_document(reuleaux, command)
        else:
            doc = documents.reinhardt_document(clip(reuleaux, c), command)
        n = c.n
        if args.signature != "auto-regular":
            tag = "-".join(str(x) for x in c.parts)
    elif args.kind == "regular":
        if args.n is None:
            raise ValueError("regular needs --n")
        given = [v is not None for v in (args.d, args.side, args.w)]
        if sum(given) > 1:
            raise ValueError("give only one of --d, --side, --w")
        if not any(given):
            polygon = regular_polygon(args.n, diameter=1.0)
        else:
            polygon = regular_polygon(args.n, diameter=args.d, side=args.side, width=args.w)
        doc = documents.generic_document(polygon, command)
        n = args.n
    else:
        if args.n is None:
            raise ValueError("audet-ninin needs --n")
        doc = documents.generic_document(audet_ninin_polygon(args.n, args.w or 1.0), command)
        n = args.n

    if args.verify:
        report = verify(documents.to_polygon(doc), polygon_id=f"{args.kind}-n{n}", tolerances=settings.tolerances)
        doc = documents.with_bounds(doc, report)
        sys.stdout.write(bounds_report_csv(report))
    path = documents.save(doc, _document_path(args, settings, args.kind, n, tag))
    print(path)
    return EXIT_OK


def cmd_enumerate(args: argparse.Namespace, settings: Settings) -> int:
    cap = settings.enumeration_cap
    if args.allow_large:
        cap = max(cap, args.n)
    classes = enumerate_signatures(args.n, mode=args.mode, cap=cap, workers=args.workers)
    text = census_csv(args.n, classes) if args.census else enumeration_csv(args.n, classes)
    sys.stdout.write(text)
    if args.save:
        writer = ReportWriter(_output_dir(args, settings))
        writer.write_enumeration(args.n, classes, census_only=args.census)
    return EXIT_OK


def cmd_optimize(args: argparse.Namespace, settings: Settings) -> int:
    config = SolverConfig.from_profile(
        args.profile,
        settings,
        seed=args.seed,
        starts=args.starts,
        max_iter=args.max_iter,
        workers=args.workers,
        gradient=args.gradient,
        record_path=args.record,
    )
    if args.graham:
        if args.objective != Objective.MAXIMIZE_AREA.value or args.equilateral:
            raise ValueError("--graham maximises area of general polygons")
        constraint = Constraint.parse(args.constraint)
        if constraint.kind.value != "diameter":
            raise ValueError("--graham needs a diameter constraint")
        result = graham_solve(args.n, config, diameter=constraint.value)
    else:
        problem = OptimizationProblem(
            objective=Objective(args.objective),
            constraint=Constraint.parse(args.constraint),
            n=args.n,
            equilateral=args.equilateral,
        )
        result = solve(problem, config)
    doc = documents.optimized_document(result, _command_line(args.argv), config.config_hash())
    tag = f"{result.method}-{args.objective}-s{args.seed}"
    path = documents.save(doc, _document_path(args, settings, "optimized", args.n, tag))
    print(f"value={result.value!r} bound={result.bound!r} gap={result.gap!r} converged={result.converged}")
    print(path)
    return EXIT_OK


def cmd_render(args: argparse.Namespace, settings: Settings) -> int:
    options = RenderOptions(
        size=args.size,
        stroke_width=args.stroke_width,
        show_arcs=args.show_arcs,
        show_diameter_graph=args.diameter_graph,
        labels=args.labels,
    )
    doc = documents.load(args.document)
    try:
        svg = render_svg(doc, options)
    except (MalformedPolygon, InvalidSignature, ConstructionDegenerate) as exc:
        raise MalformedDocument(f"{args.document}: {exc}") from None
    path = Path(args.output) if args.output else Path(args.document).with_suffix(".svg")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(svg, encoding="utf-8")
    print(path)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    doc = documents.load(args.document)
    try:
        polygon = documents.to_polygon(doc)
    except MalformedPolygon as exc:
        print(f"{args.document}: malformed polygon: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    report = verify(polygon, polygon_id=Path(args.document).stem, tolerances=settings.tolerances)
    text = bounds_report_json(report) if args.format == "json" else bounds_report_csv(report)
    sys.stdout.write(text)
    violations = report.violations()
    for entry in violations:
        print(f"violated: {entry.inequality.value} slack={entry.slack!r}", file=sys.stderr)
    return EXIT_OK if not violations else EXIT_VIOLATION


EXIT_CODES: Dict[type, int] = {
    CapExceeded: EXIT_CAP,
    Infeasible: EXIT_INFEASIBLE,
    InvalidSignature: EXIT_SIGNATURE,
    ConstructionDegenerate: EXIT_SIGNATURE,
    MalformedDocument: EXIT_DOCUMENT,
}


def main(argv: List[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.argv = argv
    configure_logging(args.verbose, args.log_json)
    func: Callable[[argparse.Namespace, Settings], int] = args.func
    try:
        settings = load_settings(args.config)
        return func(args, settings)
    except PolygonExtremaError as exc:
        code = next((c for t, c in EXIT_CODES.items() if isinstance(exc, t)), EXIT_USAGE)
        print(f"error: {exc}", file=sys.stderr)
        return code
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
