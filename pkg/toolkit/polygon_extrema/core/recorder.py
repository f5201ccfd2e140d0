"""Search traces: zstd compressed JSON lines describing one multistart run.

A trace opens with a header line naming the problem, its closed-form bound
and the solver configuration hash. One line per start follows in start
order. A successful run closes with the winning polygon; a run that ended
in ``Infeasible`` has no closing line.
"""

from __future__ import annotations

import io
import json
import os
from dataclasses import asdict, dataclass, field
from typing import Iterator, List, Tuple, Union

import zstandard as zstd

from .errors import MalformedDocument
from .utils import ensure_dir


@dataclass(frozen=True)
class TraceHeader:
    method: str
    objective: str
    constraint: str
    constraint_value: float
    n: int
    equilateral: bool
    bound: float
    starts: int
    seed: int
    config_hash: str


@dataclass(frozen=True)
class StartLine:
    index: int
    value: float | None
    feasible: bool
    converged: bool
    best: float | None


@dataclass(frozen=True)
class BestLine:
    index: int
    value: float
    gap: float
    vertices: List[List[float]] = field(default_factory=list)


TraceLine = Union[TraceHeader, StartLine, BestLine]
_KINDS = {"header": TraceHeader, "start": StartLine, "best": BestLine}


def _encode(kind: str, line: TraceLine) -> bytes:
    doc = {"kind": kind, **asdict(line)}
    return json.dumps(doc, separators=(",", ":")).encode("utf-8") + b"\n"


class TraceWriter:
    """Streams one run into ``path``; the header is written on open."""

    def __init__(self, path: str, header: TraceHeader) -> None:
        ensure_dir(os.path.dirname(path) or ".")
        self.path = path
        self._fp = open(path, "wb")
        self._writer = zstd.ZstdCompressor(level=3).stream_writer(self._fp)
        self._writer.write(_encode("header", header))
        self.header = header
        self.finished = False

    def start(self, line: StartLine) -> None:
        if self.finished:
            raise RuntimeError(f"{self.path}: trace already closed by its best line")
        self._writer.write(_encode("start", line))

    def finish(self, best: BestLine) -> None:
        self._writer.write(_encode("best", best))
        self.finished = True

    def close(self) -> None:
        self._writer.flush(zstd.FLUSH_FRAME)
        self._writer.close()
        self._fp.close()

    def __enter__(self) -> "TraceWriter":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.close()


@dataclass
class SearchTrace:
    header: TraceHeader
    starts: List[StartLine]
    best: BestLine | None

    @property
    def feasible_starts(self) -> int:
        return sum(1 for s in self.starts if s.feasible)

    def best_history(self) -> List[float]:
        """Running best after each start, from the first feasible one on."""

        return [s.best for s in self.starts if s.best is not None]


def iter_trace(path: str) -> Iterator[Tuple[str, TraceLine]]:
    """Decode trace lines lazily; undecodable input raises MalformedDocument."""

    try:
        with open(path, "rb") as fp, zstd.ZstdDecompressor().stream_reader(fp) as reader:
            for number, raw in enumerate(io.TextIOWrapper(reader, encoding="utf-8"), 1):
                if not raw.strip():
                    continue
                doc = json.loads(raw)
                kind = doc.pop("kind", None)
                if kind not in _KINDS:
                    raise MalformedDocument(f"{path}:{number}: unknown trace line kind {kind!r}")
                try:
                    line = _KINDS[kind](**doc)
                except TypeError as exc:
                    raise MalformedDocument(f"{path}:{number}: bad {kind} line: {exc}") from exc
                yield kind, line
    except (zstd.ZstdError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedDocument(f"{path}: unreadable trace: {exc}") from exc


def read_trace(path: str) -> SearchTrace:
    header: TraceHeader | None = None
    starts: List[StartLine] = []
    best: BestLine | None = None
    for kind, line in iter_trace(path):
        if kind == "header":
            if header is not None:
                raise MalformedDocument(f"{path}: second header line")
            header = line  # type: ignore[assignment]
        elif header is None:
            raise MalformedDocument(f"{path}: {kind} line before the header")
        elif kind == "start":
            starts.append(line)  # type: ignore[arg-type]
        else:
            best = line  # type: ignore[assignment]
    if header is None:
        raise MalformedDocument(f"{path}: empty trace")
    return SearchTrace(header=header, starts=starts, best=best)
