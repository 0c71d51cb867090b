"""Matrix Market ingestion and distance-table serialization."""

from __future__ import annotations

import io
import math
import os
from dataclasses import dataclass, field
from typing import IO, Sequence

from .graph import Graph, build_csr

__all__ = [
    "EdgeList",
    "MatrixMarketError",
    "load_graph",
    "parse_matrix_market",
    "read_distances",
    "write_distances",
    "write_matrix_market",
]

_FIELDS = ("real", "integer", "pattern")
_SYMMETRIES = ("general", "symmetric")


class MatrixMarketError(ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno is not None else message)


@dataclass
class EdgeList:
    num_vertices: int
    edges: list[tuple[int, int, float]] = field(default_factory=list)
    symmetry: str = "general"

    def to_graph(self) -> Graph:
        return build_csr(self.edges, self.num_vertices)


def _read_text(source) -> str:
    if isinstance(source, bytes):
        return source.decode()
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode() if isinstance(data, bytes) else data


def parse_matrix_market(source, force_unit_weights: bool = False, expand_symmetric: bool = True) -> EdgeList:
    """Parse a ``coordinate`` Matrix Market document into a 0-based edge list.

    ``source`` may be ``bytes``, ``str`` or a readable stream. Pattern entries
    get weight 1.0. With ``expand_symmetric`` every off-diagonal entry of a
    symmetric matrix also yields its mirrored edge.
    """
    lines = _read_text(source).splitlines()
    if not lines:
        raise MatrixMarketError("empty input", 1)

    header = lines[0].split()
    if len(header) != 5 or header[0] != "%%MatrixMarket":
        raise MatrixMarketError("expected '%%MatrixMarket matrix coordinate <field> <symmetry>' header", 1)
    obj, fmt, fld, sym = (t.lower() for t in header[1:])
    if obj != "matrix" or fmt != "coordinate":
        raise MatrixMarketError(f"unsupported object/format '{obj} {fmt}'; only 'matrix coordinate' is read", 1)
    if fld not in _FIELDS:
        raise MatrixMarketError(f"unsupported field '{fld}'", 1)
    if sym not in _SYMMETRIES:
        raise MatrixMarketError(f"unsupported symmetry '{sym}'", 1)
    pattern = fld == "pattern"

    lineno = 1
    size = None
    body = iter(enumerate(lines[1:], start=2))
    for lineno, line in body:
        stripped = line.strip()
        if not stripped or stripped.startswith("%"):
            continue
        size = stripped.split()
        break
    if size is None:
        raise MatrixMarketError("missing size line", lineno + 1)
    try:
        rows, cols, nnz = (int(t) for t in size)
    except ValueError:
        raise MatrixMarketError(f"malformed size line {' '.join(size)!r}", lineno) from None
    if rows != cols:
        raise MatrixMarketError(f"matrix is {rows}x{cols}; graphs must be square", lineno)
    if rows < 0 or nnz < 0:
        raise MatrixMarketError("negative dimensions in size line", lineno)

    width = 2 if pattern else 3
    edges: list[tuple[int, int, float]] = []
    found = 0
    for lineno, line in body:
        stripped = line.strip()
        if not stripped or stripped.startswith("%"):
            continue
        found += 1
        if found > nnz:
            raise MatrixMarketError(f"header declares {nnz} entries but more were found", lineno)
        tokens = stripped.split()
        if len(tokens) != width:
            raise MatrixMarketError(f"expected {width} fields, got {len(tokens)}", lineno)
        try:
            i, j = int(tokens[0]), int(tokens[1])
            w = 1.0 if pattern else float(tokens[2])
        except ValueError:
            raise MatrixMarketError(f"malformed entry {stripped!r}", lineno) from None
        if not (1 <= i <= rows and 1 <= j <= cols):
            raise MatrixMarketError(f"index ({i}, {j}) outside declared bounds {rows}x{cols}", lineno)
        if not math.isfinite(w):
            raise MatrixMarketError(f"non-finite weight {tokens[2]}", lineno)
        if w < 0:
            raise MatrixMarketError(f"negative weight {w}", lineno)
        if force_unit_weights:
            w = 1.0
        edges.append((i - 1, j - 1, w))
        if sym == "symmetric" and expand_symmetric and i != j:
            edges.append((j - 1, i - 1, w))
    if found != nnz:
        raise MatrixMarketError(f"header declares {nnz} entries but found {found}", lineno)
    return EdgeList(rows, edges, sym)


def load_graph(path: str | os.PathLike, force_unit_weights: bool = False, undirected: bool = False) -> Graph:
    with open(path, "rb") as fh:
        el = parse_matrix_market(fh, force_unit_weights=force_unit_weights, expand_symmetric=True)
    if undirected and el.symmetry == "general":
        el.edges += [(d, s, w) for s, d, w in el.edges if s != d]
    return el.to_graph()


def write_matrix_market(edges: EdgeList, sink: IO) -> None:
    """Write a ``real general`` document; weights use ``repr`` so parsing is exact."""
    lines = ["%%MatrixMarket matrix coordinate real general", f"{edges.num_vertices} {edges.num_vertices} {len(edges.edges)}"]
    lines += [f"{s + 1} {d + 1} {float(w)!r}" for s, d, w in edges.edges]
    _write(sink, "\n".join(lines) + "\n")


def _write(sink: IO, text: str) -> None:
    if isinstance(sink, (io.RawIOBase, io.BufferedIOBase)) or "b" in getattr(sink, "mode", ""):
        sink.write(text.encode())
    else:
        sink.write(text)


def format_distances(dist: Sequence[float], pred: Sequence) -> str:
    if len(dist) != len(pred):
        raise ValueError("distance and predecessor arrays differ in length")
    out = []
    for v, (d, p) in enumerate(zip(dist, pred)):
        ds = "inf" if math.isinf(d) else f"{float(d):.6g}"
        ps = "-" if p is None or p < 0 else str(int(p))
        out.append(f"{v} {ds} {ps}\n")
    return "".join(out)


def write_distances(dist: Sequence[float], pred: Sequence, sink: IO) -> None:
    """One ``<vertex> <distance|inf> <predecessor|->`` line per vertex.

    Predecessors equal to ``None`` or negative (the NIL marker) print as ``-``.
    """
    _write(sink, format_distances(dist, pred))


def read_distances(source) -> tuple[list[float], list[int]]:
    """Inverse of :func:`write_distances`; NIL predecessors come back as -1."""
    dist: list[float] = []
    pred: list[int] = []
    for lineno, line in enumerate(_read_text(source).splitlines(), start=1):
        if not line.strip():
            continue
        try:
            v, d, p = line.split()
            if int(v) != len(dist):
                raise ValueError
            dist.append(math.inf if d == "inf" else float(d))
            pred.append(-1 if p == "-" else int(p))
        except ValueError:
            raise ValueError(f"line {lineno}: malformed distance record {line!r}") from None
    return dist, pred
