"""Immutable CSR graph storage with an optional transposed (CSC) view.

The CSR arrays serve push traversals; the CSC view, built on request by
:func:`build_transpose`, serves pull traversals. Both sit behind the same
vertex/edge query API.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Csc",
    "EdgeRange",
    "Graph",
    "GraphError",
    "build_csr",
    "build_transpose",
    "random_partition",
    "reverse",
]


class GraphError(ValueError):
    """Raised for invalid graph input or out-of-range queries."""


@dataclass(frozen=True)
class EdgeRange:
    """Half-open range ``[start, end)`` of edge ids owned by one vertex.

    Iterating yields the edge ids.
    """

    start: int
    end: int

    def __iter__(self):
        return iter(range(self.start, self.end))

    def __len__(self) -> int:
        return self.end - self.start

    def __contains__(self, e) -> bool:
        return self.start <= e < self.end


@dataclass(frozen=True)
class Csc:
    """Transposed adjacency. ``edge_ids[k]`` is the CSR id of CSC edge ``k``."""

    col_offsets: np.ndarray
    row_indices: np.ndarray
    values: np.ndarray
    edge_ids: np.ndarray


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


class Graph:
    """Weighted directed graph in compressed sparse row form.

    Instances are immutable; use :func:`build_csr` to construct one. Queries
    are pure and safe to call from any number of threads.
    """

    def __init__(self, row_offsets, column_indices, values, csc=None, partition=None):
        self.row_offsets = _frozen(np.asarray(row_offsets, dtype=np.int64))
        self.column_indices = _frozen(np.asarray(column_indices, dtype=np.int64))
        self.values = _frozen(np.asarray(values, dtype=np.float64))
        self.csc = csc
        self.partition = None if partition is None else _frozen(np.asarray(partition, dtype=np.int64))
        self.check()

    @property
    def num_vertices(self) -> int:
        return len(self.row_offsets) - 1

    @property
    def num_edges(self) -> int:
        return len(self.column_indices)

    def get_num_vertices(self) -> int:
        return self.num_vertices

    def get_num_edges(self) -> int:
        return self.num_edges

    def __repr__(self) -> str:
        return (
            f"Graph(num_vertices={self.num_vertices}, num_edges={self.num_edges}, "
            f"csc={self.csc is not None}, partitioned={self.partition is not None})"
        )

    def check(self) -> None:
        """Assert the structural invariants; raises :class:`GraphError`."""
        ro, ci, w = self.row_offsets, self.column_indices, self.values
        n, m = len(ro) - 1, len(ci)
        if n < 0 or ro[0] != 0 or ro[-1] != m:
            raise GraphError("row_offsets must start at 0 and end at num_edges")
        if np.any(np.diff(ro) < 0):
            raise GraphError("row_offsets must be nondecreasing")
        if len(w) != m:
            raise GraphError("values and column_indices differ in length")
        if m and (ci.min() < 0 or ci.max() >= n):
            raise GraphError("column index out of range")
        if m and not (np.all(np.isfinite(w)) and w.min() >= 0):
            raise GraphError("edge weights must be finite and nonnegative")
        if self.csc is not None:
            c = self.csc
            if len(c.col_offsets) != n + 1 or len(c.row_indices) != m:
                raise GraphError("csc shape does not match csr")
            ids = c.edge_ids
            if not (
                np.array_equal(self.sources[ids], c.row_indices)
                and np.array_equal(ci[ids], np.repeat(np.arange(n), np.diff(c.col_offsets)))
                and np.array_equal(w[ids], c.values)
            ):
                raise GraphError("csc back-mapping disagrees with csr")
        if self.partition is not None and len(self.partition) != n:
            raise GraphError("partition length must equal num_vertices")

    # -- native-graph queries

    def _check_vertex(self, v) -> None:
        if not 0 <= v < self.num_vertices:
            raise GraphError(f"vertex {v} out of range [0, {self.num_vertices})")

    def _check_edge(self, e) -> None:
        if not 0 <= e < self.num_edges:
            raise GraphError(f"edge {e} out of range [0, {self.num_edges})")

    def get_edges(self, v: int) -> EdgeRange:
        self._check_vertex(v)
        return EdgeRange(int(self.row_offsets[v]), int(self.row_offsets[v + 1]))

    def get_in_edges(self, v: int) -> EdgeRange:
        """Range of CSC positions holding the in-edges of ``v``."""
        self._check_vertex(v)
        if self.csc is None:
            raise GraphError("graph has no transposed view; call build_transpose first")
        return EdgeRange(int(self.csc.col_offsets[v]), int(self.csc.col_offsets[v + 1]))

    def get_dest_vertex(self, e: int) -> int:
        self._check_edge(e)
        return int(self.column_indices[e])

    def get_edge_weight(self, e: int) -> float:
        self._check_edge(e)
        return float(self.values[e])

    def get_source_vertex(self, e: int) -> int:
        self._check_edge(e)
        # last vertex whose first edge id is <= e
        return int(np.searchsorted(self.row_offsets, e, side="right") - 1)

    def get_out_degree(self, v: int) -> int:
        return len(self.get_edges(v))

    # -- bulk views used by the operators' inner loops

    @cached_property
    def sources(self) -> np.ndarray:
        """Source vertex of every edge, in CSR order."""
        return _frozen(np.repeat(np.arange(self.num_vertices, dtype=np.int64), np.diff(self.row_offsets)))

    @cached_property
    def adjacency(self) -> tuple[list[int], list[int], list[float]]:
        # plain lists: scalar indexing is several times faster than on ndarrays
        return self.row_offsets.tolist(), self.column_indices.tolist(), self.values.tolist()

    def edge_list(self) -> list[tuple[int, int, float]]:
        return list(zip(self.sources.tolist(), self.column_indices.tolist(), self.values.tolist()))


def build_csr(edges: Iterable[Sequence], num_vertices: int) -> Graph:
    """Build a CSR graph from ``(src, dst, weight)`` triples.

    Out-edges of a vertex are sorted by destination, then weight. Parallel
    edges and self-loops are kept.
    """
    if num_vertices < 0:
        raise GraphError("num_vertices must be nonnegative")
    edges = list(edges)
    m = len(edges)
    src = np.empty(m, dtype=np.int64)
    dst = np.empty(m, dtype=np.int64)
    w = np.empty(m, dtype=np.float64)
    for i, edge in enumerate(edges):
        try:
            s, d, wt = edge
        except (TypeError, ValueError):
            raise GraphError(f"edge {i}: expected a (src, dst, weight) triple, got {edge!r}") from None
        if not (0 <= s < num_vertices and 0 <= d < num_vertices):
            raise GraphError(f"edge {i}: vertex id out of range in ({s}, {d}) for {num_vertices} vertices")
        wt = float(wt)
        if not np.isfinite(wt) or wt < 0:
            raise GraphError(f"edge {i}: weight {wt} must be finite and nonnegative")
        src[i], dst[i], w[i] = s, d, wt
    order = np.lexsort((w, dst, src))
    row_offsets = np.zeros(num_vertices + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=num_vertices), out=row_offsets[1:])
    return Graph(row_offsets, dst[order], w[order])


def build_transpose(g: Graph) -> Graph:
    """Return ``g`` with its CSC view populated (no-op if already present)."""
    if g.csc is not None:
        return g
    n = g.num_vertices
    # stable: in-edges of a vertex stay in ascending CSR edge-id order
    order = np.argsort(g.column_indices, kind="stable")
    col_offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(g.column_indices, minlength=n), out=col_offsets[1:])
    csc = Csc(
        _frozen(col_offsets),
        _frozen(g.sources[order].copy()),
        _frozen(g.values[order].copy()),
        _frozen(order.astype(np.int64)),
    )
    return Graph(g.row_offsets, g.column_indices, g.values, csc=csc, partition=g.partition)


def reverse(g: Graph) -> Graph:
    """The graph with every edge flipped, as a fresh CSR graph."""
    return build_csr(zip(g.column_indices.tolist(), g.sources.tolist(), g.values.tolist()), g.num_vertices)


def random_partition(g: Graph, k: int, seed: int) -> Graph:
    """Assign every vertex a uniformly drawn partition id in ``[0, k)``."""
    if k < 1:
        raise GraphError("number of partitions must be at least 1")
    part = np.random.default_rng(seed).integers(0, k, size=g.num_vertices)
    return Graph(g.row_offsets, g.column_indices, g.values, csc=g.csc, partition=part)
