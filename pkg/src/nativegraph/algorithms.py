"""SSSP and BFS built from the frontier operators, plus a Dijkstra oracle."""

from __future__ import annotations

import heapq
import itertools
import math
import threading
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .frontier import BitmapFrontier, QueueFrontier, Representation, SparseFrontier, convert, make_frontier
from .graph import Graph, GraphError, build_transpose
from .operators import (
    ExecutionPolicy,
    Mode,
    async_expand_loop,
    neighbors_expand,
    neighbors_expand_pull,
    parallel_for_each_vertex,
    uniquify,
)

__all__ = [
    "NIL",
    "UNREACHABLE",
    "AtomicArray",
    "AtomicCell",
    "ConfigError",
    "SsspConfig",
    "TraversalStats",
    "atomic_min",
    "bfs",
    "reference_dijkstra",
    "repair_predecessors",
    "sssp",
]

UNREACHABLE = math.inf
NIL = -1


class ConfigError(ValueError):
    pass


class AtomicCell:
    """A shared float updated through linearizable read-modify-write operations.

    With ``record=True`` every stored value is appended to ``history`` inside
    the critical section, so the history is the cell's true write order.
    """

    def __init__(self, value: float = UNREACHABLE, record: bool = False):
        self._value = float(value)
        self._lock = threading.Lock()
        self.history: list[float] | None = [self._value] if record else None

    def load(self) -> float:
        return self._value

    def fetch_min(self, value: float) -> float:
        with self._lock:
            old = self._value
            if value < old:
                self._value = value
                if self.history is not None:
                    self.history.append(value)
            return old


def atomic_min(slot: AtomicCell, value: float) -> float:
    """Set ``slot`` to ``min(slot, value)`` atomically; return the prior value."""
    return slot.fetch_min(value)


class AtomicArray:
    """Fixed-length float array with per-element atomic min and compare-exchange.

    Elements are guarded by a fixed pool of striped locks.
    """

    def __init__(self, n: int, fill: float = UNREACHABLE, stripes: int = 64):
        self._data = [float(fill)] * n
        self._locks = [threading.Lock() for _ in range(stripes)]
        self._stripes = stripes

    def __len__(self) -> int:
        return len(self._data)

    def __getitem__(self, i: int) -> float:
        return self._data[i]

    def __setitem__(self, i: int, value: float) -> None:
        with self._locks[i % self._stripes]:
            self._data[i] = value

    def fetch_min(self, i: int, value: float) -> float:
        with self._locks[i % self._stripes]:
            old = self._data[i]
            if value < old:
                self._data[i] = value
            return old

    def compare_exchange(self, i: int, expected: float, desired: float) -> bool:
        with self._locks[i % self._stripes]:
            if self._data[i] == expected:
                self._data[i] = desired
                return True
            return False

    def to_numpy(self) -> np.ndarray:
        return np.array(self._data, dtype=np.float64)


@dataclass(frozen=True)
class SsspConfig:
    """Which operator path a traversal takes.

    Valid combinations: seq or par with push/pull over sparse/dense frontiers,
    and par-nosync with a push queue frontier.
    """

    policy: ExecutionPolicy = field(default_factory=ExecutionPolicy.seq)
    direction: str = "push"
    frontier: Representation = Representation.SPARSE
    uniquify: bool = False

    def __post_init__(self):
        try:
            object.__setattr__(self, "frontier", Representation(self.frontier))
        except ValueError:
            raise ConfigError(f"unknown frontier representation {self.frontier!r}") from None
        if self.direction not in ("push", "pull"):
            raise ConfigError(f"direction must be 'push' or 'pull', not {self.direction!r}")
        is_async = self.policy.mode is Mode.PARALLEL_ASYNC
        is_queue = self.frontier is Representation.QUEUE
        if is_queue and not is_async:
            raise ConfigError("the queue frontier requires the par-nosync policy")
        if is_async and not is_queue:
            raise ConfigError("the par-nosync policy requires the queue frontier")
        if is_queue and self.direction != "push":
            raise ConfigError("the queue frontier only supports push traversal")
        if self.uniquify and self.frontier is not Representation.SPARSE:
            raise ConfigError("uniquify only applies to sparse frontiers")

    def describe(self) -> dict:
        return {
            "policy": self.policy.mode.value,
            "workers": self.policy.worker_count,
            "direction": self.direction,
            "frontier": self.frontier.value,
            "uniquify": self.uniquify,
        }


def all_configs(workers: int = 4) -> list[SsspConfig]:
    """The nine valid (policy, direction, frontier) combinations."""
    cfgs = [
        SsspConfig(pol, d, r)
        for pol in (ExecutionPolicy.seq(), ExecutionPolicy.par(workers))
        for d in ("push", "pull")
        for r in (Representation.SPARSE, Representation.DENSE)
    ]
    cfgs.append(SsspConfig(ExecutionPolicy.par_nosync(workers), "push", Representation.QUEUE))
    return cfgs


@dataclass
class TraversalStats:
    supersteps: int = 0
    relaxations: int = 0


def _check_source(g: Graph, source: int) -> None:
    if not 0 <= source < g.num_vertices:
        raise GraphError(f"source {source} out of range [0, {g.num_vertices})")


def _run_supersteps(g: Graph, source: int, cfg: SsspConfig, cond, stats: TraversalStats, on_step=None,
                    short_circuit: bool = False) -> None:
    n = g.num_vertices
    f = make_frontier(cfg.frontier, n, [source])
    if cfg.direction == "pull":
        g = build_transpose(g)
    while f.size() != 0:
        if cfg.direction == "push":
            f = neighbors_expand(cfg.policy, g, f, cond)
        else:
            bitmap = f if isinstance(f, BitmapFrontier) else convert(f, Representation.DENSE)
            out = neighbors_expand_pull(cfg.policy, g, bitmap, cond, short_circuit=short_circuit)
            f = out if cfg.frontier is Representation.DENSE else convert(out, cfg.frontier)
        if cfg.uniquify and isinstance(f, SparseFrontier):
            f = uniquify(f)
        stats.supersteps += 1
        if on_step is not None:
            on_step()


def sssp(g: Graph, source: int, cfg: SsspConfig | None = None,
         stats: TraversalStats | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Single-source shortest paths by iterated parallel relaxation.

    Returns ``(dist, pred)``; unreachable vertices get ``inf`` and ``-1``.
    Distances are exact for every configuration. Predecessors are rebuilt by
    :func:`repair_predecessors` after convergence.
    """
    cfg = cfg or SsspConfig()
    stats = stats if stats is not None else TraversalStats()
    _check_source(g, source)
    n = g.num_vertices
    dist = AtomicArray(n)
    pred = [NIL] * n

    def init(v: int) -> None:
        dist[v] = UNREACHABLE
        pred[v] = NIL

    parallel_for_each_vertex(cfg.policy, n, init)
    dist[source] = 0.0
    calls = itertools.count()

    def relax(src: int, dst: int, edge: int, weight: float) -> bool:
        next(calls)
        new_d = dist[src] + weight
        curr_d = dist.fetch_min(dst, new_d)
        if new_d < curr_d:
            pred[dst] = src
            return True
        return False

    if cfg.frontier is Representation.QUEUE:
        async_expand_loop(cfg.policy, g, QueueFrontier(n, vertices=[source]), relax)
    else:
        _run_supersteps(g, source, cfg, relax, stats)
    stats.relaxations = next(calls)

    d = dist.to_numpy()
    return d, repair_predecessors(g, d, source)


def repair_predecessors(g: Graph, dist: np.ndarray, source: int) -> np.ndarray:
    """Rebuild a shortest-path tree from final distances.

    An edge ``(u, v, w)`` is tight when ``dist[u] + w == dist[v]``. Hop depths
    are taken by BFS over tight edges from ``source``; ``pred[v]`` is the
    lowest-id tight in-neighbor exactly one hop shallower. Ranking by hops
    rather than by vertex id alone keeps zero-weight cycles out of the tree.
    """
    n = g.num_vertices
    dist = np.asarray(dist, dtype=np.float64)
    src, dst, w = g.sources, g.column_indices, g.values
    with np.errstate(invalid="ignore"):
        tight = np.isfinite(dist[src]) & (dist[src] + w == dist[dst]) & (dst != source)

    hops = [-1] * n
    hops[source] = 0
    ro = g.row_offsets.tolist()
    tight_l, dst_l = tight.tolist(), dst.tolist()
    level, depth = [source], 0
    while level:
        nxt = []
        for u in level:
            for e in range(ro[u], ro[u + 1]):
                v = dst_l[e]
                if tight_l[e] and hops[v] < 0:
                    hops[v] = depth + 1
                    nxt.append(v)
        level, depth = nxt, depth + 1
    hops = np.array(hops, dtype=np.int64)

    cand = tight & (hops[dst] > 0) & (hops[src] == hops[dst] - 1)
    pred = np.full(n, n, dtype=np.int64)
    np.minimum.at(pred, dst[cand], src[cand])
    pred[pred == n] = NIL
    return pred


def reference_dijkstra(g: Graph, source: int) -> tuple[np.ndarray, np.ndarray]:
    """Textbook Dijkstra with a binary heap and lazy deletion.

    Strict-improvement relaxation, so the first predecessor to reach a given
    distance keeps it.
    """
    _check_source(g, source)
    n = g.num_vertices
    ro, ci, wt = g.adjacency
    dist = [UNREACHABLE] * n
    pred = [NIL] * n
    done = [False] * n
    dist[source] = 0.0
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for e in range(ro[u], ro[u + 1]):
            v = ci[e]
            nd = d + wt[e]
            if nd < dist[v]:
                dist[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd, v))
    return np.array(dist, dtype=np.float64), np.array(pred, dtype=np.int64)


def bfs(g: Graph, source: int, cfg: SsspConfig | None = None, stats: TraversalStats | None = None) -> np.ndarray:
    """Hop depths from ``source`` (``inf`` when unreachable), one level per superstep.

    Each vertex is claimed exactly once by compare-exchange from ``inf``.
    """
    cfg = cfg or SsspConfig()
    stats = stats if stats is not None else TraversalStats()
    if cfg.frontier is Representation.QUEUE:
        raise ConfigError("bfs needs supersteps for its levels; the queue frontier is not supported")
    _check_source(g, source)
    n = g.num_vertices
    depth = AtomicArray(n)
    parallel_for_each_vertex(cfg.policy, n, lambda v: depth.__setitem__(v, UNREACHABLE))
    depth[source] = 0.0
    level = [0]
    calls = itertools.count()

    def claim(src: int, dst: int, edge: int, weight: float) -> bool:
        next(calls)
        return depth.compare_exchange(dst, UNREACHABLE, float(level[0] + 1))

    def advance() -> None:
        level[0] += 1

    _run_supersteps(g, source, cfg, claim, stats, on_step=advance, short_circuit=True)
    stats.relaxations = next(calls)
    return depth.to_numpy()


def check_predecessors(g: Graph, source: int, dist: np.ndarray, pred: Iterable[int]) -> str | None:
    """Structural check of a predecessor map; returns a reason string on failure."""
    pred = list(pred)
    ro, ci, wt = g.adjacency
    for v, p in enumerate(pred):
        if v == source or math.isinf(dist[v]):
            if p != NIL:
                return f"vertex {v} should have no predecessor"
            continue
        if p == NIL:
            return f"reachable vertex {v} has no predecessor"
        if not any(ci[e] == v and dist[p] + wt[e] == dist[v] for e in range(ro[p], ro[p + 1])):
            return f"no edge {p}->{v} realizes dist[{v}]"
    for v in range(len(pred)):
        if math.isinf(dist[v]):
            continue
        seen, u = set(), v
        while u != source:
            if u in seen or u == NIL:
                return f"predecessor chain from {v} does not reach the source"
            seen.add(u)
            u = pred[u]
    return None
