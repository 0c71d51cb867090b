"""Execution-policy parameterized operators over graphs and frontiers.

Every operator takes an :class:`ExecutionPolicy` first. ``Sequential`` runs
on the calling thread in a fixed order. ``ParallelSync`` splits the work into
even static chunks, runs them on a thread pool and joins them before
returning (the superstep barrier). ``ParallelAsync`` has no barriers and is
only offered as the fused :func:`async_expand_loop`.

Expand conditions are called as ``cond(src, dst, edge, weight)`` and must be
safe to call concurrently; any side effects are their own business.
"""

from __future__ import annotations

import os
import threading
from concurrent.futures import ThreadPoolExecutor, wait
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .frontier import BitmapFrontier, Frontier, FrontierError, QueueFrontier, SparseFrontier
from .graph import Graph, GraphError

__all__ = [
    "ExecutionPolicy",
    "Mode",
    "async_expand_loop",
    "filter_frontier",
    "neighbors_expand",
    "neighbors_expand_pull",
    "parallel_for_each_vertex",
    "uniquify",
]

ExpandCondition = Callable[[int, int, int, float], bool]


class Mode(str, Enum):
    SEQUENTIAL = "seq"
    PARALLEL_SYNC = "par"
    PARALLEL_ASYNC = "par-nosync"


@dataclass(frozen=True)
class ExecutionPolicy:
    mode: Mode = Mode.PARALLEL_SYNC
    worker_count: int = 1

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.mode is not Mode.SEQUENTIAL and self.worker_count < 1:
            raise ValueError("parallel policies need worker_count >= 1")

    @classmethod
    def seq(cls) -> ExecutionPolicy:
        return cls(Mode.SEQUENTIAL, 1)

    @classmethod
    def par(cls, workers: int | None = None) -> ExecutionPolicy:
        return cls(Mode.PARALLEL_SYNC, workers or default_workers())

    @classmethod
    def par_nosync(cls, workers: int | None = None) -> ExecutionPolicy:
        return cls(Mode.PARALLEL_ASYNC, workers or default_workers())

    @property
    def is_sequential(self) -> bool:
        return self.mode is Mode.SEQUENTIAL


def default_workers() -> int:
    return os.cpu_count() or 1


_pools: dict[int, ThreadPoolExecutor] = {}
_pools_lock = threading.Lock()


def _pool(workers: int) -> ThreadPoolExecutor:
    with _pools_lock:
        pool = _pools.get(workers)
        if pool is None:
            pool = _pools[workers] = ThreadPoolExecutor(workers, thread_name_prefix="nativegraph")
        return pool


def _chunks(n: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, n))
    bounds = np.linspace(0, n, parts + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:])]


def _run_chunks(policy: ExecutionPolicy, n: int, work: Callable[[int, int], list]) -> list[list]:
    """Apply ``work(lo, hi)`` over ``[0, n)`` and return per-chunk results in chunk order.

    Every chunk finishes before this returns, even when one of them raises.
    """
    if policy.is_sequential or policy.worker_count == 1 or n <= 1:
        return [work(0, n)]
    futures = [_pool(policy.worker_count).submit(work, lo, hi) for lo, hi in _chunks(n, policy.worker_count)]
    wait(futures)
    return [fut.result() for fut in futures]


def _require_sync(policy: ExecutionPolicy, op: str) -> None:
    if policy.mode is Mode.PARALLEL_ASYNC:
        raise ValueError(f"{op} has no barrier-free form; use async_expand_loop for par-nosync")


def _check_graph(g: Graph, f: Frontier) -> None:
    if f.capacity != g.num_vertices:
        raise FrontierError(f"frontier capacity {f.capacity} does not match graph with {g.num_vertices} vertices")


def _merge(template: Frontier, parts: list[list[int]]) -> Frontier:
    out = template.empty_like()
    if isinstance(out, BitmapFrontier):
        mask = out.bits
        for part in parts:
            mask[part] = True
        return BitmapFrontier.from_mask(mask, out.kind)
    for part in parts:
        # ids come from the graph's own column indices, already in range
        out.active_vertices.extend(part)
    return out


def neighbors_expand(policy: ExecutionPolicy, g: Graph, f: Frontier, cond: ExpandCondition) -> Frontier:
    """Push traversal: call ``cond`` once per out-edge of every active vertex.

    The output holds ``dst`` once for every call that returned true, in the
    same representation as ``f``. Sequential mode visits edges in ascending
    (frontier position, edge id) order.
    """
    _require_sync(policy, "neighbors_expand")
    if isinstance(f, QueueFrontier):
        raise FrontierError("neighbors_expand needs a sparse or bitmap frontier; drive queues with async_expand_loop")
    _check_graph(g, f)
    active = f.active_vertices if isinstance(f, SparseFrontier) else f.vertices()
    ro, ci, wt = g.adjacency

    def work(lo: int, hi: int) -> list[int]:
        out = []
        for i in range(lo, hi):
            v = active[i]
            for e in range(ro[v], ro[v + 1]):
                n = ci[e]
                if cond(v, n, e, wt[e]):
                    out.append(n)
        return out

    return _merge(f, _run_chunks(policy, len(active), work))


def neighbors_expand_pull(
    policy: ExecutionPolicy,
    g: Graph,
    f: BitmapFrontier,
    cond: ExpandCondition,
    short_circuit: bool = False,
) -> BitmapFrontier:
    """Pull traversal over the transposed view.

    Each vertex ``u`` scans its in-edges ``(v, u)`` and calls ``cond`` for
    those whose source is active in ``f``; the edge id passed is the original
    CSR id. ``u`` enters the output at most once. With ``short_circuit`` the
    scan of ``u`` stops at the first true result, which is only sound for
    conditions where later in-edges cannot matter (e.g. BFS claiming).
    """
    _require_sync(policy, "neighbors_expand_pull")
    if g.csc is None:
        raise GraphError("pull traversal needs the transposed view; call build_transpose first")
    if not isinstance(f, BitmapFrontier):
        raise FrontierError("pull traversal needs a bitmap frontier for membership queries")
    _check_graph(g, f)
    csc = g.csc
    bits = f.bits
    co = csc.col_offsets.tolist()
    rows, vals, ids = csc.row_indices, csc.values, csc.edge_ids

    def work(lo: int, hi: int) -> list[int]:
        out = []
        start, stop = co[lo], co[hi]
        if start == stop or not f.size():
            return out
        hits = start + np.flatnonzero(bits[rows[start:stop]])
        if not hits.size:
            return out
        # owner vertex of each hit position
        owners = (np.searchsorted(csc.col_offsets, hits, side="right") - 1).tolist()
        last = -1
        for u, v, w, e in zip(owners, rows[hits].tolist(), vals[hits].tolist(), ids[hits].tolist()):
            if short_circuit and u == last:
                continue
            if cond(v, u, e, w) and u != last:
                out.append(u)
                last = u
        return out

    return _merge(f, _run_chunks(policy, g.num_vertices, work))


class _Termination:
    """Idle-worker bookkeeping for :func:`async_expand_loop`."""

    def __init__(self):
        self.cond = threading.Condition()
        self.busy = 0
        self.done = False
        self.error: BaseException | None = None


def async_expand_loop(policy: ExecutionPolicy, g: Graph, f: QueueFrontier, cond: ExpandCondition) -> None:
    """Barrier-free push traversal driven by a message queue.

    ``policy.worker_count`` threads pop a vertex, expand its out-edges and
    enqueue every neighbor whose condition fires, until the queue is empty
    with all workers idle. ``cond`` must be monotone: re-running it on stale
    state may not undo progress. Leaves ``f`` empty on return.
    """
    if policy.mode is not Mode.PARALLEL_ASYNC:
        raise ValueError("async_expand_loop requires the par-nosync policy")
    if not isinstance(f, QueueFrontier):
        raise FrontierError("async_expand_loop needs a queue frontier")
    _check_graph(g, f)
    ro, ci, wt = g.adjacency
    term = _Termination()

    def next_vertex() -> int | None:
        with term.cond:
            while True:
                if term.done or term.error is not None:
                    return None
                v = f.pop()
                if v is not None:
                    term.busy += 1
                    return v
                if term.busy == 0:
                    term.done = True
                    term.cond.notify_all()
                    return None
                term.cond.wait()

    def worker() -> None:
        while (v := next_vertex()) is not None:
            try:
                for e in range(ro[v], ro[v + 1]):
                    n = ci[e]
                    if cond(v, n, e, wt[e]):
                        f.add_vertex(n)
            except BaseException as exc:
                with term.cond:
                    if term.error is None:
                        term.error = exc
                raise
            finally:
                with term.cond:
                    term.busy -= 1
                    term.cond.notify_all()

    def guarded() -> None:
        try:
            worker()
        except BaseException:
            pass

    threads = [threading.Thread(target=guarded, name=f"nativegraph-async-{i}") for i in range(policy.worker_count)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    if term.error is not None:
        # drain so the queue is not left half-consumed for the caller
        while f.pop() is not None:
            pass
        raise term.error


def filter_frontier(policy: ExecutionPolicy, f: Frontier, pred: Callable[[int], bool]) -> Frontier:
    """Keep the elements of ``f`` for which ``pred`` is true, same representation and order."""
    _require_sync(policy, "filter")
    if isinstance(f, QueueFrontier):
        raise FrontierError("filter is not defined on queue frontiers")
    items = f.active_vertices if isinstance(f, SparseFrontier) else f.vertices()

    def work(lo: int, hi: int) -> list[int]:
        return [v for v in items[lo:hi] if pred(v)]

    return _merge(f, _run_chunks(policy, len(items), work))


def uniquify(f: SparseFrontier) -> SparseFrontier:
    """Ascending, duplicate-free copy of a sparse frontier."""
    if not isinstance(f, SparseFrontier):
        raise FrontierError("uniquify is only defined for sparse frontiers")
    out = f.empty_like()
    out.active_vertices = sorted(set(f.active_vertices))
    return out


def parallel_for_each_vertex(policy: ExecutionPolicy, n: int, body: Callable[[int], None]) -> None:
    """Call ``body(v)`` exactly once for each ``v`` in ``[0, n)``, then join.

    par-nosync behaves like par here.
    """

    def work(lo: int, hi: int) -> list:
        for v in range(lo, hi):
            body(v)
        return []

    if policy.mode is Mode.PARALLEL_ASYNC:
        policy = ExecutionPolicy(Mode.PARALLEL_SYNC, policy.worker_count)
    _run_chunks(policy, n, work)

