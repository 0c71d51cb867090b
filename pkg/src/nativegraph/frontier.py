"""Active vertex sets with interchangeable underlying representations.

Three representations share one interface:

* :class:`SparseFrontier` - growable list of ids, duplicates kept.
* :class:`BitmapFrontier` - one flag per vertex plus a cached population count.
* :class:`QueueFrontier` - thread-safe MPMC queue with an in-flight counter,
  used for message-passing style asynchronous traversal.

``size() == 0`` is the convergence test in every representation.
"""

from __future__ import annotations

import threading
from collections import deque
from enum import Enum
from typing import Iterable

import numpy as np

__all__ = [
    "BitmapFrontier",
    "Frontier",
    "FrontierError",
    "FrontierKind",
    "QueueFrontier",
    "Representation",
    "SparseFrontier",
    "convert",
    "make_frontier",
]


class FrontierError(Exception):
    pass


class Representation(str, Enum):
    SPARSE = "sparse"
    DENSE = "dense"
    QUEUE = "queue"


class FrontierKind(str, Enum):
    VERTEX = "vertex"
    EDGE = "edge"


class Frontier:
    """Base class. ``capacity`` bounds the ids (|V| for vertex frontiers, |E| for edge frontiers)."""

    representation: Representation

    def __init__(self, capacity: int, kind: FrontierKind = FrontierKind.VERTEX):
        self.capacity = int(capacity)
        self.kind = FrontierKind(kind)

    def _check(self, v) -> int:
        if not 0 <= v < self.capacity:
            raise FrontierError(f"id {v} out of range [0, {self.capacity})")
        return int(v)

    def size(self) -> int:
        raise NotImplementedError

    def __len__(self) -> int:
        return self.size()

    def add_vertex(self, v: int) -> None:
        raise NotImplementedError

    def get_active_vertex(self, i: int) -> int:
        raise FrontierError(f"{self.representation.value} frontier has no positional access; use pop()")

    def pop(self) -> int | None:
        raise FrontierError(f"pop() is only defined for queue frontiers, not {self.representation.value}")

    def vertex_set(self) -> set[int]:
        raise NotImplementedError

    def empty_like(self) -> Frontier:
        return type(self)(self.capacity, self.kind)


class SparseFrontier(Frontier):
    representation = Representation.SPARSE

    def __init__(self, capacity: int, kind: FrontierKind = FrontierKind.VERTEX, vertices: Iterable[int] = ()):
        super().__init__(capacity, kind)
        self.active_vertices: list[int] = []
        for v in vertices:
            self.add_vertex(v)

    def size(self) -> int:
        return len(self.active_vertices)

    def add_vertex(self, v: int) -> None:
        self.active_vertices.append(self._check(v))

    def extend(self, vertices: Iterable[int]) -> None:
        for v in vertices:
            self.add_vertex(v)

    def get_active_vertex(self, i: int) -> int:
        if not 0 <= i < len(self.active_vertices):
            raise FrontierError(f"index {i} out of range for frontier of size {self.size()}")
        return self.active_vertices[i]

    def vertices(self) -> list[int]:
        return list(self.active_vertices)

    def vertex_set(self) -> set[int]:
        return set(self.active_vertices)

    def __repr__(self) -> str:
        return f"SparseFrontier({self.active_vertices!r})"


class BitmapFrontier(Frontier):
    representation = Representation.DENSE

    def __init__(self, capacity: int, kind: FrontierKind = FrontierKind.VERTEX, vertices: Iterable[int] = ()):
        super().__init__(capacity, kind)
        self.bits = np.zeros(self.capacity, dtype=bool)
        self._count = 0
        self._order: np.ndarray | None = None
        for v in vertices:
            self.add_vertex(v)

    @classmethod
    def from_mask(cls, mask: np.ndarray, kind: FrontierKind = FrontierKind.VERTEX) -> BitmapFrontier:
        f = cls(len(mask), kind)
        f.bits[:] = mask
        f._count = int(np.count_nonzero(f.bits))
        return f

    def size(self) -> int:
        return self._count

    def add_vertex(self, v: int) -> None:
        v = self._check(v)
        if not self.bits[v]:
            self.bits[v] = True
            self._count += 1
            self._order = None

    def contains(self, v: int) -> bool:
        return bool(self.bits[v])

    def active(self) -> np.ndarray:
        """Set ids in ascending order."""
        if self._order is None:
            self._order = np.flatnonzero(self.bits)
        return self._order

    def get_active_vertex(self, i: int) -> int:
        if not 0 <= i < self._count:
            raise FrontierError(f"index {i} out of range for frontier of size {self._count}")
        return int(self.active()[i])

    def vertices(self) -> list[int]:
        return self.active().tolist()

    def vertex_set(self) -> set[int]:
        return set(self.vertices())

    def recount(self) -> int:
        return int(np.count_nonzero(self.bits))

    def __repr__(self) -> str:
        return f"BitmapFrontier({self.vertices()!r})"


class QueueFrontier(Frontier):
    """Multi-producer multi-consumer queue of ids.

    ``size()`` is the in-flight counter (adds minus successful pops); it is
    only a snapshot while other threads are active.
    """

    representation = Representation.QUEUE

    def __init__(self, capacity: int, kind: FrontierKind = FrontierKind.VERTEX, vertices: Iterable[int] = ()):
        super().__init__(capacity, kind)
        self._items: deque[int] = deque()
        self._lock = threading.Lock()
        self._in_flight = 0
        for v in vertices:
            self.add_vertex(v)

    def size(self) -> int:
        return self._in_flight

    def add_vertex(self, v: int) -> None:
        v = self._check(v)
        with self._lock:
            self._items.append(v)
            self._in_flight += 1

    def pop(self) -> int | None:
        """Remove and return one id, or ``None`` if the queue is empty right now."""
        with self._lock:
            if not self._items:
                return None
            self._in_flight -= 1
            return self._items.popleft()

    def vertex_set(self) -> set[int]:
        with self._lock:
            return set(self._items)

    def vertices(self) -> list[int]:
        with self._lock:
            return list(self._items)

    def __repr__(self) -> str:
        return f"QueueFrontier({self.vertices()!r})"


_CLASSES = {
    Representation.SPARSE: SparseFrontier,
    Representation.DENSE: BitmapFrontier,
    Representation.QUEUE: QueueFrontier,
}


def make_frontier(representation, capacity: int, vertices: Iterable[int] = (), kind=FrontierKind.VERTEX) -> Frontier:
    return _CLASSES[Representation(representation)](capacity, kind, vertices)


def convert(f: Frontier, target, num_vertices: int | None = None) -> Frontier:
    """Copy ``f`` into the ``target`` representation, preserving the id set.

    Sparse to bitmap drops duplicates; bitmap to anything yields ascending
    order. ``f`` must not be mutated concurrently.
    """
    target = Representation(target)
    capacity = f.capacity if num_vertices is None else num_vertices
    if isinstance(f, BitmapFrontier) and target is Representation.DENSE and capacity == f.capacity:
        return BitmapFrontier.from_mask(f.bits.copy(), f.kind)
    if target is Representation.DENSE:
        ids = np.asarray(f.vertices(), dtype=np.int64)
        if ids.size and (ids.min() < 0 or ids.max() >= capacity):
            raise FrontierError(f"frontier holds ids outside [0, {capacity})")
        mask = np.zeros(capacity, dtype=bool)
        mask[ids] = True
        return BitmapFrontier.from_mask(mask, f.kind)
    return _CLASSES[target](capacity, f.kind, f.vertices())
