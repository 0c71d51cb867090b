import itertools
import threading
from collections import Counter

import pytest

from graphgen import random_graph
from nativegraph import (
    BitmapFrontier,
    ExecutionPolicy,
    FrontierError,
    GraphError,
    QueueFrontier,
    SparseFrontier,
    async_expand_loop,
    build_transpose,
    filter_frontier,
    neighbors_expand,
    neighbors_expand_pull,
    parallel_for_each_vertex,
    uniquify,
)

SYNC = [ExecutionPolicy.seq(), ExecutionPolicy.par(1), ExecutionPolicy.par(3), ExecutionPolicy.par(8)]
ids = pytest.mark.parametrize("policy", SYNC, ids=lambda p: f"{p.mode.value}{p.worker_count}")


def always(*_):
    return True


class Recorder:
    def __init__(self, result=True):
        self.calls = []
        self.lock = threading.Lock()
        self.result = result

    def __call__(self, src, dst, edge, weight):
        with self.lock:
            self.calls.append((src, dst, edge, weight))
        return self.result


@ids
def test_expand_triangle(triangle, policy):
    out = neighbors_expand(policy, triangle, SparseFrontier(3, vertices=[0]), always)
    assert sorted(out.active_vertices) == [1, 2]


@ids
def test_expand_empty_and_sink(triangle, policy):
    rec = Recorder()
    assert neighbors_expand(policy, triangle, SparseFrontier(3), rec).size() == 0
    assert rec.calls == []
    assert neighbors_expand(policy, triangle, SparseFrontier(3, vertices=[2]), rec).size() == 0


def test_sequential_order_is_deterministic(triangle):
    rec = Recorder()
    neighbors_expand(ExecutionPolicy.seq(), triangle, SparseFrontier(3, vertices=[1, 0]), rec)
    assert rec.calls == [(1, 2, 2, 2.0), (0, 1, 0, 1.0), (0, 2, 1, 4.0)]


def test_expand_output_keeps_representation(triangle):
    out = neighbors_expand(ExecutionPolicy.seq(), triangle, BitmapFrontier(3, vertices=[0, 1]), always)
    assert isinstance(out, BitmapFrontier) and out.vertices() == [1, 2]


@pytest.mark.parametrize("seed", range(8))
@ids
def test_expand_matches_adjacency_scan(seed, policy):
    g = random_graph(seed, max_n=120)
    active = [v for v in range(g.num_vertices) if v % 3 == 0] + [0, 0]
    rec = Recorder()
    out = neighbors_expand(policy, g, SparseFrontier(g.num_vertices, vertices=active), rec)
    edges = g.edge_list()
    expected = [d for v in active for (s, d, _) in edges if s == v]
    assert Counter(out.active_vertices) == Counter(expected)
    # exactly once per out-edge occurrence
    assert len(rec.calls) == len(expected)
    assert Counter((s, d, e) for s, d, e, _ in rec.calls) == Counter(
        (v, g.get_dest_vertex(e), e) for v in active for e in g.get_edges(v)
    )


@pytest.mark.parametrize("seed", range(5))
def test_policy_equivalence_for_pure_condition(seed):
    g = random_graph(seed, max_n=200)
    f = SparseFrontier(g.num_vertices, vertices=range(0, g.num_vertices, 2))
    pick = lambda s, d, e, w: (e + s) % 3 != 0  # noqa: E731
    outs = [set(neighbors_expand(p, g, f, pick).active_vertices) for p in SYNC]
    assert all(o == outs[0] for o in outs)


def test_expand_rejects_queue_and_async(triangle):
    with pytest.raises(FrontierError):
        neighbors_expand(ExecutionPolicy.seq(), triangle, QueueFrontier(3, vertices=[0]), always)
    with pytest.raises(ValueError):
        neighbors_expand(ExecutionPolicy.par_nosync(2), triangle, SparseFrontier(3, vertices=[0]), always)


def test_barrier_no_calls_after_return():
    g = random_graph(3, n=300)
    epoch = [0]
    late = []

    def cond(s, d, e, w):
        if epoch[0]:
            late.append(e)
        return False

    for _ in range(10):
        epoch[0] = 0
        neighbors_expand(ExecutionPolicy.par(8), g, SparseFrontier(g.num_vertices, vertices=range(g.num_vertices)), cond)
        epoch[0] = 1
    assert late == []


def test_condition_errors_propagate():
    g = random_graph(4, n=100)

    def boom(s, d, e, w):
        if e == 50:
            raise RuntimeError("bad edge")
        return True

    with pytest.raises(RuntimeError, match="bad edge"):
        neighbors_expand(ExecutionPolicy.par(4), g, SparseFrontier(100, vertices=range(100)), boom)


@ids
def test_pull_triangle(triangle, policy):
    g = build_transpose(triangle)
    out = neighbors_expand_pull(policy, g, BitmapFrontier(3, vertices=[0]), always)
    assert out.vertices() == [1, 2]
    assert neighbors_expand_pull(policy, g, BitmapFrontier(3), always).size() == 0


def test_pull_passes_original_edge_ids(triangle):
    g = build_transpose(triangle)
    rec = Recorder()
    neighbors_expand_pull(ExecutionPolicy.seq(), g, BitmapFrontier(3, vertices=[0, 1]), rec)
    assert rec.calls == [(0, 1, 0, 1.0), (0, 2, 1, 4.0), (1, 2, 2, 2.0)]


def test_pull_short_circuit_and_dedup(triangle):
    g = build_transpose(triangle)
    rec = Recorder()
    out = neighbors_expand_pull(ExecutionPolicy.seq(), g, BitmapFrontier(3, vertices=[0, 1]), rec, short_circuit=True)
    assert out.vertices() == [1, 2]
    assert (1, 2, 2, 2.0) not in rec.calls


def test_pull_preconditions(triangle):
    with pytest.raises(GraphError):
        neighbors_expand_pull(ExecutionPolicy.seq(), triangle, BitmapFrontier(3, vertices=[0]), always)
    with pytest.raises(FrontierError):
        neighbors_expand_pull(ExecutionPolicy.seq(), build_transpose(triangle), SparseFrontier(3, vertices=[0]), always)


@pytest.mark.parametrize("seed", range(10))
@ids
def test_push_pull_eligibility_sets_match(seed, policy):
    g = build_transpose(random_graph(seed, max_n=150))
    n = g.num_vertices
    active = [v for v in range(n) if (v * 7 + seed) % 4 == 0]
    push, pull = Recorder(), Recorder()
    out_push = neighbors_expand(policy, g, BitmapFrontier(n, vertices=active), push)
    out_pull = neighbors_expand_pull(policy, g, BitmapFrontier(n, vertices=active), pull)
    assert set(push.calls) == set(pull.calls)
    assert len(push.calls) == len(pull.calls)
    assert out_push.vertex_set() == out_pull.vertex_set()


def test_async_loop_sink_and_termination(triangle):
    q = QueueFrontier(3, vertices=[2])
    rec = Recorder()
    async_expand_loop(ExecutionPolicy.par_nosync(4), triangle, q, rec)
    assert rec.calls == [] and q.size() == 0


def test_async_loop_visits_reachable_once_with_claiming():
    g = random_graph(9, n=400)
    seen = [False] * g.num_vertices
    seen[0] = True
    lock = threading.Lock()

    def claim(s, d, e, w):
        with lock:
            if seen[d]:
                return False
            seen[d] = True
            return True

    q = QueueFrontier(g.num_vertices, vertices=[0])
    async_expand_loop(ExecutionPolicy.par_nosync(8), g, q, claim)
    assert q.size() == 0
    # reference: plain reachability
    reach, stack = {0}, [0]
    while stack:
        u = stack.pop()
        for e in g.get_edges(u):
            v = g.get_dest_vertex(e)
            if v not in reach:
                reach.add(v)
                stack.append(v)
    assert {v for v, s in enumerate(seen) if s} == reach


def test_async_loop_rejects_misuse(triangle):
    with pytest.raises(ValueError):
        async_expand_loop(ExecutionPolicy.par(2), triangle, QueueFrontier(3, vertices=[0]), always)
    with pytest.raises(FrontierError):
        async_expand_loop(ExecutionPolicy.par_nosync(2), triangle, SparseFrontier(3, vertices=[0]), always)


def test_async_loop_propagates_worker_failure():
    g = random_graph(2, n=200)

    def boom(s, d, e, w):
        raise KeyError("worker failed")

    src = next(v for v in range(200) if g.get_out_degree(v))
    q = QueueFrontier(200, vertices=[src])
    with pytest.raises(KeyError):
        async_expand_loop(ExecutionPolicy.par_nosync(4), g, q, boom)


@pytest.mark.parametrize("policy", SYNC + [ExecutionPolicy.par_nosync(4)], ids=str)
def test_filter(policy):
    if policy.mode.value == "par-nosync":
        with pytest.raises(ValueError):
            filter_frontier(policy, SparseFrontier(5), lambda v: True)
        return
    f = SparseFrontier(5, vertices=[1, 2, 3, 4])
    assert filter_frontier(policy, f, lambda v: v % 2 == 0).active_vertices == [2, 4]
    assert filter_frontier(policy, f, lambda v: False).size() == 0
    assert filter_frontier(policy, f, lambda v: True).active_vertices == [1, 2, 3, 4]
    b = filter_frontier(policy, BitmapFrontier(5, vertices=[1, 2, 3]), lambda v: v != 2)
    assert isinstance(b, BitmapFrontier) and b.vertices() == [1, 3]


def test_filter_rejects_queue():
    with pytest.raises(FrontierError):
        filter_frontier(ExecutionPolicy.seq(), QueueFrontier(3), lambda v: True)


def test_uniquify():
    assert uniquify(SparseFrontier(10, vertices=[3, 5, 3])).active_vertices == [3, 5]
    assert uniquify(SparseFrontier(10)).active_vertices == []
    with pytest.raises(FrontierError):
        uniquify(BitmapFrontier(10))


@pytest.mark.parametrize("seed", range(5))
def test_uniquify_random(seed):
    import random

    rnd = random.Random(seed)
    items = [rnd.randrange(40) for _ in range(100)]
    assert uniquify(SparseFrontier(40, vertices=items)).active_vertices == sorted(set(items))


@pytest.mark.parametrize("policy", SYNC + [ExecutionPolicy.par_nosync(4)], ids=str)
def test_parallel_for_each_vertex(policy):
    calls = []
    parallel_for_each_vertex(policy, 0, calls.append)
    assert calls == []
    logs = {}

    def body(v):
        logs.setdefault(threading.get_ident(), []).append(v)

    parallel_for_each_vertex(policy, 3, body)
    assert sorted(itertools.chain.from_iterable(logs.values())) == [0, 1, 2]


def test_parallel_for_each_vertex_counter():
    counter = itertools.count()
    parallel_for_each_vertex(ExecutionPolicy.par(8), 100_000, lambda v: next(counter))
    assert next(counter) == 100_000
