"""Seeded random graph corpora shared by the test modules."""

import numpy as np

from nativegraph import build_csr


def random_edges(seed, n=None, max_n=500, avg_degree=4.0, zero_frac=0.1, max_w=10.0):
    """Directed G(n, p) with p = avg_degree / n, weights U[0, max_w], some forced to zero."""
    rng = np.random.default_rng(seed)
    if n is None:
        n = int(rng.integers(2, max_n + 1))
    p = min(1.0, avg_degree / n)
    src, dst = np.nonzero(rng.random((n, n)) < p)
    w = rng.uniform(0.0, max_w, len(src))
    w[rng.random(len(src)) < zero_frac] = 0.0
    return n, list(zip(src.tolist(), dst.tolist(), w.tolist()))


def random_graph(seed, **kw):
    n, edges = random_edges(seed, **kw)
    return build_csr(edges, n)


def bellman_ford(n, edges, source):
    """Brute-force shortest distances: relax every edge until nothing changes."""
    dist = [float("inf")] * n
    dist[source] = 0.0
    changed = True
    while changed:
        changed = False
        for s, d, w in edges:
            if dist[s] + w < dist[d]:
                dist[d] = dist[s] + w
                changed = True
    return dist


def hop_counts(n, edges, source):
    """Brute-force BFS depths by repeated edge scans."""
    depth = [float("inf")] * n
    depth[source] = 0
    for level in range(n):
        grew = False
        for s, d, _ in edges:
            if depth[s] == level and depth[d] == float("inf"):
                depth[d] = level + 1
                grew = True
        if not grew:
            break
    return depth


TRIANGLE = [(0, 1, 1.0), (0, 2, 4.0), (1, 2, 2.0)]
