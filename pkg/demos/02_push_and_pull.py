"""
Push and pull expansion
=======================

``neighbors_expand`` pushes along out-edges; ``neighbors_expand_pull`` lets
each destination look back along its in-edges. With a condition that records
what it sees, both directions visit the same (src, dst, edge) triples.
"""

import threading

import numpy as np

from nativegraph import BitmapFrontier, ExecutionPolicy, build_csr, build_transpose, neighbors_expand, neighbors_expand_pull

rng = np.random.default_rng(1)
n = 40
src, dst = np.nonzero(rng.random((n, n)) < 0.1)
g = build_transpose(build_csr(zip(src.tolist(), dst.tolist(), rng.uniform(0, 5, len(src)).tolist()), n))


def recorder(store, lock):
    def cond(s, d, e, w):
        with lock:
            store.add((s, d, e))
        return True

    return cond


active = BitmapFrontier(n, vertices=range(0, n, 5))
lock = threading.Lock()
for policy in (ExecutionPolicy.seq(), ExecutionPolicy.par(4)):
    push, pull = set(), set()
    out_push = neighbors_expand(policy, g, active, recorder(push, lock))
    out_pull = neighbors_expand_pull(policy, g, active, recorder(pull, lock))
    print(f"{policy.mode.value:>4}: {len(push)} triples via push, {len(pull)} via pull, same={push == pull}")
    print("      next frontier sizes:", out_push.size(), out_pull.size())
