"""
Graphs and frontiers
====================

Build a small weighted graph, look at its CSR and CSC arrays, and move the
same set of active vertices between the three frontier representations.
"""

from nativegraph import (
    BitmapFrontier,
    QueueFrontier,
    SparseFrontier,
    build_csr,
    build_transpose,
    convert,
    random_partition,
)

# Edges are (src, dst, weight); ids are 0-based.
g = build_csr([(0, 1, 1.0), (0, 2, 4.0), (1, 2, 2.0), (2, 0, 0.5)], 3)
print(g)
print("row_offsets   ", g.row_offsets.tolist())
print("column_indices", g.column_indices.tolist())
print("values        ", g.values.tolist())

# The native-graph API hides the arrays.
for v in range(g.num_vertices):
    for e in g.get_edges(v):
        print(f"  edge {e}: {v} -> {g.get_dest_vertex(e)} (w={g.get_edge_weight(e)})")

# Pull traversal needs the transposed view; it keeps a map back to CSR edge ids.
gt = build_transpose(g)
print("csc col_offsets", gt.csc.col_offsets.tolist(), "edge_ids", gt.csc.edge_ids.tolist())

# Random vertex partitioning is stored as metadata only.
print("partition", random_partition(g, k=2, seed=0).partition.tolist())

# %%
# A sparse frontier keeps duplicates, a bitmap does not, a queue hands items out.
sparse = SparseFrontier(3, vertices=[2, 0, 2])
bitmap = convert(sparse, "dense")
queue = QueueFrontier(3, vertices=[2, 0, 2])
print(sparse, sparse.size())
print(bitmap, bitmap.size())
print("queue pops:", [queue.pop() for _ in range(4)])
assert isinstance(bitmap, BitmapFrontier)
