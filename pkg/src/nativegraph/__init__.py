"""Native-graph analytics in Python.

Graphs are stored as CSR (with an optional CSC view for pull traversal);
frontiers come as sparse lists, dense bitmaps or concurrent queues; operators
take an :class:`ExecutionPolicy`; algorithms loop operators to convergence.
"""

from .algorithms import (
    NIL,
    UNREACHABLE,
    AtomicArray,
    AtomicCell,
    ConfigError,
    SsspConfig,
    TraversalStats,
    all_configs,
    atomic_min,
    bfs,
    check_predecessors,
    reference_dijkstra,
    repair_predecessors,
    sssp,
)
from .frontier import (
    BitmapFrontier,
    Frontier,
    FrontierError,
    FrontierKind,
    QueueFrontier,
    Representation,
    SparseFrontier,
    convert,
    make_frontier,
)
from .graph import EdgeRange, Graph, GraphError, build_csr, build_transpose, random_partition, reverse
from .io import (
    EdgeList,
    MatrixMarketError,
    load_graph,
    parse_matrix_market,
    read_distances,
    write_distances,
    write_matrix_market,
)
from .operators import (
    ExecutionPolicy,
    Mode,
    async_expand_loop,
    filter_frontier,
    neighbors_expand,
    neighbors_expand_pull,
    parallel_for_each_vertex,
    uniquify,
)

__version__ = "0.1.0"
