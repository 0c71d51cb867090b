"""Command-line driver: load a Matrix Market graph, run SSSP or BFS, optionally validate.

Exit codes: 0 success, 1 validation failure, 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass

import numpy as np

from .algorithms import ConfigError, SsspConfig, TraversalStats, bfs, reference_dijkstra, repair_predecessors, sssp
from .frontier import Representation
from .graph import GraphError, build_csr, build_transpose, random_partition
from .io import MatrixMarketError, format_distances, parse_matrix_market
from .operators import ExecutionPolicy, Mode, default_workers


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nativegraph", description="Run SSSP or BFS on a Matrix Market graph.")
    p.add_argument("--graph", required=True, metavar="PATH", help="Matrix Market coordinate file")
    p.add_argument("--algorithm", choices=("sssp", "bfs"), default="sssp")
    p.add_argument("--source", type=int, default=0)
    p.add_argument("--policy", choices=[m.value for m in Mode], default="par")
    p.add_argument("--direction", choices=("push", "pull"), default="push")
    p.add_argument("--frontier", choices=[r.value for r in Representation], default="sparse")
    p.add_argument("--workers", type=int, default=None, help="worker threads (default: CPU count)")
    p.add_argument("--output", metavar="PATH", help="distance table destination (default: stdout)")
    p.add_argument("--validate", action="store_true", help="compare against sequential Dijkstra")
    p.add_argument("--seed", type=int, default=None, help="seed for random vertex partitioning")
    p.add_argument("--undirected", action="store_true", help="add the reverse of every edge")
    p.add_argument("--stats-json", metavar="PATH", help="write a JSON run report")
    return p


@dataclass
class RunReport:
    config: dict
    load_ms: float = 0.0
    build_ms: float = 0.0
    algo_ms: float = 0.0
    supersteps: int = 0
    relaxations: int = 0
    verdict: str = "skipped"

    def to_json(self) -> str:
        d = {
            "config": self.config,
            "load_ms": self.load_ms,
            "build_ms": self.build_ms,
            "algo_ms": self.algo_ms,
            "supersteps": self.supersteps,
            "relaxations": self.relaxations,
            "verdict": self.verdict,
        }
        return json.dumps(d, sort_keys=True)


def _config(args) -> SsspConfig:
    workers = args.workers if args.workers is not None else default_workers()
    if workers < 1:
        raise ConfigError("--workers must be at least 1")
    if args.policy == "seq":
        policy = ExecutionPolicy.seq()
    else:
        policy = ExecutionPolicy(Mode(args.policy), workers)
    cfg = SsspConfig(policy, args.direction, Representation(args.frontier))
    if args.algorithm == "bfs" and cfg.frontier is Representation.QUEUE:
        raise ConfigError("bfs runs in supersteps and cannot use --frontier queue / --policy par-nosync")
    return cfg


def _ms(t0: float) -> float:
    return round((time.perf_counter() - t0) * 1e3, 3)


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _config(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"nativegraph: error: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"nativegraph: invalid configuration: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    report = RunReport(config=dict(cfg.describe(), algorithm=args.algorithm, source=args.source,
                                   undirected=args.undirected, seed=args.seed))
    try:
        t0 = time.perf_counter()
        with open(args.graph, "rb") as fh:
            el = parse_matrix_market(fh, force_unit_weights=args.algorithm == "bfs")
        if args.undirected and el.symmetry == "general":
            el.edges += [(d, s, w) for s, d, w in el.edges if s != d]
        report.load_ms = _ms(t0)

        t0 = time.perf_counter()
        g = build_csr(el.edges, el.num_vertices)
        if cfg.direction == "pull":
            g = build_transpose(g)
        if args.seed is not None:
            g = random_partition(g, cfg.policy.worker_count, args.seed)
        report.build_ms = _ms(t0)
        if not 0 <= args.source < g.num_vertices:
            raise GraphError(f"--source {args.source} out of range for a graph with {g.num_vertices} vertices")
    except OSError as exc:
        print(f"nativegraph: cannot read graph: {exc}", file=sys.stderr)
        return 2
    except (MatrixMarketError, GraphError) as exc:
        print(f"nativegraph: bad input: {exc}", file=sys.stderr)
        return 2

    stats = TraversalStats()
    t0 = time.perf_counter()
    if args.algorithm == "sssp":
        dist, pred = sssp(g, args.source, cfg, stats)
    else:
        dist = bfs(g, args.source, cfg, stats)
        pred = repair_predecessors(g, dist, args.source)
    report.algo_ms = _ms(t0)
    report.supersteps, report.relaxations = stats.supersteps, stats.relaxations

    table = format_distances(dist.tolist(), pred.tolist())
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(table)
    else:
        sys.stdout.write(table)

    status = 0
    if args.validate:
        ref, _ = reference_dijkstra(g, args.source)
        if np.array_equal(ref, dist):
            report.verdict = "pass"
        else:
            bad = int(np.flatnonzero(ref != dist)[0])
            report.verdict = f"fail(vertex {bad}: got {dist[bad]!r}, oracle {ref[bad]!r})"
            status = 1
        print(f"validation: {report.verdict}", file=sys.stderr)

    if args.stats_json:
        with open(args.stats_json, "w") as fh:
            fh.write(report.to_json() + "\n")
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
