"""Command-line front end.

Exit codes: 0 success, 1 bad arguments or unreadable input, 2 generation
failure, 3 tied heights in the requested direction, 4 reconstruction error,
5 verification mismatch.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import GenerationFailure, GpViolation, ParseError, PdreconError, TiedHeights
from .geometry import EPS
from .graph import ImmersedGraph, generate_gp_graph, normalize_edge, read_graph, write_graph
from .persistence import Oracle, compute_apd
from .reconstruction import find_edges, reconstruct_graph

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_GENERATION = 2
EXIT_TIED = 3
EXIT_RECONSTRUCTION = 4
EXIT_MISMATCH = 5

STATS_HEADER = ["n", "m", "d", "mode", "query_count", "wall_time_ms", "bound_ratio"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunStats:
    n: int
    m: int
    d: int
    mode: str
    query_count: int
    wall_time_ms: float
    phase_timings: dict = field(default_factory=dict)

    @property
    def bound_ratio(self) -> float:
        return self.query_count / query_bound(self.n, self.m, self.d)

    def row(self) -> list:
        return [self.n, self.m, self.d, self.mode, self.query_count, f"{self.wall_time_ms:.3f}", f"{self.bound_ratio:.6f}"]


def query_bound(n: int, m: int, d: int) -> int:
    """Reference count d + 1 + m * max(1, ceil(log2 n)) used to normalise query counts."""
    log_n = math.ceil(math.log2(n)) if n > 1 else 0
    return d + 1 + m * max(1, log_n)


def append_stats(path, stats: RunStats) -> None:
    path = Path(path)
    fresh = not path.exists() or path.stat().st_size == 0
    with path.open("a", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if fresh:
            writer.writerow(STATS_HEADER)
        writer.writerow(stats.row())


def _err(msg: str) -> None:
    print(f"pdrecon: {msg}", file=sys.stderr)


def _write_text(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _load(path, **kwargs) -> ImmersedGraph:
    try:
        return read_graph(path, **kwargs)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except (ParseError, GpViolation) as exc:
        raise UsageError(f"{path}: {exc}") from exc


def cmd_gen(args) -> int:
    if args.n < 1 or args.dim < 2:
        raise UsageError("need --n >= 1 and --dim >= 2")
    if not 0 <= args.m <= args.n * (args.n - 1) // 2:
        raise UsageError(f"--m must be between 0 and {args.n * (args.n - 1) // 2} for --n {args.n}")
    try:
        G = generate_gp_graph(args.n, args.m, args.dim, args.seed)
    except GenerationFailure as exc:
        _err(str(exc))
        return EXIT_GENERATION
    write_graph(G, args.out)
    return EXIT_OK


def _parse_direction(text: str, d: int) -> np.ndarray:
    try:
        s = np.array([float(x) for x in text.split(",")])
    except ValueError as exc:
        raise UsageError(f"bad direction {text!r}") from exc
    if len(s) != d:
        raise UsageError(f"direction has {len(s)} components, graph dimension is {d}")
    norm = float(np.linalg.norm(s))
    if not np.isfinite(norm) or norm == 0.0:
        raise UsageError("direction must be a nonzero finite vector")
    return s / norm


def cmd_apd(args) -> int:
    G = _load(args.graph)
    s = _parse_direction(args.direction, G.dimension)
    try:
        D = compute_apd(G, s)
    except TiedHeights as exc:
        _err(f"{exc} (pair {list(exc.pair)})")
        return EXIT_TIED
    _write_text(args.out, json.dumps(D.to_dict()) + "\n")
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    G = _load(args.graph)
    if args.mode == "full":
        try:
            G.validate_gp(strict=True)
        except GpViolation as exc:
            raise UsageError(f"{args.graph}: {exc}") from exc
    oracle = Oracle(G)
    start = time.perf_counter()
    try:
        if args.mode == "full":
            result = reconstruct_graph(oracle, G.dimension)
            out, timings = result.graph, result.phase_timings
        else:
            E = find_edges(G.vertices, oracle)
            out, timings = ImmersedGraph(G.vertices, E), {"edges": time.perf_counter() - start}
    except PdreconError as exc:
        _err(f"reconstruction failed: {exc}")
        return EXIT_RECONSTRUCTION
    wall_ms = (time.perf_counter() - start) * 1000.0
    write_graph(out, args.out)
    stats = RunStats(out.n, out.m, out.dimension, args.mode, oracle.query_count, wall_ms, timings)
    if args.stats:
        append_stats(args.stats, stats)
    return EXIT_OK


def match_graphs(truth: ImmersedGraph, recon: ImmersedGraph, eps: float = EPS):
    """Optimal vertex assignment and edge symmetric difference in truth labels.

    Returns ``(vertices_ok, missing, extra)``; ``missing`` edges are in
    ``truth`` only, ``extra`` in ``recon`` only.
    """
    if truth.n != recon.n or truth.dimension != recon.dimension:
        return False, sorted(truth.edges), []
    if truth.n == 0:
        return True, [], []
    cost = np.linalg.norm(truth.vertices[:, None, :] - recon.vertices[None, :, :], axis=2)
    rows, cols = linear_sum_assignment(cost)
    vertices_ok = bool(np.all(cost[rows, cols] <= eps))
    to_truth = np.empty(recon.n, dtype=int)
    to_truth[cols] = rows
    mapped = {normalize_edge(to_truth[i], to_truth[j]) for i, j in recon.edges}
    return vertices_ok, sorted(truth.edges - mapped), sorted(mapped - truth.edges)


def cmd_verify(args) -> int:
    truth = _load(args.truth, check_gp=False)
    recon = _load(args.recon, check_gp=False)
    vertices_ok, missing, extra = match_graphs(truth, recon)
    if vertices_ok and not missing and not extra:
        print("ok")
        return EXIT_OK
    if not vertices_ok:
        print(f"vertex sets differ ({truth.n} vs {recon.n} vertices)")
    for e in missing:
        print(f"missing {e[0]} {e[1]}")
    for e in extra:
        print(f"extra {e[0]} {e[1]}")
    return EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pdrecon", description="Graph reconstruction from directional persistence diagrams.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="generate a random graph in general position")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("apd", help="compute one augmented persistence diagram")
    p.add_argument("--graph", required=True)
    p.add_argument("--direction", required=True, help="comma-separated components")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_apd)

    p = sub.add_parser("reconstruct", help="reconstruct a hidden graph through the oracle")
    p.add_argument("--graph", required=True)
    p.add_argument("--mode", choices=["edges", "full"], default="full")
    p.add_argument("--out", required=True)
    p.add_argument("--stats", help="CSV file to append a statistics row to")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("verify", help="compare a reconstruction with the ground truth")
    p.add_argument("--truth", required=True)
    p.add_argument("--recon", required=True)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        _err(str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
