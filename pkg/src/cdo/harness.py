"""Collective spanning-tree experiments: random graphs, thresholded profiles, timed solves.

Seeding: every random object gets its own child seed derived from the
master seed and an integer key, ``SeedSequence([master, *key])``.  Graph
``(V, E)`` uses key ``(0, V, E)``; base profile ``k`` on that graph uses
``(1, V, E, k)``.  Results therefore do not depend on job order or on the
number of worker processes.
"""

from __future__ import annotations

import csv
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from statistics import mean
from typing import Iterable, Sequence

import numpy as np

from cdo.core import CdoInstance, Profile, StructuralError
from cdo.domains import Graph, decode_tree, encode_spanning_tree, verify_spanning_tree
from cdo.rules import RuleSpec, rule_rank
from cdo.solver import SolveTimeout, branch_and_bound, encode_rule

DEFAULT_RULES = ("sum:simple", "sum:cc", "egal:simple")
RANK_RULES = ("rank:simple", "rank:cc")
DEFAULT_P = tuple(round(0.1 * k, 1) for k in range(1, 10))
CSV_FIELDS = ("num_nodes", "num_edges", "p", "rule", "seed", "wall_ms", "optimum",
              "outcome_count", "timed_out")


def default_seed() -> int:
    return int(os.environ.get("CDO_SEED", "0"))


def child_seed(master: int, *key: int) -> int:
    state = np.random.SeedSequence([master, *key]).generate_state(2, dtype=np.uint32)
    return int(state[0]) << 32 | int(state[1])


# -- generators -------------------------------------------------------------------

def gen_connected_graph(num_nodes: int, num_edges: int, seed: int) -> Graph:
    """Random connected simple graph on nodes ``1..num_nodes``.

    One node starts out connected; a random connected node is joined to a
    random unconnected one until all nodes are connected, after which the
    remaining edges are drawn uniformly without replacement from the
    absent pairs.  All edge costs are 1.
    """
    max_edges = num_nodes * (num_nodes - 1) // 2
    if num_nodes < 1 or not num_nodes - 1 <= num_edges <= max_edges:
        raise StructuralError(
            f"{num_edges} edges impossible for a connected simple graph on {num_nodes} nodes"
        )
    rng = np.random.default_rng(seed)
    nodes = list(range(1, num_nodes + 1))
    start = nodes[int(rng.integers(num_nodes))]
    connected = [start]
    unconnected = [v for v in nodes if v != start]
    edges = set()
    while unconnected:
        u = connected[int(rng.integers(len(connected)))]
        v = unconnected.pop(int(rng.integers(len(unconnected))))
        connected.append(v)
        edges.add((min(u, v), max(u, v)))
    absent = [(u, v) for u in nodes for v in nodes if u < v and (u, v) not in edges]
    extra = num_edges - len(edges)
    if extra:
        for k in sorted(rng.choice(len(absent), size=extra, replace=False)):
            edges.add(absent[int(k)])
    return Graph(nodes, sorted(edges))


@dataclass(frozen=True)
class BaseProfile:
    """``n x num_items`` matrix of approval propensities in (0, 1]."""

    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=float)
        if e.ndim != 2:
            raise StructuralError("base profile must be a matrix")
        if e.size and not (np.all(e > 0) and np.all(e <= 1)):
            raise StructuralError("base profile entries must lie in (0, 1]")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape


def gen_base_profile(n: int, num_items: int, seed: int) -> BaseProfile:
    rng = np.random.default_rng(seed)
    k = rng.integers(0, 2**53, size=(n, num_items), dtype=np.int64)
    # (k + 1) / 2^53 is exact in binary64 and never 0
    return BaseProfile((k + 1).astype(float) / 2.0**53)


def threshold_profile(bp: BaseProfile, p: float) -> Profile:
    """Voter i approves item e iff bp[i, e] <= p."""
    n, m = bp.shape
    return Profile((bp.entries <= p).astype(int).tolist(), num_items=m)


# -- benchmark ----------------------------------------------------------------------

@dataclass
class BenchConfig:
    node_range: tuple[int, int] = (6, 8)
    voters: int = 100
    profiles_per_graph: int = 10
    p_values: tuple[float, ...] = DEFAULT_P
    rules: tuple[str, ...] = DEFAULT_RULES
    timeout: float = 1200.0
    seed: int = field(default_factory=default_seed)
    workers: int = 1

    def __post_init__(self):
        lo, hi = self.node_range
        if lo < 2 or hi < lo:
            raise StructuralError(f"bad node range {self.node_range}")
        if any(not 0 < p < 1 for p in self.p_values):
            raise StructuralError("p values must lie strictly between 0 and 1")
        if self.timeout <= 0:
            raise StructuralError("timeout must be positive")
        for r in self.rules:
            RuleSpec.parse(r)

    def graph_sizes(self) -> list[tuple[int, int]]:
        lo, hi = self.node_range
        return [(v, e) for v in range(lo, hi + 1) for e in range(v - 1, v * (v - 1) // 2 + 1)]

    def grid_size(self) -> int:
        return len(self.graph_sizes()) * self.profiles_per_graph * len(self.p_values)


@dataclass(frozen=True)
class BenchRecord:
    num_nodes: int
    num_edges: int
    p: float
    rule: str
    seed: int
    wall_ms: float
    optimum: int | None
    outcome_count: int
    timed_out: bool

    def key(self):
        return (self.num_nodes, self.num_edges, self.seed, self.p, self.rule)


def _timed_solve(rule: RuleSpec, instance: CdoInstance, timeout: float):
    """Solve time only; building the model is excluded."""
    if rule.operator == "rank":
        t0 = time.perf_counter()
        res = rule_rank(rule.scoring, instance)
        return (time.perf_counter() - t0) * 1e3, res.optimum, res.outcomes[0].bits
    model = encode_rule(rule.operator, rule.scoring, instance)
    t0 = time.perf_counter()
    sol = branch_and_bound(model, deadline=time.monotonic() + timeout)
    elapsed = (time.perf_counter() - t0) * 1e3
    if sol is None:
        raise StructuralError("spanning-tree instance unexpectedly infeasible")
    return elapsed, sol.value, sol.project(model.items)


def _run_job(args) -> list[BenchRecord]:
    cfg, num_nodes, num_edges, k = args
    graph = gen_connected_graph(num_nodes, num_edges, child_seed(cfg.seed, 0, num_nodes, num_edges))
    agenda, cs = encode_spanning_tree(graph)
    pseed = child_seed(cfg.seed, 1, num_nodes, num_edges, k)
    bp = gen_base_profile(cfg.voters, graph.num_edges, pseed)
    out = []
    for p in cfg.p_values:
        instance = CdoInstance(agenda, threshold_profile(bp, p), cs)
        for text in cfg.rules:
            rule = RuleSpec.parse(text)
            try:
                ms, opt, bits = _timed_solve(rule, instance, cfg.timeout)
            except SolveTimeout:
                out.append(BenchRecord(num_nodes, num_edges, p, str(rule), pseed,
                                       cfg.timeout * 1e3, None, 0, True))
                continue
            if not verify_spanning_tree(decode_tree(bits, graph), graph):
                raise AssertionError(f"{rule} returned a non-tree on graph {graph}")
            out.append(BenchRecord(num_nodes, num_edges, p, str(rule), pseed, ms, opt, 1, False))
    return out


def run_benchmark(config: BenchConfig, progress=None) -> list[BenchRecord]:
    """Run every (graph, base profile, p, rule) combination of the grid.

    Records come back sorted by (|V|, |E|, seed, p, rule) whatever the
    number of workers.  ``progress`` is called with the records of each
    finished (graph, base profile) job.
    """
    jobs = [(config, v, e, k) for v, e in config.graph_sizes()
            for k in range(config.profiles_per_graph)]
    records: list[BenchRecord] = []
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            for batch in pool.map(_run_job, jobs):
                records.extend(batch)
                if progress:
                    progress(batch)
    else:
        for job in jobs:
            batch = _run_job(job)
            records.extend(batch)
            if progress:
                progress(batch)
    records.sort(key=BenchRecord.key)
    return records


def write_csv(records: Iterable[BenchRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_FIELDS)
        for r in records:
            w.writerow([r.num_nodes, r.num_edges, f"{r.p:g}", r.rule, r.seed, f"{r.wall_ms:.3f}",
                        "" if r.optimum is None else r.optimum, r.outcome_count, int(r.timed_out)])


def read_csv(path) -> list[BenchRecord]:
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            out.append(BenchRecord(
                int(row["num_nodes"]), int(row["num_edges"]), float(row["p"]), row["rule"],
                int(row["seed"]), float(row["wall_ms"]),
                None if row["optimum"] == "" else int(row["optimum"]),
                int(row["outcome_count"]), bool(int(row["timed_out"])),
            ))
    return out


def mean_times(records: Sequence[BenchRecord]) -> dict[tuple[int, float, str], float]:
    """Mean wall time (ms) per (|V|, p, rule) over the instances that finished."""
    groups: dict[tuple[int, float, str], list[float]] = {}
    for r in records:
        if not r.timed_out:
            groups.setdefault((r.num_nodes, r.p, r.rule), []).append(r.wall_ms)
    return {k: mean(v) for k, v in sorted(groups.items())}


def write_summary(records: Sequence[BenchRecord], path) -> None:
    counts: dict[tuple, list[int]] = {}
    for r in records:
        c = counts.setdefault((r.num_nodes, r.p, r.rule), [0, 0])
        c[0] += 1
        c[1] += r.timed_out
    means = mean_times(records)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["num_nodes", "p", "rule", "mean_ms", "instances", "timeouts"])
        for key in sorted(counts):
            m = means.get(key)
            w.writerow([key[0], f"{key[1]:g}", key[2], "" if m is None else f"{m:.3f}", *counts[key]])


def plot_mean_times(records: Sequence[BenchRecord], path, p_values=(0.2, 0.8)) -> None:
    """Mean time against |V| per rule, one panel per p, log2 y axis (SVG or PNG by suffix)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    means = mean_times(records)
    rules = sorted({k[2] for k in means})
    sizes = sorted({k[0] for k in means})
    fig, axes = plt.subplots(1, len(p_values), figsize=(4.5 * len(p_values), 3.6), sharey=True,
                             squeeze=False)
    for ax, p in zip(axes[0], p_values):
        for rule in rules:
            pts = sorted((v, t) for (v, pp, r), t in means.items() if r == rule and abs(pp - p) < 1e-9)
            if pts:
                ax.plot([v for v, _ in pts], [t for _, t in pts], marker="o", label=rule)
        ax.set_yscale("log", base=2)
        ax.set_xticks(sizes)
        ax.set_xlabel("|V|")
        ax.set_title(f"p = {p:g}")
        ax.grid(True, which="both", alpha=0.3)
    axes[0][0].set_ylabel("mean time (ms)")
    axes[0][-1].legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(path, metadata={"Date": None} if str(path).endswith(".svg") else None)
    plt.close(fig)
