"""Encoders for participatory budgeting, collective spanning trees and scheduling."""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from cdo.core import (
    Agenda,
    ConstraintSet,
    LinearConstraint,
    Outcome,
    StructuralError,
    as_bits,
)


# -- participatory budgeting ----------------------------------------------------

@dataclass(frozen=True)
class BudgetSpec:
    limit: int

    def __post_init__(self):
        if isinstance(self.limit, bool) or not isinstance(self.limit, int) or self.limit < 0:
            raise StructuralError(f"budget limit must be a non-negative integer, got {self.limit!r}")


def encode_budget(agenda: Agenda, spec: BudgetSpec | int,
                  extras: Iterable[LinearConstraint] = ()) -> ConstraintSet:
    """Knapsack row ``sum w_a x_a <= limit`` plus any user-supplied rows (quotas etc.)."""
    if isinstance(spec, int):
        spec = BudgetSpec(spec)
    row = LinearConstraint(list(zip(agenda.items, agenda.weights)), "<=", spec.limit)
    cs = ConstraintSet([row, *extras])
    cs.validate(agenda.items)
    return cs


# -- collective spanning trees ------------------------------------------------

@dataclass(frozen=True)
class Graph:
    """Undirected simple graph.  Each edge is stored with the endpoint that
    comes first in ``nodes`` on the left, and edges are kept sorted by
    endpoint positions; this is the agenda order of the tree encoding."""

    nodes: tuple
    edges: tuple[tuple, ...]
    costs: tuple[int, ...]

    def __init__(self, nodes: Sequence[Hashable], edges: Sequence[tuple], costs: Sequence[int] | None = None):
        nodes = tuple(nodes)
        if len(set(nodes)) != len(nodes):
            raise StructuralError("graph nodes must be unique")
        pos = {v: k for k, v in enumerate(nodes)}
        costs = tuple(costs) if costs is not None else (1,) * len(edges)
        if len(costs) != len(edges):
            raise StructuralError("one cost per edge is required")
        keyed = {}
        for (u, v), c in zip(edges, costs):
            if u not in pos or v not in pos:
                raise StructuralError(f"edge ({u}, {v}) uses an unknown node")
            if u == v:
                raise StructuralError(f"self-loop on node {u}")
            key = (u, v) if pos[u] < pos[v] else (v, u)
            if key in keyed:
                raise StructuralError(f"duplicate edge {key}")
            if isinstance(c, bool) or not isinstance(c, int):
                raise StructuralError(f"edge cost must be an integer, got {c!r}")
            keyed[key] = c
        order = sorted(keyed, key=lambda e: (pos[e[0]], pos[e[1]]))
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", tuple(order))
        object.__setattr__(self, "costs", tuple(keyed[e] for e in order))

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def is_connected(self) -> bool:
        return _connected(self.nodes, self.edges)


def _find(parent, v):
    while parent[v] != v:
        parent[v] = parent[parent[v]]
        v = parent[v]
    return v


def _connected(nodes, edges) -> bool:
    if not nodes:
        return True
    adj = {v: [] for v in nodes}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {nodes[0]}
    stack = [nodes[0]]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == len(nodes)


def _edge_label(graph: Graph) -> str:
    return "" if all(len(str(v)) == 1 for v in graph.nodes) else "_"


def edge_item_ids(graph: Graph) -> list[str]:
    sep = _edge_label(graph)
    return [f"a_{u}{sep}{v}" for u, v in graph.edges]


def encode_spanning_tree(graph: Graph) -> tuple[Agenda, ConstraintSet]:
    """Single-commodity flow model.

    The first declared node is the root and ships one unit of flow to every
    other node.  Flow variables ``y_u_v`` / ``y_v_u`` are integers in
    ``[0, |V|-1]`` and may only be positive on selected edges.
    """
    n = graph.num_nodes
    if not graph.is_connected():
        warnings.warn("graph is disconnected: the spanning-tree feasible set is empty", stacklevel=2)
    items = edge_item_ids(graph)
    agenda = Agenda(items, graph.costs)
    if n == 0:
        return agenda, ConstraintSet()
    root = graph.nodes[0]
    cap = n - 1
    flow = {}
    for u, v in graph.edges:
        flow[(u, v)] = f"y_{u}_{v}"
        flow[(v, u)] = f"y_{v}_{u}"
    aux = {name: (0, cap) for name in flow.values()}

    rows = []
    for j in graph.nodes:
        terms = []
        for (u, v), y in flow.items():
            if v == j:
                terms.append((y, 1))
            elif u == j:
                terms.append((y, -1))
        rows.append(LinearConstraint(terms, "=", 1 - n if j == root else 1))
    for (u, v), a in zip(graph.edges, items):
        rows.append(LinearConstraint([(flow[(u, v)], 1), (a, -cap)], "<=", 0))
        rows.append(LinearConstraint([(flow[(v, u)], 1), (a, -cap)], "<=", 0))
    rows.append(LinearConstraint([(a, 1) for a in items], "=", n - 1))
    for (u, v), y in flow.items():
        if v == root:
            rows.append(LinearConstraint([(y, 1)], "=", 0))
    return agenda, ConstraintSet(rows, aux)


def decode_tree(outcome, graph: Graph) -> list[tuple]:
    bits = outcome.bits if isinstance(outcome, Outcome) else as_bits(outcome, graph.num_edges)
    if len(bits) != graph.num_edges:
        raise StructuralError(f"outcome has {len(bits)} entries for {graph.num_edges} edges")
    return [e for e, b in zip(graph.edges, bits) if b]


def verify_spanning_tree(edges: Iterable[tuple], graph: Graph) -> bool:
    """Direct check: |V|-1 edges of the graph, no cycle, every node reached."""
    edges = list(edges)
    known = set(graph.edges) | {(v, u) for u, v in graph.edges}
    if any(e not in known for e in edges):
        return False
    if len(edges) != graph.num_nodes - 1:
        return False
    parent = {v: v for v in graph.nodes}
    for u, v in edges:
        ru, rv = _find(parent, u), _find(parent, v)
        if ru == rv:
            return False
        parent[ru] = rv
    return _connected(graph.nodes, edges)


# -- collective scheduling ------------------------------------------------------

@dataclass(frozen=True)
class ScheduleSpec:
    jobs: tuple[str, ...]
    durations: tuple[int, ...]

    def __init__(self, jobs: Sequence[str], durations: Sequence[int]):
        jobs = tuple(str(j) for j in jobs)
        durations = tuple(durations)
        if len(set(jobs)) != len(jobs):
            raise StructuralError("job identifiers must be unique")
        if len(durations) != len(jobs):
            raise StructuralError("one duration per job is required")
        for t in durations:
            if isinstance(t, bool) or not isinstance(t, int) or t <= 0:
                raise StructuralError(f"durations must be positive integers, got {t!r}")
        object.__setattr__(self, "jobs", jobs)
        object.__setattr__(self, "durations", durations)

    @property
    def m(self) -> int:
        return len(self.jobs)


def first_item(job: str) -> str:
    return f"0<{job}"


def before_item(x: str, y: str) -> str:
    return f"{x}<{y}"


def schedule_items(spec: ScheduleSpec) -> list[str]:
    """Agenda order: every "x runs first" item, then "x before y" for
    ordered pairs in lexicographic order of job positions."""
    items = [first_item(x) for x in spec.jobs]
    items += [before_item(x, y) for x, y in itertools.permutations(spec.jobs, 2)]
    return items


def encode_schedule(spec: ScheduleSpec) -> tuple[Agenda, ConstraintSet]:
    jobs, t = spec.jobs, dict(zip(spec.jobs, spec.durations))
    items = schedule_items(spec)
    weights = [t[x] for x in jobs] + [t[y] for x, y in itertools.permutations(jobs, 2)]
    agenda = Agenda(items, weights)
    rows = []
    for x, y in itertools.combinations(jobs, 2):
        rows.append(LinearConstraint([(before_item(x, y), 1), (before_item(y, x), 1)], "=", 1))
    for x, y, z in itertools.permutations(jobs, 3):
        rows.append(LinearConstraint(
            [(before_item(x, y), 1), (before_item(y, z), 1), (before_item(x, z), -1)], "<=", 1))
    rows.append(LinearConstraint([(first_item(x), 1) for x in jobs], "=", 1))
    # the first-job marker may only sit on a job that precedes every other job
    for x, y in itertools.permutations(jobs, 2):
        rows.append(LinearConstraint([(first_item(x), 1), (before_item(x, y), -1)], "<=", 0))
    return agenda, ConstraintSet(rows)


def decode_schedule(outcome, spec: ScheduleSpec) -> list[str]:
    items = schedule_items(spec)
    bits = outcome.bits if isinstance(outcome, Outcome) else as_bits(outcome, len(items))
    if len(bits) != len(items):
        raise StructuralError(f"outcome has {len(bits)} entries for {len(items)} scheduling items")
    x = dict(zip(items, bits))
    wins = {j: sum(x[before_item(j, k)] for k in spec.jobs if k != j) for j in spec.jobs}
    order = sorted(spec.jobs, key=lambda j: (-wins[j], spec.jobs.index(j)))
    for a, b in itertools.combinations(order, 2):
        if x[before_item(a, b)] != 1 or x[before_item(b, a)] != 0:
            raise StructuralError(f"outcome is not a linear order: {a} vs {b} inconsistent")
    firsts = [j for j in spec.jobs if x[first_item(j)]]
    if firsts != order[:1]:
        raise StructuralError(f"first-job markers {firsts} disagree with the order {order}")
    return order


def ballot_from_partial_order(spec: ScheduleSpec, precedences: Iterable[tuple[str, str]] = (),
                              first: Iterable[str] = ()) -> tuple[int, ...]:
    """Approval ballot approving exactly the given precedences and first-job claims.

    Only asymmetry is validated; partial orders need not be transitively closed.
    """
    items = schedule_items(spec)
    pos = {a: k for k, a in enumerate(items)}
    bits = [0] * len(items)
    pairs = set()
    for x, y in precedences:
        x, y = str(x), str(y)
        if x not in spec.jobs or y not in spec.jobs:
            raise StructuralError(f"unknown job in precedence ({x}, {y})")
        if x == y:
            raise StructuralError(f"job {x} cannot precede itself")
        if (y, x) in pairs:
            raise StructuralError(f"contradictory precedences {x}<{y} and {y}<{x}")
        pairs.add((x, y))
        bits[pos[before_item(x, y)]] = 1
    for j in first:
        j = str(j)
        if j not in spec.jobs:
            raise StructuralError(f"unknown job {j!r}")
        bits[pos[first_item(j)]] = 1
    return tuple(bits)
