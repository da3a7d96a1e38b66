"""Brute-force reference implementations, written without the library's solver."""

from itertools import combinations, product


def cube(m):
    return list(product((0, 1), repeat=m))


def argmax_set(candidates, value):
    scored = [(value(c), c) for c in candidates]
    best = max(s for s, _ in scored)
    return best, sorted(c for s, c in scored if s == best)


# -- set scorings, from their definitions ---------------------------------------

def oracle_score(kind, ballot, outcome, weights):
    both = [k for k in range(len(ballot)) if ballot[k] and outcome[k]]
    missed = [k for k in range(len(ballot)) if ballot[k] and not outcome[k]]
    if kind == "simple":
        return len(both)
    if kind == "weight":
        return sum(weights[k] for k in both)
    if kind == "swap":
        return -len(missed)
    if kind == "w_swap":
        return -sum(weights[k] for k in missed)
    if kind == "cc":
        return 1 if both else 0
    raise ValueError(kind)


def oracle_rule(op, kind, ballots, weights, feasible):
    def value(x):
        scores = [oracle_score(kind, b, x, weights) for b in ballots]
        return sum(scores) if op == "sum" else min(scores)

    return argmax_set(feasible, value)


# -- participatory budgeting ----------------------------------------------------

def pb_subsets(costs, limit):
    return [x for x in cube(len(costs)) if sum(c for c, b in zip(costs, x) if b) <= limit]


def max_cardinality_pb(ballots, costs, limit):
    """Budget-feasible bundles with the most (voter, approved project) pairs."""
    return argmax_set(pb_subsets(costs, limit),
                      lambda x: sum(b[k] & x[k] for b in ballots for k in range(len(x))))


def chamberlin_courant_pb(ballots, costs, limit):
    """Budget-feasible bundles covering the most voters."""
    return argmax_set(pb_subsets(costs, limit),
                      lambda x: sum(any(b[k] and x[k] for k in range(len(x))) for b in ballots))


def greedy_pb(ballots, costs, limit, satisfaction):
    """Greedy PB: repeatedly take the project with the largest marginal
    satisfaction gain (first on ties); keep it if it fits, drop it otherwise."""
    m = len(costs)
    chosen, spent, left = set(), 0, list(range(m))
    covered = [False] * len(ballots)
    while left:
        def gain(p):
            if satisfaction == "cardinality":
                return sum(b[p] for b in ballots)
            return sum(1 for i, b in enumerate(ballots) if b[p] and not covered[i])

        best = max(left, key=lambda p: (gain(p), -p))
        left.remove(best)
        if spent + costs[best] <= limit:
            chosen.add(best)
            spent += costs[best]
            for i, b in enumerate(ballots):
                covered[i] = covered[i] or bool(b[best])
    return tuple(1 if k in chosen else 0 for k in range(m))


# -- spanning trees ---------------------------------------------------------------

def _find(parent, a):
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


def is_spanning_tree(nodes, edges):
    if len(edges) != len(nodes) - 1:
        return False
    parent = {v: v for v in nodes}
    for u, v in edges:
        ru, rv = _find(parent, u), _find(parent, v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def spanning_trees(nodes, edges):
    """Every spanning tree as a 0/1 vector over ``edges``, sorted."""
    out = []
    for chosen in combinations(range(len(edges)), len(nodes) - 1):
        if is_spanning_tree(nodes, [edges[k] for k in chosen]):
            out.append(tuple(1 if k in chosen else 0 for k in range(len(edges))))
    return sorted(out)


def maximin_approval_trees(ballots, nodes, edges):
    """Spanning trees maximising the smallest number of approved tree edges."""
    return argmax_set(spanning_trees(nodes, edges),
                      lambda t: min(sum(b[k] & t[k] for k in range(len(t))) for b in ballots))


def max_approval_trees(ballots, nodes, edges):
    return argmax_set(spanning_trees(nodes, edges),
                      lambda t: sum(b[k] & t[k] for b in ballots for k in range(len(t))))


def kruskal_by_support(ballots, nodes, edges):
    """Edges by decreasing approval count (lowest index first on ties), kept
    when they close no cycle."""
    support = [sum(b[k] for b in ballots) for k in range(len(edges))]
    parent = {v: v for v in nodes}
    x = [0] * len(edges)
    for k in sorted(range(len(edges)), key=lambda k: (-support[k], k)):
        u, v = edges[k]
        ru, rv = _find(parent, u), _find(parent, v)
        if ru != rv:
            parent[ru] = rv
            x[k] = 1
    return tuple(x)
