"""Depth-first branch and bound for integer models with small domains.

Every node runs exact integer bound propagation over the constraint rows.
Nodes are bounded by the best objective value attainable over the current
variable boxes; when the model carries general-integer variables (flow
variables, the maximin level) an LP relaxation solved with HiGHS tightens
that bound.  The LP only prunes and guides branching: every incumbent is
checked in exact integer arithmetic.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import linprog

from cdo.core import CdoError, StructuralError
from cdo.solver.model import IlpModel

INT_TOL = 1e-6


class SolveTimeout(CdoError):
    """The search ran past its deadline."""


@dataclass
class Solution:
    value: int
    values: dict[str, int]
    nodes: int = 0

    def project(self, items: Sequence[str]) -> tuple[int, ...]:
        return tuple(self.values[a] for a in items)


@dataclass
class SearchStats:
    nodes: int = 0
    lp_solves: int = 0
    solves: int = 0
    extra: dict = field(default_factory=dict)


class _Search:
    def __init__(self, model: IlpModel, relaxation: str):
        self.model = model
        self.names = list(model.variables)
        self.index = {v: j for j, v in enumerate(self.names)}
        self.lo0 = [model.variables[v].lo for v in self.names]
        self.hi0 = [model.variables[v].hi for v in self.names]
        self.obj = [model.objective.get(v, 0) for v in self.names]
        self.obj_terms = [(j, c) for j, c in enumerate(self.obj) if c]

        self.rows: list[tuple[list[int], list[int], int]] = []
        self.var_rows: list[list[int]] = [[] for _ in self.names]
        for con in model.constraints:
            for terms, rhs in con.as_le_rows():
                r = len(self.rows)
                idxs = [self.index[v] for v, _ in terms]
                self.rows.append((idxs, [c for _, c in terms], rhs))
                for j in idxs:
                    self.var_rows[j].append(r)

        item_idx = [self.index[a] for a in model.items]
        self.is_item = [False] * len(self.names)
        for j in item_idx:
            self.is_item[j] = True
        self.item_order = sorted(item_idx, key=lambda j: (-abs(self.obj[j]), j))
        self.other_order = sorted(
            (j for j in range(len(self.names)) if not self.is_item[j]),
            key=lambda j: (-abs(self.obj[j]), j),
        )

        if relaxation == "auto":
            general = any(not model.variables[v].binary and (self.hi0[j] - self.lo0[j] > 1)
                          for j, v in enumerate(self.names))
            relaxation = "lp" if general else "none"
        if relaxation not in ("lp", "none"):
            raise StructuralError(f"unknown relaxation {relaxation!r}")
        self.use_lp = relaxation == "lp" and bool(self.names)
        if self.use_lp:
            self._build_lp()

    def _build_lp(self) -> None:
        nv = len(self.names)
        ub_rows, ub_rhs, eq_rows, eq_rhs = [], [], [], []
        for con in self.model.constraints:
            row = np.zeros(nv)
            for v, c in con.terms:
                row[self.index[v]] += c
            if con.sense == "=":
                eq_rows.append(row)
                eq_rhs.append(con.rhs)
            elif con.sense == "<=":
                ub_rows.append(row)
                ub_rhs.append(con.rhs)
            else:
                ub_rows.append(-row)
                ub_rhs.append(-con.rhs)
        self.lp_c = -np.asarray(self.obj, dtype=float)
        self.A_ub = np.array(ub_rows) if ub_rows else None
        self.b_ub = np.array(ub_rhs, dtype=float) if ub_rows else None
        self.A_eq = np.array(eq_rows) if eq_rows else None
        self.b_eq = np.array(eq_rhs, dtype=float) if eq_rows else None

    # -- propagation -------------------------------------------------------

    def propagate(self, lo: list[int], hi: list[int], queue) -> bool:
        rows, var_rows = self.rows, self.var_rows
        pending = deque(queue)
        queued = set(pending)
        while pending:
            r = pending.popleft()
            queued.discard(r)
            idxs, coefs, rhs = rows[r]
            minact = 0
            for j, c in zip(idxs, coefs):
                minact += c * lo[j] if c > 0 else c * hi[j]
            slack = rhs - minact
            if slack < 0:
                return False
            for j, c in zip(idxs, coefs):
                if c > 0:
                    nh = lo[j] + slack // c
                    if nh < hi[j]:
                        hi[j] = nh
                    else:
                        continue
                else:
                    nl = hi[j] - slack // (-c)
                    if nl > lo[j]:
                        lo[j] = nl
                    else:
                        continue
                for r2 in var_rows[j]:
                    if r2 != r and r2 not in queued:
                        queued.add(r2)
                        pending.append(r2)
        return True

    def box_bound(self, lo, hi) -> int:
        return sum(c * hi[j] if c > 0 else c * lo[j] for j, c in self.obj_terms)

    def exact_value(self, vals) -> int:
        return sum(c * vals[j] for j, c in self.obj_terms)

    def exact_feasible(self, vals, lo, hi) -> bool:
        if any(not lo[j] <= vals[j] <= hi[j] for j in range(len(vals))):
            return False
        for idxs, coefs, rhs in self.rows:
            if sum(c * vals[j] for j, c in zip(idxs, coefs)) > rhs:
                return False
        return True

    def solve_lp(self, lo, hi):
        bounds = np.column_stack([np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)])
        res = linprog(self.lp_c, A_ub=self.A_ub, b_ub=self.b_ub, A_eq=self.A_eq,
                      b_eq=self.b_eq, bounds=bounds, method="highs")
        return res

    # -- branching -----------------------------------------------------------

    def pick_naive(self, lo, hi) -> int | None:
        for j in self.item_order:
            if lo[j] < hi[j]:
                return j
        for j in self.other_order:
            if lo[j] < hi[j]:
                return j
        return None

    def children_naive(self, j, lo, hi):
        c = self.obj[j]
        a, b = lo[j], hi[j]
        if b - a == 1 or c != 0:
            if c >= 0:
                return [(b, b), (a, b - 1)]
            return [(a, a), (a + 1, b)]
        mid = (a + b) // 2
        return [(a, mid), (mid + 1, b)]

    def pick_lp(self, x, lo, hi) -> int | None:
        best, best_key = None, None
        for j in self.item_order:
            if lo[j] < hi[j]:
                frac = abs(x[j] - round(x[j]))
                if frac > INT_TOL:
                    key = (abs(self.obj[j]), frac)
                    if best_key is None or key > best_key:
                        best, best_key = j, key
        if best is not None:
            return best
        for j in self.other_order:
            if lo[j] < hi[j]:
                frac = abs(x[j] - round(x[j]))
                if frac > INT_TOL:
                    key = (abs(self.obj[j]), frac)
                    if best_key is None or key > best_key:
                        best, best_key = j, key
        return best

    @staticmethod
    def children_lp(j, v, lo, hi):
        f = int(np.floor(v + INT_TOL)) if abs(v - round(v)) <= INT_TOL else int(np.floor(v))
        f = min(max(f, lo[j]), hi[j] - 1)
        down, up = (lo[j], f), (f + 1, hi[j])
        return [up, down] if v - f >= 0.5 else [down, up]

    # -- main loop -----------------------------------------------------------

    def run(self, fixed: Mapping[str, int], target: int | None, deadline: float | None,
            stats: SearchStats | None) -> Solution | None:
        lo, hi = list(self.lo0), list(self.hi0)
        for v, val in fixed.items():
            if v not in self.index:
                raise StructuralError(f"cannot fix unknown variable {v!r}")
            j = self.index[v]
            if not lo[j] <= val <= hi[j]:
                return None
            lo[j] = hi[j] = int(val)

        best_val: int | None = None if target is None else target - 1
        best_vals: list[int] | None = None
        root_bound: float | None = None
        nodes = 0
        stack = [(lo, hi, range(len(self.rows)))]
        while stack:
            lo, hi, queue = stack.pop()
            nodes += 1
            if deadline is not None and (nodes & 15) == 0 and time.monotonic() > deadline:
                raise SolveTimeout(f"deadline passed after {nodes} nodes")
            if not self.propagate(lo, hi, queue):
                continue
            bound = self.box_bound(lo, hi)
            if best_val is not None and bound <= best_val:
                continue
            if all(lo[j] == hi[j] for j in range(len(lo))):
                best_val, best_vals = self.exact_value(lo), list(lo)
                if target is not None or (root_bound is not None and best_val >= root_bound):
                    break
                continue

            x = None
            if self.use_lp:
                if stats is not None:
                    stats.lp_solves += 1
                res = self.solve_lp(lo, hi)
                if res.status == 2:
                    continue
                if res.status == 0:
                    lp_bound = int(np.floor(-res.fun + INT_TOL))
                    bound = min(bound, lp_bound)
                    if best_val is not None and bound <= best_val:
                        continue
                    x = res.x
                    rounded = [int(round(v)) for v in x]
                    if all(abs(v - r) <= INT_TOL for v, r in zip(x, rounded)) and \
                            self.exact_feasible(rounded, lo, hi):
                        val = self.exact_value(rounded)
                        if best_val is None or val > best_val:
                            best_val, best_vals = val, rounded
                        if val >= bound:
                            if target is not None or (root_bound is not None and best_val >= root_bound):
                                break
                            continue
            if root_bound is None:
                root_bound = bound

            j = self.pick_lp(x, lo, hi) if x is not None else None
            if j is not None:
                kids = self.children_lp(j, x[j], lo, hi)
            else:
                j = self.pick_naive(lo, hi)
                kids = self.children_naive(j, lo, hi)
            for a, b in reversed(kids):
                clo, chi = list(lo), list(hi)
                clo[j], chi[j] = a, b
                stack.append((clo, chi, self.var_rows[j]))

        if stats is not None:
            stats.nodes += nodes
            stats.solves += 1
        if best_vals is None:
            return None
        values = dict(zip(self.names, best_vals))
        return Solution(best_val + self.model.offset, values, nodes)


    def run_all(self, target: int, cap: int, deadline, stats) -> list[tuple[int, ...]]:
        """Item projections of all solutions with raw value >= ``target``."""
        items = [self.index[a] for a in self.model.items]
        found: list[tuple[int, ...]] = []
        nodes = 0
        stack = [(list(self.lo0), list(self.hi0), range(len(self.rows)))]
        while stack and len(found) < cap:
            lo, hi, queue = stack.pop()
            nodes += 1
            if deadline is not None and (nodes & 15) == 0 and time.monotonic() > deadline:
                raise SolveTimeout(f"deadline passed after {nodes} nodes")
            if not self.propagate(lo, hi, queue) or self.box_bound(lo, hi) < target:
                continue
            j = next((j for j in self.item_order if lo[j] < hi[j]), None)
            if j is None:
                fixed = {self.names[k]: lo[k] for k in items}
                if self.run(fixed, target, deadline, stats) is not None:
                    found.append(tuple(lo[k] for k in items))
                continue
            if self.use_lp:
                if stats is not None:
                    stats.lp_solves += 1
                res = self.solve_lp(lo, hi)
                if res.status == 2 or (res.status == 0 and -res.fun + INT_TOL < target):
                    continue
            for v in (0, 1):
                clo, chi = list(lo), list(hi)
                clo[j] = chi[j] = v
                stack.append((clo, chi, self.var_rows[j]))
        if stats is not None:
            stats.nodes += nodes
        return found


def branch_and_bound(
    model: IlpModel,
    fixed: Mapping[str, int] | None = None,
    *,
    relaxation: str = "auto",
    target: int | None = None,
    deadline: float | None = None,
    stats: SearchStats | None = None,
) -> Solution | None:
    """Exact maximum of ``model``, or ``None`` when infeasible.

    ``fixed`` pins variables (extendability queries).  With ``target`` the
    search only looks for solutions of value at least ``target`` and stops
    at the first one.  ``deadline`` is a :func:`time.monotonic` timestamp.
    """
    search = _Search(model, relaxation)
    raw_target = None if target is None else target - model.offset
    return search.run(dict(fixed or {}), raw_target, deadline, stats)


class FeasibilityChecker:
    """Repeated extendability queries against one compiled model."""

    def __init__(self, model: IlpModel, relaxation: str = "auto"):
        self.model = model
        self._search = _Search(model, relaxation)

    def __call__(self, fixed: Mapping[str, int]) -> bool:
        return self._search.run(dict(fixed), None, None, None) is not None


def enumerate_optima(
    model: IlpModel,
    cap: int = 1000,
    *,
    relaxation: str = "auto",
    deadline: float | None = None,
    stats: SearchStats | None = None,
) -> tuple[int | None, list[tuple[int, ...]]]:
    """All optimal item projections, sorted.

    A first solve fixes the optimum; a second pass branches on item
    variables only and keeps every leaf whose bound reaches it, checking
    each leaf's auxiliary part with a targeted solve.  Returns
    ``(optimum, witnesses)``, ``(None, [])`` for an infeasible model, and at
    most ``cap`` witnesses.
    """
    search = _Search(model, relaxation)
    first = search.run({}, None, deadline, stats)
    if first is None:
        return None, []
    found = search.run_all(first.value - model.offset, cap, deadline, stats)
    return first.value, sorted(found)
