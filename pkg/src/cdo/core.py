"""Instance data model: agendas, ballots, profiles and linear constraint sets.

Item ``k`` of an agenda always corresponds to position ``k`` of every 0/1
vector (ballots and outcomes).  Constraints are linear over the binary item
variables plus optional auxiliary integer variables with finite bounds; a
0/1 vector is feasible when *some* setting of the auxiliaries satisfies all
constraints.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

DEFAULT_ENUMERATION_CAP = 24

SENSES = ("<=", ">=", "=")

Bits = tuple[int, ...]


class CdoError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(CdoError, ValueError):
    """Malformed input: length mismatches, unknown variables, bad weights."""


class RationalityError(CdoError, ValueError):
    """A ballot in a profile violates the rationality constraints."""


class InfeasibleError(CdoError):
    """The feasibility constraints admit no outcome."""


class EnumerationCapError(CdoError):
    """Brute-force enumeration was asked for more items than the cap allows."""


def as_bits(values: Iterable[int], length: int | None = None) -> Bits:
    bits = tuple(int(v) for v in values)
    if any(b not in (0, 1) for b in bits):
        raise StructuralError(f"vector entries must be 0 or 1, got {bits}")
    if length is not None and len(bits) != length:
        raise StructuralError(f"vector has length {len(bits)}, expected {length}")
    return bits


def _check_int(value, what: str) -> int:
    # bool is an int subclass but never a meaningful weight or coefficient
    if isinstance(value, bool) or not isinstance(value, int):
        raise StructuralError(f"{what} must be an integer, got {value!r}")
    return value


@dataclass(frozen=True)
class Agenda:
    items: tuple[str, ...]
    weights: tuple[int, ...]

    def __init__(self, items: Sequence[str], weights: Sequence[int] | None = None):
        items = tuple(str(a) for a in items)
        if weights is None:
            weights = (1,) * len(items)
        weights = tuple(_check_int(w, "weight") for w in weights)
        if len(set(items)) != len(items):
            raise StructuralError("agenda item identifiers must be unique")
        if len(weights) != len(items):
            raise StructuralError("one weight per agenda item is required")
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "weights", weights)

    @property
    def m(self) -> int:
        return len(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def index(self, item: str) -> int:
        return self.items.index(item)

    def weight_of(self, item: str) -> int:
        return self.weights[self.items.index(item)]


@dataclass(frozen=True)
class Outcome:
    bits: Bits
    score: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "bits", as_bits(self.bits))

    def __len__(self) -> int:
        return len(self.bits)

    def accepted(self, agenda: Agenda) -> list[str]:
        return [a for a, b in zip(agenda.items, self.bits) if b]


@dataclass(frozen=True)
class Profile:
    """A list of approval ballots, all of length ``num_items``.

    An empty profile is allowed when ``num_items`` is given explicitly; the
    egalitarian operator rejects it.
    """

    ballots: tuple[Bits, ...]
    num_items: int

    def __init__(self, ballots: Iterable[Iterable[int]], num_items: int | None = None):
        ballots = tuple(as_bits(b) for b in ballots)
        if num_items is None:
            if not ballots:
                raise StructuralError("an empty profile needs an explicit num_items")
            num_items = len(ballots[0])
        for b in ballots:
            if len(b) != num_items:
                raise StructuralError(
                    f"ballot of length {len(b)} in a profile over {num_items} items"
                )
        object.__setattr__(self, "ballots", ballots)
        object.__setattr__(self, "num_items", num_items)

    @property
    def n(self) -> int:
        return len(self.ballots)

    def __len__(self) -> int:
        return len(self.ballots)

    def __iter__(self) -> Iterator[Bits]:
        return iter(self.ballots)

    def support(self) -> list[int]:
        """Number of approvals per item."""
        return [sum(col) for col in zip(*self.ballots)] if self.ballots else [0] * self.num_items


@dataclass(frozen=True)
class LinearConstraint:
    terms: tuple[tuple[str, int], ...]
    sense: str
    rhs: int

    def __init__(self, terms: Mapping[str, int] | Iterable[tuple[str, int]], sense: str, rhs: int):
        pairs = terms.items() if isinstance(terms, Mapping) else terms
        merged: dict[str, int] = {}
        for var, coef in pairs:
            merged[str(var)] = merged.get(str(var), 0) + _check_int(coef, "coefficient")
        if sense not in SENSES:
            raise StructuralError(f"unknown constraint sense {sense!r}")
        object.__setattr__(self, "terms", tuple((v, c) for v, c in merged.items() if c != 0))
        object.__setattr__(self, "sense", sense)
        object.__setattr__(self, "rhs", _check_int(rhs, "right-hand side"))

    @property
    def variables(self) -> list[str]:
        return [v for v, _ in self.terms]

    def activity(self, values: Mapping[str, int]) -> int:
        return sum(c * values[v] for v, c in self.terms)

    def holds(self, values: Mapping[str, int]) -> bool:
        lhs = self.activity(values)
        if self.sense == "<=":
            return lhs <= self.rhs
        if self.sense == ">=":
            return lhs >= self.rhs
        return lhs == self.rhs

    def as_le_rows(self) -> list[tuple[tuple[tuple[str, int], ...], int]]:
        """Rewrite as one or two ``sum <= rhs`` rows."""
        neg = tuple((v, -c) for v, c in self.terms)
        if self.sense == "<=":
            return [(self.terms, self.rhs)]
        if self.sense == ">=":
            return [(neg, -self.rhs)]
        return [(self.terms, self.rhs), (neg, -self.rhs)]

    def __str__(self) -> str:
        lhs = " + ".join(f"{c}*{v}" for v, c in self.terms) or "0"
        return f"{lhs} {self.sense} {self.rhs}"


@dataclass(frozen=True)
class ConstraintSet:
    constraints: tuple[LinearConstraint, ...] = ()
    aux: Mapping[str, tuple[int, int]] = field(default_factory=dict)

    def __init__(
        self,
        constraints: Iterable[LinearConstraint] = (),
        aux: Mapping[str, tuple[int, int]] | None = None,
    ):
        constraints = tuple(constraints)
        bounds: dict[str, tuple[int, int]] = {}
        for name, (lo, hi) in (aux or {}).items():
            lo, hi = _check_int(lo, "bound"), _check_int(hi, "bound")
            if lo > hi:
                raise StructuralError(f"auxiliary variable {name!r} has bounds {lo} > {hi}")
            bounds[str(name)] = (lo, hi)
        object.__setattr__(self, "constraints", constraints)
        object.__setattr__(self, "aux", bounds)

    def __len__(self) -> int:
        return len(self.constraints)

    def __hash__(self):
        return hash((self.constraints, tuple(sorted(self.aux.items()))))

    def validate(self, items: Sequence[str]) -> None:
        known = set(items)
        clash = known & set(self.aux)
        if clash:
            raise StructuralError(f"auxiliary variables shadow agenda items: {sorted(clash)}")
        known |= set(self.aux)
        for con in self.constraints:
            for v in con.variables:
                if v not in known:
                    raise StructuralError(f"unknown variable {v!r} in constraint {con}")

    def extended(self, constraints: Iterable[LinearConstraint] = (), aux=None) -> "ConstraintSet":
        merged = dict(self.aux)
        merged.update(aux or {})
        return ConstraintSet(self.constraints + tuple(constraints), merged)


@dataclass(frozen=True)
class CdoInstance:
    agenda: Agenda
    profile: Profile
    feasibility: ConstraintSet = ConstraintSet()
    rationality: ConstraintSet = ConstraintSet()

    def __post_init__(self):
        m = self.agenda.m
        if self.profile.num_items != m:
            raise StructuralError(
                f"profile covers {self.profile.num_items} items, agenda has {m}"
            )
        self.feasibility.validate(self.agenda.items)
        self.rationality.validate(self.agenda.items)
        if self.rationality.constraints:
            for i, ballot in enumerate(self.profile.ballots):
                if not check_assignment(ballot, self.rationality, self.agenda):
                    raise RationalityError(f"ballot {i} {ballot} violates the rationality constraints")

    @property
    def m(self) -> int:
        return self.agenda.m

    @property
    def n(self) -> int:
        return self.profile.n

    def with_profile(self, profile: Profile) -> "CdoInstance":
        return CdoInstance(self.agenda, profile, self.feasibility, self.rationality)

    def with_feasibility(self, feasibility: ConstraintSet) -> "CdoInstance":
        return CdoInstance(self.agenda, self.profile, feasibility, self.rationality)


def _items_of(agenda: Agenda | Sequence[str]) -> tuple[str, ...]:
    return agenda.items if isinstance(agenda, Agenda) else tuple(agenda)


def check_assignment(bits: Sequence[int], cs: ConstraintSet, agenda: Agenda | Sequence[str]) -> bool:
    """Whether ``bits`` (one entry per agenda item) satisfies ``cs``."""
    items = _items_of(agenda)
    bits = as_bits(bits, len(items))
    cs.validate(items)
    if not cs.aux:
        values = dict(zip(items, bits))
        return all(con.holds(values) for con in cs.constraints)
    return is_extendable(dict(zip(items, bits)), cs, items)


def is_extendable(partial: Mapping[str, int], cs: ConstraintSet, agenda: Agenda | Sequence[str]) -> bool:
    """Whether the partial 0/1 assignment extends to a full feasible one."""
    from cdo.solver import branch_and_bound, feasibility_model

    items = _items_of(agenda)
    cs.validate(items)
    unknown = set(partial) - set(items)
    if unknown:
        raise StructuralError(f"partial assignment names unknown items {sorted(unknown)}")
    fixed = {a: int(v) for a, v in partial.items()}
    if any(v not in (0, 1) for v in fixed.values()):
        raise StructuralError("partial assignment values must be 0 or 1")
    return branch_and_bound(feasibility_model(cs, items), fixed) is not None


class _RowTracker:
    """Minimum activity of every ``<=`` row as binary items get fixed.

    A row with minimum activity above its right-hand side can never be
    satisfied, so the current partial assignment is dead.
    """

    def __init__(self, cs: ConstraintSet, items: Sequence[str]):
        index = {a: k for k, a in enumerate(items)}
        self.rows: list[tuple[list[tuple[int, int]], int]] = []
        self.by_item: list[list[tuple[int, int]]] = [[] for _ in items]
        self.minact: list[int] = []
        for con in cs.constraints:
            for terms, rhs in con.as_le_rows():
                r = len(self.rows)
                item_terms = []
                base = 0
                for v, c in terms:
                    if v in index:
                        item_terms.append((index[v], c))
                        base += min(0, c)
                        self.by_item[index[v]].append((r, c))
                    else:
                        lo, hi = cs.aux[v]
                        base += min(c * lo, c * hi)
                self.rows.append((item_terms, rhs))
                self.minact.append(base)

    def assign(self, k: int, value: int) -> list[tuple[int, int]]:
        """Fix item ``k``; returns the undo log."""
        undo = []
        for r, c in self.by_item[k]:
            # free binary contributed min(0, c); fixed contributes c * value
            delta = c * value - min(0, c)
            if delta:
                undo.append((r, delta))
                self.minact[r] += delta
        return undo

    def undo(self, log: list[tuple[int, int]]) -> None:
        for r, delta in log:
            self.minact[r] -= delta

    def alive(self, log: list[tuple[int, int]]) -> bool:
        return all(self.minact[r] <= self.rows[r][1] for r, _ in log)

    def all_alive(self) -> bool:
        return all(mi <= rhs for mi, (_, rhs) in zip(self.minact, self.rows))


def enumerate_feasible(
    cs: ConstraintSet,
    agenda: Agenda | Sequence[str] | int,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> list[Outcome]:
    """All feasible 0/1 outcomes, in lexicographic order.

    ``agenda`` may be an item count, in which case items are named
    ``x0, x1, ...``.  Refuses agendas larger than ``cap``; use
    :func:`cdo.solver.branch_and_bound` there.
    """
    if isinstance(agenda, int):
        items: tuple[str, ...] = tuple(f"x{k}" for k in range(agenda))
    else:
        items = _items_of(agenda)
    m = len(items)
    if m > cap:
        raise EnumerationCapError(
            f"{m} items exceed the enumeration cap of {cap}; use the branch-and-bound solver"
        )
    cs.validate(items)
    tracker = _RowTracker(cs, items)
    if not tracker.all_alive():
        return []
    aux_check = None
    if cs.aux:
        from cdo.solver import FeasibilityChecker, feasibility_model

        aux_check = FeasibilityChecker(feasibility_model(cs, items))
    out: list[Outcome] = []
    bits = [0] * m

    def visit(k: int) -> None:
        if k == m:
            if aux_check is None or aux_check(dict(zip(items, bits))):
                out.append(Outcome(tuple(bits)))
            return
        for value in (0, 1):
            log = tracker.assign(k, value)
            if tracker.alive(log):
                bits[k] = value
                visit(k + 1)
            tracker.undo(log)
        bits[k] = 0

    visit(0)
    return out


def constraints_from_outcomes(
    outcomes: Iterable[Sequence[int]], agenda: Agenda | Sequence[str]
) -> ConstraintSet:
    """A constraint set whose feasible set is exactly ``outcomes``.

    Every 0/1 vector outside the set is cut off by its own no-good row, so
    this is only sensible for small agendas.
    """
    items = _items_of(agenda)
    keep = {as_bits(o, len(items)) for o in outcomes}
    cuts = [
        no_good_cut(vec, items)
        for vec in itertools.product((0, 1), repeat=len(items))
        if vec not in keep
    ]
    return ConstraintSet(cuts)


def no_good_cut(bits: Sequence[int], items: Sequence[str]) -> LinearConstraint:
    """Row excluding exactly the 0/1 vector ``bits`` over ``items``.

    sum_{bits=1} (1 - x) + sum_{bits=0} x >= 1, with constants moved right.
    """
    terms = [(a, -1 if b else 1) for a, b in zip(items, bits)]
    return LinearConstraint(terms, ">=", 1 - sum(bits))
