"""ILP models over binary item variables and bounded integer auxiliaries."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from cdo.core import CdoInstance, ConstraintSet, LinearConstraint, StructuralError
from cdo.scoring import Scoring


@dataclass(frozen=True)
class Var:
    lo: int
    hi: int
    binary: bool = False

    @classmethod
    def bin(cls) -> "Var":
        return cls(0, 1, True)


@dataclass(frozen=True)
class IlpModel:
    """Maximise ``objective + offset`` subject to ``constraints``.

    ``items`` names the variables that stand for agenda items, in agenda
    order; solutions are projected onto them and no-good cuts range over
    them only.  ``offset`` carries the constant part of the objective that
    the swap scorings subtract, so reported optima match the scorings'
    literal values.
    """

    variables: Mapping[str, Var]
    objective: Mapping[str, int]
    constraints: tuple[LinearConstraint, ...]
    items: tuple[str, ...]
    offset: int = 0
    name: str = "cdo"

    def __post_init__(self):
        object.__setattr__(self, "variables", dict(self.variables))
        object.__setattr__(self, "objective", {v: c for v, c in self.objective.items() if c})
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "items", tuple(self.items))
        for name, var in self.variables.items():
            if var.lo > var.hi:
                raise StructuralError(f"variable {name!r} has empty bounds [{var.lo}, {var.hi}]")
        for v, c in self.objective.items():
            if v not in self.variables:
                raise StructuralError(f"objective uses undeclared variable {v!r}")
            if isinstance(c, bool) or not isinstance(c, int):
                raise StructuralError(f"objective coefficient of {v!r} is not an integer")
        for con in self.constraints:
            for v in con.variables:
                if v not in self.variables:
                    raise StructuralError(f"constraint {con} uses undeclared variable {v!r}")
        for a in self.items:
            if not self.variables.get(a, Var(0, 0)).binary:
                raise StructuralError(f"item variable {a!r} must be declared binary")

    def with_constraints(self, extra: Sequence[LinearConstraint]) -> "IlpModel":
        return IlpModel(
            self.variables, self.objective, self.constraints + tuple(extra),
            self.items, self.offset, self.name,
        )

    def objective_value(self, values: Mapping[str, int]) -> int:
        return self.offset + sum(c * values[v] for v, c in self.objective.items())

    def is_feasible(self, values: Mapping[str, int]) -> bool:
        for name, var in self.variables.items():
            if not var.lo <= values[name] <= var.hi:
                return False
        return all(con.holds(values) for con in self.constraints)


def _fresh(base: str, taken) -> str:
    name, k = base, 0
    while name in taken:
        k += 1
        name = f"{base}_{k}"
    return name


def feasibility_model(cs: ConstraintSet, items: Sequence[str], name: str = "feasibility") -> IlpModel:
    variables = {a: Var.bin() for a in items}
    for v, (lo, hi) in cs.aux.items():
        variables[v] = Var(lo, hi)
    return IlpModel(variables, {}, cs.constraints, tuple(items), 0, name)


def _base(instance: CdoInstance, name: str) -> tuple[dict[str, Var], list[LinearConstraint]]:
    variables = {a: Var.bin() for a in instance.agenda.items}
    for v, (lo, hi) in instance.feasibility.aux.items():
        variables[v] = Var(lo, hi)
    return variables, list(instance.feasibility.constraints)


def _item_coefficients(scoring: Scoring, instance: CdoInstance) -> list[int]:
    scale = instance.agenda.weights if scoring.weighted else (1,) * instance.m
    support = instance.profile.support()
    return [s * w for s, w in zip(support, scale)]


def _linear_voter_terms(scoring: Scoring, ballot, weights) -> tuple[list[tuple[int, int]], int]:
    """Voter score as ``sum coef_k * x_k + const`` (linear scorings only)."""
    scale = weights if scoring.weighted else (1,) * len(ballot)
    terms = [(k, b * w) for k, (b, w) in enumerate(zip(ballot, scale)) if b * w]
    const = -sum(c for _, c in terms) if scoring in (Scoring.SWAP, Scoring.W_SWAP) else 0
    return terms, const


def encode_sum(scoring, instance: CdoInstance) -> IlpModel:
    """Utilitarian objective for a linear scoring.

    swap and w_swap share the coefficients of simple and weight; their
    constant (minus the profile's total approval mass) goes to ``offset``.
    """
    scoring = Scoring.parse(scoring)
    if not scoring.linear:
        raise StructuralError("cc is not linear in the outcome; use encode_cc")
    variables, constraints = _base(instance, "sum")
    coefs = _item_coefficients(scoring, instance)
    offset = 0
    if scoring in (Scoring.SWAP, Scoring.W_SWAP):
        offset = -sum(coefs)
    objective = dict(zip(instance.agenda.items, coefs))
    return IlpModel(variables, objective, constraints, instance.agenda.items, offset,
                    f"sum_{scoring.value}")


def _score_bound(instance: CdoInstance) -> int:
    return instance.m * max(1, sum(abs(w) for w in instance.agenda.weights))


def encode_egal(scoring, instance: CdoInstance) -> IlpModel:
    """Maximin objective: max t subject to score_i(x) >= t for every voter."""
    scoring = Scoring.parse(scoring)
    if not scoring.linear:
        raise StructuralError("cc is not linear in the outcome; use encode_cc")
    if instance.n == 0:
        raise StructuralError("the egalitarian operator needs at least one voter")
    variables, constraints = _base(instance, "egal")
    t = _fresh("t", variables)
    bound = _score_bound(instance)
    variables[t] = Var(-bound, bound)
    items = instance.agenda.items
    for ballot in instance.profile.ballots:
        terms, const = _linear_voter_terms(scoring, ballot, instance.agenda.weights)
        # sum coef*x + const >= t
        row = [(items[k], c) for k, c in terms] + [(t, -1)]
        constraints.append(LinearConstraint(row, ">=", -const))
    return IlpModel(variables, {t: 1}, constraints, items, 0, f"egal_{scoring.value}")


def encode_cc(operator: str, instance: CdoInstance) -> IlpModel:
    """Chamberlin-Courant objective with one coverage indicator per voter."""
    if operator not in ("sum", "egal"):
        raise StructuralError(f"cc is encoded for the sum and egal operators, not {operator!r}")
    if operator == "egal" and instance.n == 0:
        raise StructuralError("the egalitarian operator needs at least one voter")
    variables, constraints = _base(instance, "cc")
    items = instance.agenda.items
    zs = []
    for i, ballot in enumerate(instance.profile.ballots):
        z = _fresh(f"z_{i + 1}", variables)
        variables[z] = Var.bin()
        zs.append(z)
        # z_i <= sum of the voter's approved items (z_i <= 0 for an empty ballot)
        row = [(z, 1)] + [(a, -1) for a, b in zip(items, ballot) if b]
        constraints.append(LinearConstraint(row, "<=", 0))
    if operator == "sum":
        return IlpModel(variables, {z: 1 for z in zs}, constraints, items, 0, "sum_cc")
    t = _fresh("t", variables)
    variables[t] = Var(0, 1)
    for z in zs:
        constraints.append(LinearConstraint([(z, 1), (t, -1)], ">=", 0))
    return IlpModel(variables, {t: 1}, constraints, items, 0, "egal_cc")


def encode_rule(operator: str, scoring, instance: CdoInstance) -> IlpModel:
    scoring = Scoring.parse(scoring)
    if scoring is Scoring.CC:
        return encode_cc(operator, instance)
    if operator == "sum":
        return encode_sum(scoring, instance)
    if operator == "egal":
        return encode_egal(scoring, instance)
    raise StructuralError(f"no ILP encoding for operator {operator!r}")
