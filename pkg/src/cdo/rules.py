"""CDO rules: an operator (sum, egal, rank) paired with a set scoring."""

from __future__ import annotations

from dataclasses import dataclass

from cdo.core import (
    DEFAULT_ENUMERATION_CAP,
    CdoInstance,
    InfeasibleError,
    Outcome,
    StructuralError,
    enumerate_feasible,
    is_extendable,
)
from cdo.scoring import Scoring, profile_min, profile_sum
from cdo.solver import encode_rule, enumerate_optima, branch_and_bound

OPERATORS = ("sum", "egal", "rank")
DEFAULT_WINNER_CAP = 1000


@dataclass(frozen=True)
class RuleSpec:
    operator: str
    scoring: Scoring

    def __post_init__(self):
        if self.operator not in OPERATORS:
            raise StructuralError(f"unknown operator {self.operator!r}; expected sum, egal or rank")
        object.__setattr__(self, "scoring", Scoring.parse(self.scoring))

    @classmethod
    def parse(cls, text: str) -> "RuleSpec":
        """Parse ``operator:scoring``, e.g. ``sum:w-swap``."""
        op, sep, sc = text.partition(":")
        if not sep:
            raise StructuralError(f"rule must look like operator:scoring, got {text!r}")
        return cls(op.strip().lower(), Scoring.parse(sc))

    def __str__(self) -> str:
        return f"{self.operator}:{self.scoring.cli_name}"


@dataclass(frozen=True)
class RuleResult:
    rule: RuleSpec
    outcomes: tuple[Outcome, ...]
    optimum: int
    trace: tuple[tuple[str, bool], ...] | None = None

    @property
    def bits(self) -> list[tuple[int, ...]]:
        return [o.bits for o in self.outcomes]


def _objective(operator: str, scoring: Scoring, instance: CdoInstance, bits) -> int:
    w = instance.agenda.weights
    if operator == "sum":
        return profile_sum(scoring, instance.profile, bits, w)
    return profile_min(scoring, instance.profile, bits, w)


def _use_enumeration(instance: CdoInstance, method: str, cap: int) -> bool:
    if method == "enumerate":
        return True
    if method == "bnb":
        return False
    if method != "auto":
        raise StructuralError(f"unknown method {method!r}")
    return instance.m <= cap and not instance.feasibility.aux


def _optimise(operator, scoring, instance, mode, method, winner_cap, enum_cap, deadline):
    scoring = Scoring.parse(scoring)
    if mode not in ("all", "one"):
        raise StructuralError(f"mode must be 'all' or 'one', got {mode!r}")
    if operator == "egal" and instance.n == 0:
        raise StructuralError("the egalitarian operator needs at least one voter")
    spec = RuleSpec(operator, scoring)
    if _use_enumeration(instance, method, enum_cap):
        feasible = enumerate_feasible(instance.feasibility, instance.agenda, cap=enum_cap)
        if not feasible:
            raise InfeasibleError("no outcome satisfies the feasibility constraints")
        scored = [(_objective(operator, scoring, instance, o.bits), o.bits) for o in feasible]
        best = max(s for s, _ in scored)
        winners = [b for s, b in scored if s == best]
        if mode == "one":
            winners = winners[:1]
        return RuleResult(spec, tuple(Outcome(b, best) for b in winners[:winner_cap]), best)

    model = encode_rule(operator, scoring, instance)
    if mode == "one":
        sol = branch_and_bound(model, deadline=deadline)
        if sol is None:
            raise InfeasibleError("no outcome satisfies the feasibility constraints")
        return RuleResult(spec, (Outcome(sol.project(model.items), sol.value),), sol.value)
    optimum, witnesses = enumerate_optima(model, cap=winner_cap, deadline=deadline)
    if optimum is None:
        raise InfeasibleError("no outcome satisfies the feasibility constraints")
    return RuleResult(spec, tuple(Outcome(b, optimum) for b in witnesses), optimum)


def rule_sum(scoring, instance: CdoInstance, mode: str = "all", *, method: str = "auto",
             winner_cap: int = DEFAULT_WINNER_CAP, enum_cap: int = DEFAULT_ENUMERATION_CAP,
             deadline: float | None = None) -> RuleResult:
    """Feasible outcomes maximising the sum of the voters' scores.

    ``mode="all"`` returns every maximiser (sorted, at most ``winner_cap``);
    ``mode="one"`` a single one.  ``method="auto"`` enumerates the feasible
    set when the agenda fits under ``enum_cap`` and the constraints have no
    auxiliary variables, and runs branch and bound otherwise.
    """
    return _optimise("sum", scoring, instance, mode, method, winner_cap, enum_cap, deadline)


def rule_egal(scoring, instance: CdoInstance, mode: str = "all", *, method: str = "auto",
              winner_cap: int = DEFAULT_WINNER_CAP, enum_cap: int = DEFAULT_ENUMERATION_CAP,
              deadline: float | None = None) -> RuleResult:
    """Feasible outcomes maximising the score of the least satisfied voter."""
    return _optimise("egal", scoring, instance, mode, method, winner_cap, enum_cap, deadline)


def rule_rank(scoring, instance: CdoInstance) -> RuleResult:
    """Greedy ranked rule.

    Items are considered one at a time, always the unconsidered item whose
    acceptance gives the highest total score (lowest agenda index on ties).
    It is accepted when the decisions taken so far plus its acceptance still
    extend to a feasible outcome.
    """
    scoring = Scoring.parse(scoring)
    agenda, cs = instance.agenda, instance.feasibility
    if not is_extendable({}, cs, agenda):
        raise InfeasibleError("no outcome satisfies the feasibility constraints")
    x = [0] * agenda.m
    decided: dict[str, int] = {}
    trace = []
    remaining = list(range(agenda.m))
    while remaining:
        best_k, best_score = None, None
        for k in remaining:
            x[k] = 1
            s = profile_sum(scoring, instance.profile, x, agenda.weights)
            x[k] = 0
            if best_score is None or s > best_score:
                best_k, best_score = k, s
        item = agenda.items[best_k]
        ok = is_extendable({**decided, item: 1}, cs, agenda)
        if ok:
            x[best_k] = 1
        decided[item] = x[best_k]
        trace.append((item, ok))
        remaining.remove(best_k)
    final = tuple(x)
    total = profile_sum(scoring, instance.profile, final, agenda.weights)
    return RuleResult(RuleSpec("rank", scoring), (Outcome(final, total),), total, tuple(trace))


def apply_rule(rule: RuleSpec | str, instance: CdoInstance, mode: str = "all", **kwargs) -> RuleResult:
    rule = RuleSpec.parse(rule) if isinstance(rule, str) else rule
    if rule.operator == "rank":
        return rule_rank(rule.scoring, instance)
    fn = rule_sum if rule.operator == "sum" else rule_egal
    return fn(rule.scoring, instance, mode, **kwargs)
