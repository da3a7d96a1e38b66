"""Collective discrete optimisation: agendas, profiles, constraints and aggregation rules."""

from cdo.core import (
    Agenda,
    CdoError,
    CdoInstance,
    ConstraintSet,
    EnumerationCapError,
    InfeasibleError,
    LinearConstraint,
    Outcome,
    Profile,
    RationalityError,
    StructuralError,
    check_assignment,
    constraints_from_outcomes,
    enumerate_feasible,
    is_extendable,
)
from cdo.rules import RuleResult, RuleSpec, apply_rule, rule_egal, rule_rank, rule_sum
from cdo.scoring import Scoring, profile_min, profile_sum, score
from cdo.solver import SolveTimeout

__all__ = [
    "Agenda", "CdoError", "CdoInstance", "ConstraintSet", "EnumerationCapError",
    "InfeasibleError", "LinearConstraint", "Outcome", "Profile", "RationalityError",
    "StructuralError", "check_assignment", "constraints_from_outcomes", "enumerate_feasible",
    "is_extendable", "RuleResult", "RuleSpec", "apply_rule", "rule_egal", "rule_rank",
    "rule_sum", "Scoring", "profile_min", "profile_sum", "score", "SolveTimeout",
]
