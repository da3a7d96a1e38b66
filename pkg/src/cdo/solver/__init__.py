"""Exact 0/1 optimisation backend: model encoders, branch and bound, LP export."""

from cdo.solver.bnb import (
    FeasibilityChecker,
    SearchStats,
    Solution,
    SolveTimeout,
    branch_and_bound,
    enumerate_optima,
)
from cdo.solver.lpfile import export_lp, sanitize_names
from cdo.solver.model import (
    IlpModel,
    Var,
    encode_cc,
    encode_egal,
    encode_rule,
    encode_sum,
    feasibility_model,
)

__all__ = [
    "FeasibilityChecker",
    "IlpModel",
    "SearchStats",
    "Solution",
    "SolveTimeout",
    "Var",
    "branch_and_bound",
    "encode_cc",
    "encode_egal",
    "encode_rule",
    "encode_sum",
    "enumerate_optima",
    "export_lp",
    "feasibility_model",
    "sanitize_names",
]
