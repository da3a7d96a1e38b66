import pytest
from hypothesis import given, settings, strategies as st

from cdo import (
    Agenda,
    CdoInstance,
    ConstraintSet,
    InfeasibleError,
    LinearConstraint,
    Profile,
    RuleSpec,
    StructuralError,
    apply_rule,
    rule_egal,
    rule_rank,
    rule_sum,
)
from cdo.domains import encode_budget
from conftest import QUAD_FEASIBLE
from oracles import greedy_pb, oracle_rule
from randinst import random_instance

SCORINGS = ("simple", "weight", "swap", "w_swap", "cc")


def test_sum_simple(quad):
    res = rule_sum("simple", quad)
    assert set(res.bits) == {(1, 0, 0, 1), (0, 1, 1, 0)} and res.optimum == 5


def test_sum_cc(quad):
    res = rule_sum("cc", quad)
    assert res.bits == [(1, 0, 0, 1)] and res.optimum == 4


def test_egal(quad):
    res = rule_egal("simple", quad)
    assert res.bits == [(1, 0, 0, 1)] and res.optimum == 1
    res = rule_egal("swap", quad)
    assert set(res.bits) == set(QUAD_FEASIBLE) and res.optimum == -2


def test_rank_trace(quad):
    res = rule_rank("simple", quad)
    assert res.bits == [(1, 0, 0, 1)]
    assert res.trace == (("a4", True), ("a3", False), ("a2", False), ("a1", True))


def test_bnb_path_agrees_on_example(quad):
    for sc in SCORINGS:
        for fn in (rule_sum, rule_egal):
            a = fn(sc, quad, method="enumerate")
            b = fn(sc, quad, method="bnb")
            assert (a.optimum, a.bits) == (b.optimum, b.bits)


def test_mode_one_returns_an_optimum(quad):
    res = rule_sum("simple", quad, "one")
    assert len(res.outcomes) == 1 and res.bits[0] in {(1, 0, 0, 1), (0, 1, 1, 0)}


def test_winner_cap():
    inst = CdoInstance(Agenda("abc"), Profile([(0, 0, 0)]))
    assert len(rule_sum("simple", inst).outcomes) == 8
    assert len(rule_sum("simple", inst, winner_cap=3).outcomes) == 3
    assert len(rule_sum("simple", inst, method="bnb", winner_cap=3).outcomes) == 3


def test_infeasible_and_bad_arguments(quad):
    bad = ConstraintSet([LinearConstraint({"a": 1}, ">=", 2)])
    inst = CdoInstance(Agenda("a"), Profile([(1,)]), bad)
    for call in (lambda: rule_sum("simple", inst), lambda: rule_egal("simple", inst),
                 lambda: rule_rank("simple", inst), lambda: rule_sum("simple", inst, method="bnb")):
        with pytest.raises(InfeasibleError):
            call()
    with pytest.raises(StructuralError):
        rule_sum("simple", quad, "some")
    with pytest.raises(StructuralError):
        rule_egal("simple", quad.with_profile(Profile([], num_items=4)))
    with pytest.raises(StructuralError):
        RuleSpec.parse("median:simple")
    with pytest.raises(StructuralError):
        RuleSpec.parse("sum")


def test_rule_spec_round_trip():
    spec = RuleSpec.parse("egal:w-swap")
    assert str(spec) == "egal:w-swap" and RuleSpec.parse(str(spec)) == spec


def test_apply_rule_dispatch(quad):
    assert apply_rule("rank:simple", quad).trace is not None
    assert apply_rule("sum:simple", quad).optimum == 5


def test_rank_cc_on_budget():
    agenda = Agenda(["p1", "p2", "p3"], [2, 2, 3])
    profile = Profile([(1, 1, 0), (1, 1, 0), (0, 0, 1)])
    inst = CdoInstance(agenda, profile, encode_budget(agenda, 5))
    # p1 covers two voters, then p3 covers the third; p2 adds nothing and no longer fits
    assert rule_rank("cc", inst).bits == [(1, 0, 1)]
    assert rule_rank("simple", inst).bits == [(1, 1, 0)]


# -- properties --------------------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_rules_match_brute_force(seed):
    inst, feasible = random_instance(seed, max_items=6)
    w = inst.agenda.weights
    for sc in SCORINGS:
        for op, fn in (("sum", rule_sum), ("egal", rule_egal)):
            opt, winners = oracle_rule(op, sc, inst.profile.ballots, w, feasible)
            res = fn(sc, inst)
            assert res.optimum == opt and res.bits == winners


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_rank_output_is_feasible_and_deterministic(seed):
    inst, feasible = random_instance(seed, max_items=6)
    for sc in ("simple", "cc", "weight"):
        a, b = rule_rank(sc, inst), rule_rank(sc, inst)
        assert a == b and a.bits[0] in feasible
        assert [t[0] for t in a.trace] and sorted(t[0] for t in a.trace) == sorted(inst.agenda.items)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_rank_matches_greedy_pb(seed):
    inst, _ = random_instance(seed, max_items=7, signed_weights=False)
    limit = sum(inst.agenda.weights) // 2
    pb = inst.with_feasibility(encode_budget(inst.agenda, limit))
    ballots, costs = inst.profile.ballots, inst.agenda.weights
    assert rule_rank("simple", pb).bits[0] == greedy_pb(ballots, costs, limit, "cardinality")
    assert rule_rank("cc", pb).bits[0] == greedy_pb(ballots, costs, limit, "cc")


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_sum_simple_monotone_in_support(seed):
    """Adding an approval for a winning item keeps it winning under sum(simple)."""
    inst, _ = random_instance(seed, max_items=6)
    res = rule_sum("simple", inst)
    winner = res.bits[0]
    k = next((k for k, b in enumerate(winner) if b), None)
    if k is None:
        return
    extra = tuple(1 if j == k else 0 for j in range(inst.m))
    more = inst.with_profile(Profile(inst.profile.ballots + (extra,)))
    res2 = rule_sum("simple", more)
    assert winner in res2.bits and res2.optimum == res.optimum + 1
