"""Translations between weighted judgment aggregation (JA) and CDO instances.

A JA instance has issues decided in {-1, +1}, positive integer issue
weights, one view per voter and an explicitly listed output space.  The
brute-force JA rules here (weighted median, ranked agenda) serve as
oracles for the CDO rules on translated instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from cdo.core import (
    Agenda,
    CdoInstance,
    ConstraintSet,
    LinearConstraint,
    Profile,
    StructuralError,
    enumerate_feasible,
    no_good_cut,
)

Sign = int
View = tuple[Sign, ...]


@dataclass(frozen=True)
class JaInstance:
    issues: tuple[str, ...]
    weights: tuple[int, ...]
    views: tuple[View, ...]
    output_space: tuple[View, ...]

    def __init__(self, issues, weights=None, views=(), output_space=()):
        issues = tuple(str(k) for k in issues)
        weights = tuple(weights) if weights is not None else (1,) * len(issues)
        if len(set(issues)) != len(issues):
            raise StructuralError("issue identifiers must be unique")
        if len(weights) != len(issues):
            raise StructuralError("one weight per issue is required")
        if any(isinstance(w, bool) or not isinstance(w, int) or w <= 0 for w in weights):
            raise StructuralError("issue weights must be positive integers")
        views = tuple(self._vec(v, len(issues)) for v in views)
        outputs = tuple(dict.fromkeys(self._vec(x, len(issues)) for x in output_space))
        if not outputs:
            raise StructuralError("the output space must not be empty")
        object.__setattr__(self, "issues", issues)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "views", views)
        object.__setattr__(self, "output_space", outputs)

    @staticmethod
    def _vec(v, k) -> View:
        v = tuple(int(s) for s in v)
        if len(v) != k or any(s not in (-1, 1) for s in v):
            raise StructuralError(f"JA vectors need {k} entries in {{-1, +1}}, got {v}")
        return v


def agreement(ja: JaInstance, x: View) -> int:
    """Total weighted agreement of the profile with output ``x``."""
    return sum(w for view in ja.views for w, a, b in zip(ja.weights, view, x) if a == b)


def median_rule_ja(ja: JaInstance) -> list[View]:
    """All outputs maximising weighted agreement with the views, sorted."""
    scored = [(agreement(ja, x), x) for x in ja.output_space]
    best = max(s for s, _ in scored)
    return sorted(x for s, x in scored if s == best)


def ranked_agenda_ja(ja: JaInstance) -> View:
    """Ranked agenda rule with ties broken by issue index, acceptance first.

    Literals (issue, sign) are taken in decreasing weighted support; each is
    kept when some output agrees with every literal kept so far.
    """
    literals = []
    for k, w in enumerate(ja.weights):
        for sign in (1, -1):
            support = w * sum(1 for view in ja.views if view[k] == sign)
            literals.append((-support, k, -sign))
    literals.sort()
    candidates = list(ja.output_space)
    for _, k, neg_sign in literals:
        sign = -neg_sign
        narrowed = [x for x in candidates if x[k] == sign]
        if narrowed:
            candidates = narrowed
    assert len(candidates) == 1
    return candidates[0]


# -- JA -> CDO: one acceptance and one rejection item per issue -------------------

def ja_item_ids(ja: JaInstance) -> list[str]:
    out = []
    for k in ja.issues:
        out += [f"{k}", f"not_{k}"]
    return out


def ja_to_cdo(ja: JaInstance) -> CdoInstance:
    items = ja_item_ids(ja)
    weights = [w for w in ja.weights for _ in (0, 1)]
    ballots = []
    for view in ja.views:
        ballots.append(tuple(b for s in view for b in ((1, 0) if s == 1 else (0, 1))))
    pos_items = items[0::2]
    rows = [LinearConstraint([(items[2 * k], 1), (items[2 * k + 1], 1)], "=", 1)
            for k in range(len(ja.issues))]
    allowed = {tuple(1 if s == 1 else 0 for s in x) for x in ja.output_space}
    rows += [no_good_cut(v, pos_items) for v in product((0, 1), repeat=len(ja.issues))
             if v not in allowed]
    profile = Profile(ballots, num_items=len(items))
    return CdoInstance(Agenda(items, weights), profile, ConstraintSet(rows))


def cdo_outcome_to_ja(bits: Sequence[int]) -> View:
    """Read a JA output off a translated CDO outcome (acceptance items)."""
    return tuple(1 if bits[2 * k] else -1 for k in range(len(bits) // 2))


# -- CDO -> JA: support issue a^s and acceptance issue a^* per item -----------------

def _support_issue(a: str) -> str:
    return f"{a}^s"


def _accept_issue(a: str) -> str:
    return f"{a}^*"


def _feasible_outputs(instance: CdoInstance) -> list[tuple[int, ...]]:
    outcomes = enumerate_feasible(instance.feasibility, instance.agenda)
    if not outcomes:
        raise StructuralError("the CDO instance has no feasible outcome")
    return [o.bits for o in outcomes]


def _issue_weights(instance: CdoInstance, weighted: bool) -> list[int]:
    if not weighted:
        return [1] * instance.m
    if any(w <= 0 for w in instance.agenda.weights):
        raise StructuralError("weighted translation needs positive item weights")
    return list(instance.agenda.weights)


def cdo_to_ja(instance: CdoInstance, weighted: bool = True) -> JaInstance:
    """Issues ``a^s`` (support) and ``a^*`` (acceptance) per item, forced equal
    in every output; every view accepts ``a^*``.  With ``weighted=False``
    all issues get weight 1."""
    w = _issue_weights(instance, weighted)
    issues, weights = [], []
    for a, wa in zip(instance.agenda.items, w):
        issues += [_support_issue(a), _accept_issue(a)]
        weights += [wa, wa]
    views = [tuple(s for b in ballot for s in ((1 if b else -1), 1)) for ballot in instance.profile]
    outputs = [tuple(s for b in bits for s in ((1, 1) if b else (-1, -1)))
               for bits in _feasible_outputs(instance)]
    return JaInstance(issues, weights, views, outputs)


def cdo_to_ja_ranked(instance: CdoInstance) -> JaInstance:
    """Ranked-agenda translation: one support issue per item and ``n + 1``
    extra voters accepting every issue.

    The extra voters push every acceptance literal (support >= n + 1) above
    every rejection literal (support <= n), so literals are processed in
    the order of the items' approval counts.  Issues are unit-weight.
    """
    n = instance.n
    issues = [_support_issue(a) for a in instance.agenda.items]
    views = [tuple(1 if b else -1 for b in ballot) for ballot in instance.profile]
    views += [tuple([1] * instance.m)] * (n + 1)
    outputs = [tuple(1 if b else -1 for b in bits) for bits in _feasible_outputs(instance)]
    return JaInstance(issues, [1] * instance.m, views, outputs)


def ja_output_to_cdo(x: View, ranked: bool = False) -> tuple[int, ...]:
    """Project a JA output of a translated instance back onto the CDO items."""
    step = 1 if ranked else 2
    return tuple(1 if x[k] == 1 else 0 for k in range(0, len(x), step))
