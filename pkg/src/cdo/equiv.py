"""Randomised falsification of the rule equivalences between CDO and JA.

``lemma1i``: sum(simple) = sum(swap) = median rule, both translation directions.
``lemma1ii``: the same with weights: sum(weight) = sum(w_swap) = weighted median.
``lemma1iii``: rank(simple) = ranked agenda, both translation directions.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from cdo.core import Agenda, CdoInstance, Profile, constraints_from_outcomes
from cdo.rules import rule_rank, rule_sum
from cdo.translate import (
    JaInstance,
    cdo_outcome_to_ja,
    cdo_to_ja,
    cdo_to_ja_ranked,
    ja_output_to_cdo,
    ja_to_cdo,
    median_rule_ja,
    ranked_agenda_ja,
)

CHECKS = ("lemma1i", "lemma1ii", "lemma1iii")


def random_instance(rng: random.Random, max_items=8, max_voters=10, max_feasible=20,
                    max_weight=5) -> CdoInstance:
    """Random instance whose feasible set is an explicit random list of vectors."""
    m = rng.randint(1, max_items)
    n = rng.randint(1, max_voters)
    items = [f"a{k + 1}" for k in range(m)]
    weights = [rng.randint(1, max_weight) for _ in items]
    size = rng.randint(1, min(max_feasible, 2**m))
    feasible = set()
    while len(feasible) < size:
        feasible.add(tuple(rng.randint(0, 1) for _ in items))
    profile = Profile([[rng.randint(0, 1) for _ in items] for _ in range(n)])
    return CdoInstance(Agenda(items, weights), profile, constraints_from_outcomes(feasible, items))


def random_ja(rng: random.Random, max_issues=5, max_voters=7, max_weight=5,
              weighted=True) -> JaInstance:
    k = rng.randint(1, max_issues)
    n = rng.randint(1, max_voters)
    cube = list(itertools.product((-1, 1), repeat=k))
    outputs = rng.sample(cube, rng.randint(1, len(cube)))
    views = [tuple(rng.choice((-1, 1)) for _ in range(k)) for _ in range(n)]
    weights = [rng.randint(1, max_weight) if weighted else 1 for _ in range(k)]
    return JaInstance([f"k{j + 1}" for j in range(k)], weights, views, outputs)


@dataclass
class EquivReport:
    which: str
    trials: int
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _instance_dump(inst: CdoInstance) -> dict:
    from cdo.io import instance_to_dict

    return instance_to_dict(inst)


def _ja_dump(ja: JaInstance) -> dict:
    return {"issues": list(ja.issues), "weights": list(ja.weights),
            "views": [list(v) for v in ja.views], "output_space": [list(x) for x in ja.output_space]}


def _sum_pair(inst, a, b):
    return set(rule_sum(a, inst).bits), set(rule_sum(b, inst).bits)


def check_once(which: str, rng: random.Random) -> dict | None:
    """One random trial; returns a counterexample record or ``None``."""
    if which in ("lemma1i", "lemma1ii"):
        weighted = which == "lemma1ii"
        lin, swp = ("weight", "w_swap") if weighted else ("simple", "swap")
        inst = random_instance(rng)
        got, other = _sum_pair(inst, lin, swp)
        median = {ja_output_to_cdo(x) for x in median_rule_ja(cdo_to_ja(inst, weighted=weighted))}
        if not got == other == median:
            return {"direction": "cdo->ja", "instance": _instance_dump(inst),
                    f"sum_{lin}": sorted(got), f"sum_{swp}": sorted(other), "median": sorted(median)}
        ja = random_ja(rng, weighted=weighted)
        cdo = ja_to_cdo(ja)
        projected = {cdo_outcome_to_ja(b) for b in rule_sum(lin, cdo).bits}
        expected = set(median_rule_ja(ja))
        if projected != expected:
            return {"direction": "ja->cdo", "ja": _ja_dump(ja),
                    f"sum_{lin}": sorted(projected), "median": sorted(expected)}
        return None
    if which == "lemma1iii":
        inst = random_instance(rng)
        got = rule_rank("simple", inst).outcomes[0].bits
        expected = ja_output_to_cdo(ranked_agenda_ja(cdo_to_ja_ranked(inst)), ranked=True)
        if got != expected:
            return {"direction": "cdo->ja", "instance": _instance_dump(inst),
                    "rank_simple": got, "ranked_agenda": expected}
        ja = random_ja(rng, weighted=False)
        got_ja = cdo_outcome_to_ja(rule_rank("simple", ja_to_cdo(ja)).outcomes[0].bits)
        exp_ja = ranked_agenda_ja(ja)
        if got_ja != exp_ja:
            return {"direction": "ja->cdo", "ja": _ja_dump(ja),
                    "rank_simple": got_ja, "ranked_agenda": exp_ja}
        return None
    raise ValueError(f"unknown check {which!r}; expected one of {', '.join(CHECKS)}")


def check_equivalence(which: str, trials: int, seed: int) -> EquivReport:
    rng = random.Random(seed)
    report = EquivReport(which, trials)
    for _ in range(trials):
        bad = check_once(which, rng)
        if bad is not None:
            report.failures.append(bad)
    return report
