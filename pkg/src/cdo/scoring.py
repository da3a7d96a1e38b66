"""Set scorings: one voter's satisfaction with a candidate outcome."""

from __future__ import annotations

from enum import Enum
from typing import Sequence

from cdo.core import Outcome, Profile, StructuralError


class Scoring(str, Enum):
    SIMPLE = "simple"
    WEIGHT = "weight"
    SWAP = "swap"
    W_SWAP = "w_swap"
    CC = "cc"

    @classmethod
    def parse(cls, name: "str | Scoring") -> "Scoring":
        if isinstance(name, Scoring):
            return name
        key = str(name).strip().lower().replace("-", "_")
        try:
            return cls(key)
        except ValueError:
            raise StructuralError(
                f"unknown scoring {name!r}; expected one of simple, weight, swap, w-swap, cc"
            ) from None

    @property
    def cli_name(self) -> str:
        return self.value.replace("_", "-")

    @property
    def weighted(self) -> bool:
        return self in (Scoring.WEIGHT, Scoring.W_SWAP)

    @property
    def linear(self) -> bool:
        return self is not Scoring.CC


def _bits(x) -> Sequence[int]:
    return x.bits if isinstance(x, Outcome) else x


def score(kind, ballot, outcome, weights: Sequence[int] | None = None) -> int:
    """Satisfaction of the voter with ``ballot`` if ``outcome`` is chosen.

    ``weights`` is only required by the weighted scorings (weight, w_swap).
    """
    kind = Scoring.parse(kind)
    b, c = _bits(ballot), _bits(outcome)
    if len(b) != len(c):
        raise StructuralError(f"ballot has {len(b)} entries, outcome has {len(c)}")
    if weights is not None and len(weights) != len(b):
        raise StructuralError(f"{len(weights)} weights for {len(b)} items")
    if kind.weighted and weights is None:
        raise StructuralError(f"{kind.cli_name} scoring needs the weight vector")
    if kind is Scoring.SIMPLE:
        return sum(ci * bi for ci, bi in zip(c, b))
    if kind is Scoring.WEIGHT:
        return sum(ci * bi * w for ci, bi, w in zip(c, b, weights))
    if kind is Scoring.SWAP:
        return -sum((1 - ci) * bi for ci, bi in zip(c, b))
    if kind is Scoring.W_SWAP:
        return -sum(w * (1 - ci) * bi for ci, bi, w in zip(c, b, weights))
    return 1 if any(ci and bi for ci, bi in zip(c, b)) else 0


def profile_sum(kind, profile: Profile, outcome, weights=None) -> int:
    return sum(score(kind, b, outcome, weights) for b in profile.ballots)


def profile_min(kind, profile: Profile, outcome, weights=None) -> int:
    if not profile.ballots:
        raise StructuralError("the minimum over an empty profile is undefined")
    return min(score(kind, b, outcome, weights) for b in profile.ballots)
