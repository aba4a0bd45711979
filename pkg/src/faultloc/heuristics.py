"""Query-selection measures scoring candidate q-partitions.

Stage 1 of query selection ranks q-partitions by one of seven measures; the
formulas below follow the classical one-step-lookahead treatment, with the
answer probability of a partition derived from the diagnosis weights.  Stage 2
then minimizes effort per query, measured as the number of axioms in it.

Scores are only comparable within one measure.  A partition counts as a goal
when its normalized gap to the measure's optimum is at most the search's
epsilon.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum

from .diagnosis import DiagnosisDistribution
from .qpartition import QPartition

MINIMIZE = "minimize"
MAXIMIZE = "maximize"

DEFAULT_CAUTIOUSNESS = 0.3


class HeuristicId(str, Enum):
    ENT = "ENT"
    SPL = "SPL"
    RIO = "RIO"
    RND = "RND"
    BME = "BME"
    KL = "KL"
    EMCB = "EMCb"

    @classmethod
    def parse(cls, name: str) -> "HeuristicId":
        for member in cls:
            if member.value.lower() == name.lower():
                return member
        raise ValueError(
            f"unknown heuristic {name!r}; expected one of "
            + ", ".join(m.value for m in cls)
        )


@dataclass(frozen=True)
class Score:
    """A measure value plus what it takes to compare and goal-test it.

    ``span`` scales the distance to ``optimum`` into the normalized gap used
    by the goal test; ``tiebreak`` is a secondary key, smaller is better.
    """

    value: float
    direction: str
    optimum: float
    span: float = 1.0
    tiebreak: float = 0.0

    def gap(self) -> float:
        raw = (
            self.value - self.optimum
            if self.direction == MINIMIZE
            else self.optimum - self.value
        )
        return max(raw, 0.0) / self.span

    def better_than(self, other: "Score") -> bool:
        if self.value != other.value:
            if self.direction == MINIMIZE:
                return self.value < other.value
            return self.value > other.value
        return self.tiebreak < other.tiebreak

    def sort_key(self) -> tuple[float, float]:
        primary = self.value if self.direction == MINIMIZE else -self.value
        return (primary, self.tiebreak)


def answer_probabilities(
    p: QPartition, dist: DiagnosisDistribution
) -> tuple[float, float]:
    """(p_yes, p_no) for the partition's query under the diagnosis weights.

    Undecided diagnoses contribute half their mass to each answer.
    """
    p_yes = dist.mass(p.d_plus) + 0.5 * dist.mass(p.d_zero)
    return (p_yes, 1.0 - p_yes)


def _xlog2(x: float) -> float:
    return x * math.log2(x) if x > 0.0 else 0.0


def _entropy_score(p: QPartition, dist: DiagnosisDistribution) -> float:
    p_yes, p_no = answer_probabilities(p, dist)
    p_zero = dist.mass(p.d_zero)
    return _xlog2(p_yes) + _xlog2(p_no) + p_zero + 1.0


def score(
    h: HeuristicId,
    p: QPartition,
    dist: DiagnosisDistribution,
    rng: random.Random | None = None,
    cautiousness: float = DEFAULT_CAUTIOUSNESS,
) -> Score:
    """Score one candidate partition under the given measure.

    Deterministic except for RND, which consumes one draw from the caller's
    seeded generator per candidate.
    """
    n = sum(p.sizes())
    if h is HeuristicId.ENT:
        return Score(_entropy_score(p, dist), MINIMIZE, optimum=0.0)

    if h is HeuristicId.SPL:
        value = abs(len(p.d_plus) - len(p.d_minus)) + len(p.d_zero)
        return Score(
            float(value), MINIMIZE, optimum=float(n % 2), span=float(max(n, 1))
        )

    if h is HeuristicId.RIO:
        # feasible candidates are those keeping both sides at least the
        # cautiousness fraction of the diagnoses; infeasible ones rank by
        # how balanced they are, always behind every feasible one
        required = math.ceil(cautiousness * n)
        smaller = min(len(p.d_plus), len(p.d_minus))
        ent = _entropy_score(p, dist)
        if smaller >= required:
            return Score(ent, MINIMIZE, optimum=0.0)
        deficit = required - smaller
        return Score(2.0 + deficit + ent * 0.5, MINIMIZE, optimum=0.0)

    if h is HeuristicId.RND:
        if rng is None:
            raise ValueError("RND scoring needs a seeded generator")
        draw = rng.random()
        # random selection has no quality notion: every candidate is a goal,
        # so the search stops at the (randomly) best first step
        return Score(draw, MINIMIZE, optimum=draw)

    if h is HeuristicId.BME:
        p_yes, p_no = answer_probabilities(p, dist)
        if p_yes > 0.5:
            value = float(len(p.d_minus))
        elif p_no > 0.5:
            value = float(len(p.d_plus))
        else:
            value = 0.0
        return Score(
            value,
            MAXIMIZE,
            optimum=float(max(n - 1, 1)),
            span=float(max(n - 1, 1)),
            tiebreak=_entropy_score(p, dist),
        )

    if h is HeuristicId.KL:
        p_yes, p_no = answer_probabilities(p, dist)
        value = 0.0
        for p_answer, predictors in ((p_yes, p.d_plus), (p_no, p.d_minus)):
            if p_answer <= 0.0:
                continue
            for d in predictors:
                q = dist.p(d)
                value += p_answer * (q / p_answer) * math.log2((q / p_answer) / q)
            for d in p.d_zero:
                q = dist.p(d) / 2.0
                value += p_answer * (q / p_answer) * math.log2(
                    (q / p_answer) / dist.p(d)
                )
        return Score(value, MAXIMIZE, optimum=1.0)

    if h is HeuristicId.EMCB:
        p_yes, p_no = answer_probabilities(p, dist)
        value = p_yes * len(p.d_minus) + p_no * len(p.d_plus)
        return Score(
            value,
            MAXIMIZE,
            optimum=float(max(n - 1, 1)),
            span=float(max(n - 1, 1)),
        )

    raise ValueError(f"unknown heuristic {h!r}")


def query_effort(query_axiom_ids: frozenset[int]) -> int:
    """Stage-2 measure: the number of axioms the expert must look at."""
    return len(query_axiom_ids)
