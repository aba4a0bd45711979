"""Minimal conflicts, minimal-diagnosis enumeration, and diagnosis weights.

Conflicts are computed with a QuickXplain-style divide and conquer; diagnoses
are enumerated with a breadth-first hitting-set tree over the conflicts, which
yields them in minimum-cardinality-first order.  Conflict candidate order is
ascending axiom id throughout, so results are deterministic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from collections import deque
from typing import Iterable, Mapping, Sequence

from .fpi import FPI, Diagnosis, check_requirements
from .logic import entails, is_consistent

Conflict = frozenset[int]


class DiagnosisError(Exception):
    pass


class NoDiagnosisError(DiagnosisError):
    """B together with the positive test cases already violates a requirement,
    so no removal of O-axioms can help."""


def _violates(fpi: FPI, kept_ids: frozenset[int]) -> bool:
    """Does keeping exactly these O-axioms violate some requirement?

    Positive test cases live inside the context and therefore cannot fail on
    their own; only consistency and negative entailments are checked.
    """
    ctx = fpi.context(fpi.o_ids - kept_ids)
    if not is_consistent(ctx):
        return True
    return any(entails(ctx, tc.axioms) for tc in fpi.n)


def find_minimal_conflict(
    fpi: FPI, candidates: Sequence[int]
) -> Conflict | None:
    """Subset-minimal violating subset of the candidates, or None.

    None means the candidates together with B and the positive test cases
    satisfy all requirements.  An empty conflict means the background alone
    violates them.
    """
    candidate_ids = frozenset(candidates)
    if not candidate_ids <= fpi.o_ids:
        raise DiagnosisError("candidates must be a subset of O")
    if not _violates(fpi, candidate_ids):
        return None
    if _violates(fpi, frozenset()):
        return frozenset()
    return frozenset(_quickxplain(fpi, [], list(candidates), has_delta=False))


def _quickxplain(
    fpi: FPI, base: list[int], candidates: list[int], has_delta: bool
) -> list[int]:
    if has_delta and _violates(fpi, frozenset(base)):
        return []
    if len(candidates) == 1:
        return list(candidates)
    mid = len(candidates) // 2
    left, right = candidates[:mid], candidates[mid:]
    delta2 = _quickxplain(fpi, base + left, right, has_delta=bool(left))
    delta1 = _quickxplain(fpi, base + delta2, left, has_delta=bool(delta2))
    return delta1 + delta2


def enumerate_minimal_diagnoses(fpi: FPI, limit: int) -> list[Diagnosis]:
    """Up to `limit` minimal diagnoses, smallest cardinality first.

    Reiter-style hitting-set tree with breadth-first expansion, conflict
    reuse, and pruning of supersets of already-closed diagnoses.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    if _violates(fpi, frozenset()):
        raise NoDiagnosisError(
            "background and positive test cases alone violate requirements"
        )
    all_ids = sorted(fpi.o_ids)
    conflicts: list[Conflict] = []
    diagnoses: list[Diagnosis] = []
    queue: deque[Diagnosis] = deque([frozenset()])
    seen: set[Diagnosis] = {frozenset()}
    while queue and len(diagnoses) < limit:
        removed = queue.popleft()
        if any(d <= removed for d in diagnoses):
            continue
        conflict = next((c for c in conflicts if not c & removed), None)
        if conflict is None:
            conflict = find_minimal_conflict(
                fpi, [i for i in all_ids if i not in removed]
            )
            if conflict is None:
                diagnoses.append(removed)
                continue
            conflicts.append(conflict)
        for ax in sorted(conflict):
            child = removed | {ax}
            if child not in seen:
                seen.add(child)
                queue.append(child)
    return diagnoses


def filter_diagnoses(fpi: FPI, diagnoses: Iterable[Diagnosis]) -> list[Diagnosis]:
    """The input diagnoses that still satisfy all requirements of fpi."""
    return [d for d in diagnoses if check_requirements(fpi, d)]


@dataclass(frozen=True)
class DiagnosisDistribution:
    """Normalized positive weights over a set of diagnoses."""

    probabilities: Mapping[Diagnosis, float]

    def __post_init__(self):
        if not self.probabilities:
            raise DiagnosisError("distribution over zero diagnoses")
        total = sum(self.probabilities.values())
        if abs(total - 1.0) > 1e-9:
            raise DiagnosisError(f"weights sum to {total}, expected 1")
        if any(w <= 0 for w in self.probabilities.values()):
            raise DiagnosisError("all weights must be positive")

    def p(self, d: Diagnosis) -> float:
        return self.probabilities[d]

    def diagnoses(self) -> tuple[Diagnosis, ...]:
        return tuple(self.probabilities)

    def mass(self, ds: Iterable[Diagnosis]) -> float:
        return sum(self.probabilities[d] for d in ds)


def _normalized(pairs: Sequence[tuple[Diagnosis, float]]) -> DiagnosisDistribution:
    total = sum(w for _, w in pairs)
    return DiagnosisDistribution({d: w / total for d, w in pairs})


def assign_probabilities(
    diagnoses: Sequence[Diagnosis], seed: int
) -> DiagnosisDistribution:
    """Independent uniform (0,1) weights per diagnosis, then normalized."""
    if not diagnoses:
        raise DiagnosisError("need at least one diagnosis")
    rng = random.Random(seed)
    weights = []
    for d in diagnoses:
        u = rng.random()
        while u == 0.0:
            u = rng.random()
        weights.append((d, u))
    return _normalized(weights)


def refresh_distribution(
    dist: DiagnosisDistribution, diagnoses: Sequence[Diagnosis]
) -> DiagnosisDistribution:
    """Re-weight after filtering/replenishing the leading diagnoses.

    Survivors keep their previous weights; diagnoses not seen before receive
    the mean survivor weight (uniform when nothing survived).  The result is
    renormalized over exactly the given diagnoses.
    """
    if not diagnoses:
        raise DiagnosisError("need at least one diagnosis")
    old = dist.probabilities
    survivor_weights = [old[d] for d in diagnoses if d in old]
    newcomer_weight = (
        sum(survivor_weights) / len(survivor_weights) if survivor_weights else 1.0
    )
    return _normalized([(d, old.get(d, newcomer_weight)) for d in diagnoses])
