"""Fault localization problem instances: test cases and requirement checks.

An instance bundles the possibly-faulty axioms O, the trusted background B,
and the positive/negative test cases.  A candidate repair is a diagnosis: a
set of O-axiom ids whose removal makes the remaining knowledge satisfy every
requirement (consistency, all positive test cases entailed, no negative test
case entailed).

All types are immutable values; operations return new instances.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable

from .logic import Axiom, Formula, entails, is_consistent, parse_kb, render_kb

Diagnosis = frozenset[int]

POSITIVE = "positive"
NEGATIVE = "negative"


class FPIError(Exception):
    """Structural error in a problem instance or diagnosis argument."""


@dataclass(frozen=True)
class TestCase:
    """A conjunction of axioms the intended KB must (or must not) entail.

    Origin metadata records whether the case was part of the initial instance
    or produced by an expert answer at a given step; it is excluded from
    equality so that re-adding an identical case deduplicates.
    """

    __test__ = False  # keep pytest from collecting this despite the name

    axioms: frozenset[Formula]
    polarity: str  # POSITIVE | NEGATIVE
    origin: str = field(default="initial", compare=False)
    step: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.axioms:
            raise FPIError("test case needs at least one axiom")
        if self.polarity not in (POSITIVE, NEGATIVE):
            raise FPIError(f"unknown polarity {self.polarity!r}")


@dataclass(frozen=True)
class FPI:
    """The tuple (O, B, P, N); O and B are disjoint by formula equality."""

    o: tuple[Axiom, ...]
    b: tuple[Axiom, ...]
    p: tuple[TestCase, ...] = ()
    n: tuple[TestCase, ...] = ()

    def __post_init__(self):
        o_formulas = {ax.formula for ax in self.o}
        if len(o_formulas) < len(self.o):
            raise FPIError("duplicate axiom in O")
        if o_formulas & {ax.formula for ax in self.b}:
            raise FPIError("O and B must be disjoint")

    @classmethod
    def parse(cls, text: str) -> "FPI":
        o, b, positives, negatives = parse_kb(text)
        return cls(
            o=tuple(o),
            b=tuple(b),
            p=tuple(TestCase(frozenset(case), POSITIVE) for case in positives),
            n=tuple(TestCase(frozenset(case), NEGATIVE) for case in negatives),
        )

    def render(self) -> str:
        return render_kb(
            self.o,
            self.b,
            [sorted(tc.axioms, key=lambda f: f.render()) for tc in self.p],
            [sorted(tc.axioms, key=lambda f: f.render()) for tc in self.n],
        )

    @property
    def o_ids(self) -> frozenset[int]:
        return frozenset(ax.id for ax in self.o)

    def axiom(self, axiom_id: int) -> Axiom:
        for ax in self.o + self.b:
            if ax.id == axiom_id:
                return ax
        raise FPIError(f"no axiom with id {axiom_id}")

    def axioms(self, ids: Iterable[int]) -> list[Axiom]:
        """Axioms of O for the given ids, in ascending id order."""
        table = {ax.id: ax for ax in self.o}
        try:
            return [table[i] for i in sorted(ids)]
        except KeyError as exc:
            raise FPIError(f"id {exc.args[0]} is not in O") from None

    def u_p(self) -> frozenset[Formula]:
        """Union of all positive test-case axiom sets."""
        out: set[Formula] = set()
        for tc in self.p:
            out |= tc.axioms
        return frozenset(out)

    def context(self, removed: Diagnosis = frozenset()) -> frozenset[Formula]:
        """(O \\ removed) ∪ B ∪ U_P as a formula set."""
        return (
            frozenset(ax.formula for ax in self.o if ax.id not in removed)
            | frozenset(ax.formula for ax in self.b)
            | self.u_p()
        )


def check_requirements(fpi: FPI, removed: Diagnosis) -> bool:
    """True iff removing the given axioms satisfies every requirement.

    Requirements: the remaining context is consistent, entails every positive
    test case, and entails no negative test case.
    """
    if not removed <= fpi.o_ids:
        raise FPIError("removed axioms must be a subset of O")
    ctx = fpi.context(removed)
    if not is_consistent(ctx):
        return False
    for tc in fpi.n:
        if entails(ctx, tc.axioms):
            return False
    for tc in fpi.p:
        # U_P already sits in the context, so this can only fail if the
        # context is inconsistent -- kept as a guard against misuse.
        if not entails(ctx, tc.axioms):
            return False
    return True


def is_minimal_diagnosis(fpi: FPI, d: Diagnosis) -> bool:
    """d satisfies the requirements and no single-axiom-smaller subset does.

    Checking only the |d|-1 subsets is sound because a requirement violation
    is monotone under adding axioms back.
    """
    if not check_requirements(fpi, d):
        return False
    return all(not check_requirements(fpi, d - {x}) for x in d)


def add_test_case(fpi: FPI, tc: TestCase) -> FPI:
    """Extended copy of fpi; identical cases (axioms + polarity) deduplicate."""
    if tc.polarity == POSITIVE:
        if tc in fpi.p:
            return fpi
        return replace(fpi, p=fpi.p + (tc,))
    if tc in fpi.n:
        return fpi
    return replace(fpi, n=fpi.n + (tc,))
