"""Simulated experts: axiom labelling, the four answering styles, and the
translation of answers into new test cases.

A simulated expert is seeded with the actual diagnosis; the intended KB is
proxied by the repaired one, so an axiom is labelled positively exactly when
the repair still entails it.  The styles differ only in how much axiom-level
detail they reveal on a negative answer:

* query-based     labels the query as a whole, nothing per axiom
* minimalist      names one non-entailed axiom
* pragmatist      names the first non-entailed axiom plus every axiom
                  verified on the way there
* maximalist      labels every axiom

Axioms are always evaluated in ascending id order, which pins down "the first
non-entailed axiom".
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .fpi import (
    FPI,
    Diagnosis,
    NEGATIVE,
    POSITIVE,
    TestCase,
    add_test_case,
)
from .logic import Axiom, entails


class ExpertType(str, Enum):
    QUERY_BASED = "query-based"
    MINIMALIST = "minimalist"
    PRAGMATIST = "pragmatist"
    MAXIMALIST = "maximalist"

    @classmethod
    def parse(cls, name: str) -> "ExpertType":
        for member in cls:
            if member.value == name.lower():
                return member
        raise ValueError(
            f"unknown expert type {name!r}; expected one of "
            + ", ".join(m.value for m in cls)
        )


@dataclass(frozen=True)
class GroundTruth:
    """The seeded actual diagnosis; must be minimal for the initial instance."""

    actual: Diagnosis


@dataclass(frozen=True)
class Answer:
    """One expert reply.

    ``axioms_inspected`` counts the axioms the expert had to look at (the
    effort measure); ``axioms_classified`` counts the per-axiom labels
    actually reported, which is zero for whole-query answers.  Both are kept
    so either accounting convention can be recomputed from logs.
    """

    label: str  # "y" | "n"
    positives: tuple[Axiom, ...]
    negatives: tuple[Axiom, ...]
    axioms_inspected: int
    axioms_classified: int


def axiom_label(gt: GroundTruth, fpi: FPI, ax: Axiom) -> str:
    """"y" iff the repaired KB entails the axiom."""
    ctx = fpi.context(gt.actual)
    return "y" if entails(ctx, ax.formula) else "n"


def answer_query(
    gt: GroundTruth, fpi: FPI, query: Sequence[Axiom], expert: ExpertType
) -> Answer:
    """Answer per expert style; the query's order is the evaluation order."""
    if not query:
        raise ValueError("query must not be empty")
    labels = []
    first_negative = None
    for i, ax in enumerate(query):
        labels.append(axiom_label(gt, fpi, ax))
        if labels[-1] == "n":
            first_negative = i
            break
    if first_negative is None:
        positives = tuple(query) if expert is not ExpertType.QUERY_BASED else ()
        return Answer(
            label="y",
            positives=positives,
            negatives=(),
            axioms_inspected=len(query),
            axioms_classified=len(positives),
        )

    inspected = first_negative + 1
    witness = query[first_negative]
    if expert is ExpertType.QUERY_BASED:
        return Answer("n", (), (), axioms_inspected=len(query), axioms_classified=0)
    if expert is ExpertType.MINIMALIST:
        return Answer(
            "n", (), (witness,), axioms_inspected=inspected, axioms_classified=1
        )
    if expert is ExpertType.PRAGMATIST:
        positives = tuple(query[:first_negative])
        return Answer(
            "n",
            positives,
            (witness,),
            axioms_inspected=inspected,
            axioms_classified=inspected,
        )
    # maximalist: keep going and label everything
    positives = list(query[:first_negative])
    negatives = [witness]
    for ax in query[first_negative + 1 :]:
        if axiom_label(gt, fpi, ax) == "y":
            positives.append(ax)
        else:
            negatives.append(ax)
    return Answer(
        "n",
        tuple(positives),
        tuple(negatives),
        axioms_inspected=len(query),
        axioms_classified=len(query),
    )


def incorporate_answer(
    fpi: FPI,
    query: Sequence[Axiom],
    answer: Answer,
    expert: ExpertType,
    step: int | None = None,
) -> FPI:
    """Turn an answer into test cases.

    The query-based style records the whole query as one test case; all
    axiom-based styles record one single-axiom test case per reported label,
    which gives the filtering its maximal power and deduplicates cleanly.
    """
    origin = "expert-answer"
    if expert is ExpertType.QUERY_BASED:
        polarity = POSITIVE if answer.label == "y" else NEGATIVE
        tc = TestCase(
            frozenset(ax.formula for ax in query), polarity, origin=origin, step=step
        )
        return add_test_case(fpi, tc)
    out = fpi
    for ax in answer.positives:
        out = add_test_case(
            out, TestCase(frozenset({ax.formula}), POSITIVE, origin=origin, step=step)
        )
    for ax in answer.negatives:
        out = add_test_case(
            out, TestCase(frozenset({ax.formula}), NEGATIVE, origin=origin, step=step)
        )
    return out
