import itertools
import random

import pytest

from faultloc.diagnosis import (
    DiagnosisDistribution,
    DiagnosisError,
    NoDiagnosisError,
    assign_probabilities,
    enumerate_minimal_diagnoses,
    filter_diagnoses,
    find_minimal_conflict,
    refresh_distribution,
)
from faultloc.fpi import FPI, NEGATIVE, POSITIVE, TestCase, add_test_case, check_requirements
from faultloc.logic import Atom, Axiom, Not
from test_fpi import random_fpi


def brute_force_minimal_diagnoses(fpi):
    """Exhaustive subset enumeration, smallest cardinality first."""
    ids = sorted(fpi.o_ids)
    valid = []
    for k in range(len(ids) + 1):
        for combo in itertools.combinations(ids, k):
            d = frozenset(combo)
            if any(prev <= d for prev in valid):
                continue
            if check_requirements(fpi, d):
                valid.append(d)
    return valid


class TestMinimalConflict:
    def test_running_example_full_chain(self, running_example):
        conflict = find_minimal_conflict(running_example, sorted(running_example.o_ids))
        assert conflict == {1, 2, 3}
        # subset-minimality by enumeration: keeping any proper subset is fine
        for k in range(len(conflict)):
            for sub in itertools.combinations(conflict, k):
                removed = running_example.o_ids - frozenset(sub)
                assert check_requirements(running_example, removed)

    def test_consistent_singleton_none(self):
        fpi = FPI(o=(Axiom(1, Atom("a")),), b=())
        assert find_minimal_conflict(fpi, [1]) is None

    def test_direct_contradiction(self):
        fpi = FPI(
            o=(Axiom(1, Atom("a")), Axiom(2, Not(Atom("a"))), Axiom(3, Atom("b"))),
            b=(),
        )
        assert find_minimal_conflict(fpi, [1, 2, 3]) == {1, 2}

    def test_minimality_on_random_instances(self):
        rng = random.Random(57)
        checked = 0
        while checked < 40:
            fpi = random_fpi(rng, n_axioms=5)
            if fpi is None:
                continue
            conflict = find_minimal_conflict(fpi, sorted(fpi.o_ids))
            if conflict is None:
                assert check_requirements(fpi, frozenset()) or fpi.p
                checked += 1
                continue
            # every proper subset of the conflict must be violation-free
            for x in conflict:
                kept = conflict - {x}
                removed = fpi.o_ids - kept
                assert check_requirements(fpi, removed), (fpi, conflict, x)
            checked += 1


class TestEnumerate:
    def test_running_example_all(self, running_example):
        ds = enumerate_minimal_diagnoses(running_example, 10)
        assert ds == [frozenset({1}), frozenset({2}), frozenset({3})]

    def test_truncation(self, running_example):
        ds = enumerate_minimal_diagnoses(running_example, 2)
        assert ds == [frozenset({1}), frozenset({2})]

    def test_no_violation_gives_empty_diagnosis(self):
        fpi = FPI.parse("o: a -> b\nb: a")
        assert enumerate_minimal_diagnoses(fpi, 10) == [frozenset()]

    def test_inconsistent_background_is_an_error(self):
        fpi = FPI(
            o=(Axiom(1, Atom("x")),),
            b=(Axiom(2, Atom("a")), Axiom(3, Not(Atom("a")))),
        )
        with pytest.raises(NoDiagnosisError):
            enumerate_minimal_diagnoses(fpi, 10)

    def test_limit_validation(self, running_example):
        with pytest.raises(ValueError):
            enumerate_minimal_diagnoses(running_example, 0)

    def test_matches_brute_force(self):
        rng = random.Random(61)
        checked = 0
        while checked < 40:
            fpi = random_fpi(rng, n_axioms=5)
            if fpi is None:
                continue
            try:
                got = enumerate_minimal_diagnoses(fpi, 1 << 8)
            except NoDiagnosisError:
                assert not brute_force_minimal_diagnoses(fpi)
                checked += 1
                continue
            expected = brute_force_minimal_diagnoses(fpi)
            assert sorted(got, key=sorted) == sorted(expected, key=sorted)
            # cardinalities are non-decreasing
            sizes = [len(d) for d in got]
            assert sizes == sorted(sizes)
            checked += 1


class TestFilter:
    def test_negative_answer_keeps_only_predictors(self, running_example):
        ds = enumerate_minimal_diagnoses(running_example, 10)
        ax3 = running_example.o[2]
        fpi2 = add_test_case(
            running_example, TestCase(frozenset({ax3.formula}), NEGATIVE)
        )
        assert filter_diagnoses(fpi2, ds) == [frozenset({3})]

    def test_positive_answer_removes_entailment_breaker(self, running_example):
        ds = enumerate_minimal_diagnoses(running_example, 10)
        ax1 = running_example.o[0]
        fpi2 = add_test_case(
            running_example, TestCase(frozenset({ax1.formula}), POSITIVE)
        )
        assert filter_diagnoses(fpi2, ds) == [frozenset({2}), frozenset({3})]

    def test_no_new_test_case_is_identity(self, running_example):
        ds = enumerate_minimal_diagnoses(running_example, 10)
        assert filter_diagnoses(running_example, ds) == ds


class TestDistribution:
    def test_single_diagnosis_weight_one(self):
        dist = assign_probabilities([frozenset({1})], seed=5)
        assert dist.p(frozenset({1})) == pytest.approx(1.0)

    def test_deterministic_per_seed(self):
        ds = [frozenset({1}), frozenset({2}), frozenset({3})]
        assert assign_probabilities(ds, 9).probabilities == assign_probabilities(
            ds, 9
        ).probabilities
        assert assign_probabilities(ds, 9).probabilities != assign_probabilities(
            ds, 10
        ).probabilities

    def test_normalized_and_positive(self):
        ds = [frozenset({i}) for i in range(12)]
        dist = assign_probabilities(ds, 3)
        assert sum(dist.probabilities.values()) == pytest.approx(1.0)
        assert all(w > 0 for w in dist.probabilities.values())

    def test_validation(self):
        with pytest.raises(DiagnosisError):
            DiagnosisDistribution({frozenset({1}): 0.5})
        with pytest.raises(DiagnosisError):
            DiagnosisDistribution({frozenset({1}): 1.5, frozenset({2}): -0.5})

    def test_refresh_keeps_survivor_ratios(self):
        d1, d2, d3, d4 = (frozenset({i}) for i in range(1, 5))
        dist = DiagnosisDistribution({d1: 0.5, d2: 0.3, d3: 0.2})
        out = refresh_distribution(dist, [d1, d2, d4])
        # d4 gets the survivor mean 0.4; total 0.5+0.3+0.4
        assert out.p(d1) == pytest.approx(0.5 / 1.2)
        assert out.p(d2) == pytest.approx(0.3 / 1.2)
        assert out.p(d4) == pytest.approx(0.4 / 1.2)

    def test_refresh_with_no_survivors_is_uniform(self):
        d1, d2, d3 = (frozenset({i}) for i in range(1, 4))
        dist = DiagnosisDistribution({d1: 1.0})
        out = refresh_distribution(dist, [d2, d3])
        assert out.p(d2) == pytest.approx(0.5)
        assert out.p(d3) == pytest.approx(0.5)
