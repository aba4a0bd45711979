"""Q-partitions, traits, the axioms-traits matrix, and successor functions.

A q-partition splits the known diagnoses into those that predict a positive
answer to a query (``d_plus``), those that predict a negative answer
(``d_minus``), and the undecided rest (``d_zero``, always empty for the
partitions produced here).  The trait of a d_minus diagnosis is what it keeps
beyond everything in d_plus; queries for a fixed partition are exactly the
hitting sets of its traits, and single-axiom queries are the axioms common to
all traits.

Both successor functions operate purely on axiom-id sets, so diagnoses are
plain ``frozenset[int]`` values throughout.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .fpi import Diagnosis


class QPartitionError(Exception):
    pass


@dataclass(frozen=True)
class QPartition:
    d_plus: tuple[Diagnosis, ...]
    d_minus: tuple[Diagnosis, ...]
    d_zero: tuple[Diagnosis, ...] = ()

    def ambient(self) -> tuple[Diagnosis, ...]:
        return self.d_plus + self.d_minus + self.d_zero

    def sizes(self) -> tuple[int, int, int]:
        return (len(self.d_plus), len(self.d_minus), len(self.d_zero))

    def is_proper(self) -> bool:
        """Both answer predictions are represented, so a query can exist."""
        return bool(self.d_plus) and bool(self.d_minus)

    def key(self) -> frozenset[Diagnosis]:
        """Structural identity: with d_zero empty, d_plus determines d_minus."""
        return frozenset(self.d_plus)


@dataclass(frozen=True)
class ATM:
    """0/1 matrix of trait membership: rows = axioms, columns = d_minus.

    Row order is ascending axiom id; column order follows the partition's
    d_minus order.  Rows cover exactly the axioms occurring in some trait.
    """

    axiom_ids: tuple[int, ...]
    columns: tuple[Diagnosis, ...]
    bits: tuple[tuple[int, ...], ...]

    def row(self, axiom_id: int) -> tuple[int, ...]:
        return self.bits[self.axiom_ids.index(axiom_id)]


def _union(ds: Iterable[Diagnosis]) -> frozenset[int]:
    out: frozenset[int] = frozenset()
    for d in ds:
        out |= d
    return out


def _intersection(ds: Sequence[frozenset[int]]) -> frozenset[int]:
    if not ds:
        return frozenset()
    out = ds[0]
    for d in ds[1:]:
        out &= d
    return out


def compute_traits(p: QPartition) -> dict[Diagnosis, frozenset[int]]:
    """trait(D_i) = D_i minus everything in d_plus, for each D_i in d_minus."""
    if p.d_zero:
        raise QPartitionError("traits are defined for partitions with empty d_zero")
    plus_union = _union(p.d_plus)
    return {d: d - plus_union for d in p.d_minus}


def build_atm(p: QPartition) -> ATM:
    traits = compute_traits(p)
    axiom_ids = tuple(sorted(_union(traits.values())))
    bits = tuple(
        tuple(1 if ax in traits[d] else 0 for d in p.d_minus) for ax in axiom_ids
    )
    return ATM(axiom_ids=axiom_ids, columns=p.d_minus, bits=bits)


def _dominates(row_a: tuple[int, ...], row_b: tuple[int, ...]) -> bool:
    """row_a has a 1 everywhere row_b does."""
    return all(a >= b for a, b in zip(row_a, row_b))


def superior_rows(atm: ATM) -> frozenset[int]:
    """Axioms whose rows have a 0-entry and are maximal among such rows.

    All-ones rows cannot disqualify a row: they represent no diagnosis move
    (their queries are extracted directly instead), so domination is judged
    only against rows that themselves contain a 0-entry.
    """
    with_zero = [
        (ax, row) for ax, row in zip(atm.axiom_ids, atm.bits) if 0 in row
    ]
    out = []
    for ax, row in with_zero:
        strictly_dominated = any(
            other != row and _dominates(other, row) and not _dominates(row, other)
            for _, other in with_zero
        )
        if not strictly_dominated:
            out.append(ax)
    return frozenset(out)


def _move_to_plus(p: QPartition, moved: frozenset[Diagnosis]) -> QPartition:
    return QPartition(
        d_plus=p.d_plus + tuple(d for d in p.d_minus if d in moved),
        d_minus=tuple(d for d in p.d_minus if d not in moved),
    )


def normal_successors(p: QPartition) -> tuple[QPartition, ...]:
    """One successor per equality group of subset-minimal traits.

    Successors exist only when at least two distinct subset-minimal traits
    are present; each successor moves a whole equal-trait group from d_minus
    to d_plus.  Order: ascending lexicographic trait.
    """
    traits = compute_traits(p)
    distinct = set(traits.values())
    minimal = [
        t for t in distinct if not any(o < t for o in distinct)
    ]
    if len(minimal) < 2:
        return ()
    minimal.sort(key=sorted)
    return tuple(
        _move_to_plus(p, frozenset(d for d, t in traits.items() if t == target))
        for target in minimal
    )


def singleton_successors(p: QPartition) -> tuple[QPartition, ...]:
    """One successor per superior ATM row: its 1-columns become d_minus.

    Identical rows produce the same partition and are deduplicated.  Order:
    ascending axiom id of the generating row.
    """
    atm = build_atm(p)
    ambient = p.ambient()
    out: list[QPartition] = []
    seen: set[frozenset[Diagnosis]] = set()
    for ax in sorted(superior_rows(atm)):
        row = atm.row(ax)
        minus = frozenset(d for d, bit in zip(atm.columns, row) if bit)
        if minus in seen:
            continue
        seen.add(minus)
        out.append(
            QPartition(
                d_plus=tuple(d for d in ambient if d not in minus),
                d_minus=tuple(d for d in ambient if d in minus),
            )
        )
    return tuple(out)


def singleton_query_axioms(p: QPartition) -> frozenset[int]:
    """Axioms forming one-element queries for p: those in every trait.

    Equivalently the all-ones rows of the ATM.  Empty iff p admits no
    single-axiom query over the KB's own axioms.
    """
    traits = compute_traits(p)
    return _intersection(tuple(traits.values()))


def min_card_hitting_set_query(p: QPartition) -> frozenset[int]:
    """A minimum-cardinality hitting set of p's traits.

    Ties break lexicographically on ascending axiom ids.  Raises when some
    trait is empty (the partition admits no query at all).
    """
    traits = list(compute_traits(p).values())
    if not traits:
        raise QPartitionError("partition has no d_minus diagnoses")
    if any(not t for t in traits):
        raise QPartitionError("empty trait: partition admits no query")
    universe = sorted(_union(traits))
    for k in range(1, len(universe) + 1):
        for combo in itertools.combinations(universe, k):
            chosen = frozenset(combo)
            if all(chosen & t for t in traits):
                return chosen
    raise QPartitionError("unreachable: universe itself hits every trait")


def explicit_query_partition(
    diagnoses: Sequence[Diagnosis], query: frozenset[int]
) -> QPartition:
    """Partition induced by a query drawn from the KB's own axioms.

    Diagnoses disjoint from the query predict a positive answer (the query
    survives their repair), the others predict a negative one.  Valid for
    minimal diagnoses; the undecided part is always empty then.
    """
    return QPartition(
        d_plus=tuple(d for d in diagnoses if not d & query),
        d_minus=tuple(d for d in diagnoses if d & query),
    )
