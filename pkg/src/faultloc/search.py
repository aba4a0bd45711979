"""Two-stage query selection: q-partition search, then query extraction.

Stage 1 is a depth-first, local best-first backtracking search over
q-partitions.  It starts from the all-undecided root, expands with the
singleton-query or the normal-query successor function, always descends into
the best-scoring unexplored successor, and backtracks to the next-best
unexplored sibling at dead ends.  The first partition whose normalized
optimality gap is within epsilon wins; if none qualifies, the best-scoring
partition visited is returned.  Structurally equal partitions reached on
different paths are deduplicated, and only deduplicated generations count
toward the stats.

Stage 2 extracts the cheapest query for the fixed partition: in singleton
mode the lowest-id axiom common to all traits; in normal mode a
minimum-cardinality hitting set of the traits.

Searches work on axiom ids; callers resolve ids to axioms against their FPI.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .diagnosis import DiagnosisDistribution
from .fpi import Diagnosis
from .heuristics import (
    DEFAULT_CAUTIOUSNESS,
    HeuristicId,
    Score,
    score,
)
from .qpartition import (
    QPartition,
    min_card_hitting_set_query,
    normal_successors,
    singleton_query_axioms,
    singleton_successors,
)


class SearchError(Exception):
    pass


@dataclass(frozen=True)
class SearchConfig:
    h1: HeuristicId = HeuristicId.ENT
    singleton: bool = True
    epsilon: float = 0.05
    seed: int = 0
    node_budget: int = 10_000
    cautiousness: float = DEFAULT_CAUTIOUSNESS  # RIO only

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        if self.node_budget < 1:
            raise ValueError("node_budget must be positive")


@dataclass
class SearchStats:
    generated_qpartitions: int = 0
    expanded_nodes: int = 0
    wall_time: float = 0.0
    max_depth: int = 0
    budget_exhausted: bool = False


def find_best_qpartition(
    diagnoses: list[Diagnosis],
    dist: DiagnosisDistribution,
    cfg: SearchConfig,
) -> tuple[QPartition, SearchStats]:
    """Stage 1.  Requires at least two known diagnoses."""
    if len(diagnoses) < 2:
        raise SearchError("need at least two diagnoses to build a query")
    t0 = time.perf_counter()
    succ_fn = singleton_successors if cfg.singleton else normal_successors
    rng = random.Random(cfg.seed)
    stats = SearchStats()
    root = QPartition((), tuple(diagnoses))
    seen: set[frozenset[Diagnosis]] = {root.key()}
    best: tuple[QPartition, Score] | None = None

    def expand(p: QPartition) -> list[tuple[QPartition, Score]]:
        stats.expanded_nodes += 1
        fresh = []
        for s in succ_fn(p):
            if s.key() in seen:
                continue
            seen.add(s.key())
            fresh.append(s)
        stats.generated_qpartitions += len(fresh)
        scored = [
            (s, score(cfg.h1, s, dist, rng, cfg.cautiousness)) for s in fresh
        ]
        # stable sort keeps the successor functions' canonical tie order
        scored.sort(key=lambda pair: pair[1].sort_key())
        return scored

    # each stack frame is the not-yet-visited ordered successors of one node
    stack: list[list[tuple[QPartition, Score]]] = [expand(root)]
    while stack:
        frame = stack[-1]
        if not frame:
            stack.pop()
            continue
        p, s = frame.pop(0)
        depth = len(stack)
        stats.max_depth = max(stats.max_depth, depth)
        if best is None or s.better_than(best[1]):
            best = (p, s)
        if s.gap() <= cfg.epsilon:
            stats.wall_time = time.perf_counter() - t0
            return p, stats
        if stats.generated_qpartitions >= cfg.node_budget:
            stats.budget_exhausted = True
            break
        stack.append(expand(p))

    stats.wall_time = time.perf_counter() - t0
    if best is None:
        raise SearchError("no valid q-partition reachable")
    return best[0], stats


def find_best_query_for_qpartition(
    p: QPartition, cfg: SearchConfig
) -> frozenset[int]:
    """Stage 2.  Returns the query as a set of axiom ids."""
    if not p.is_proper():
        raise SearchError("partition does not admit a query")
    if cfg.singleton:
        candidates = singleton_query_axioms(p)
        if not candidates:
            raise SearchError("partition admits no singleton query")
        # every candidate costs one axiom; lowest id is the stable choice
        return frozenset({min(candidates)})
    return min_card_hitting_set_query(p)


def select_query(
    diagnoses: list[Diagnosis],
    dist: DiagnosisDistribution,
    cfg: SearchConfig,
) -> tuple[frozenset[int], QPartition, SearchStats]:
    """Both stages; stats wall time covers stage 1 plus stage 2."""
    t0 = time.perf_counter()
    partition, stats = find_best_qpartition(diagnoses, dist, cfg)
    query = find_best_query_for_qpartition(partition, cfg)
    stats.wall_time = time.perf_counter() - t0
    return query, partition, stats
