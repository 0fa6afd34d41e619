"""Oracle-driven sorting with comparison memoization and graph extraction.

A sorter never queries the same unordered pair twice within one attempt, so
the comparison graph is simple and every degree is at most s-1; that is what
makes the flow completion feasible whenever the group size is at most k+2.
Lies are not hunted down here beyond the partition-size and budget checks --
callers decide what an inconsistent attempt means.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .config import DEFAULT, CalibratedConstants
from .core import Answer
from .graphs import OrderedMultigraph

__all__ = [
    "SortBudget",
    "SortInconsistency",
    "SortOutcome",
    "balanced_quicksort",
    "median_select",
    "mergesort",
    "thickness_of_run",
]


class SortInconsistency(Exception):
    """Evidence of at least one lie inside a sort attempt."""

    def __init__(self, reason: str, comparisons: int) -> None:
        super().__init__(reason)
        self.reason = reason
        self.comparisons = comparisons


@dataclass(frozen=True)
class SortBudget:
    """Per-attempt comparison cap; an overrun proves the oracle lied,
    provided the cap is at least the truthful worst case for that size."""

    max_comparisons: int

    @classmethod
    def default_for(cls, s: int, constants: CalibratedConstants | None = None) -> "SortBudget":
        c = constants or DEFAULT
        log_ceil = (s - 1).bit_length() if s > 1 else 0
        return cls(c.sort_budget_linear * s + c.sort_budget_log * s * log_ceil)


class _Session:
    """Memoized comparison channel for one sort attempt."""

    __slots__ = ("oracle", "memo", "cap")

    def __init__(self, oracle, cap: int | None = None) -> None:
        self.oracle = oracle
        self.memo: dict[tuple[int, int], bool] = {}
        self.cap = cap

    def less(self, a: int, b: int) -> bool:
        """Whether the (memoized) answer puts ``a`` before ``b``."""
        if a < b:
            key, flip = (a, b), False
        else:
            key, flip = (b, a), True
        lo_smaller = self.memo.get(key)
        if lo_smaller is None:
            if self.cap is not None and len(self.memo) >= self.cap:
                raise SortInconsistency("comparison budget exhausted", len(self.memo))
            lo_smaller = self.oracle.query(key[0], key[1]) is Answer.FIRST_SMALLER
            self.memo[key] = lo_smaller
        return lo_smaller != flip


@dataclass
class SortOutcome:
    """Result of one sort attempt.

    ``declared`` holds each compared pair in output coordinates, oriented by
    the recorded answer: (position answered smaller, position answered
    larger).  ``graph`` is the same pairs unoriented; it is simple because of
    memoization.
    """

    output: list[int]
    graph: OrderedMultigraph
    comparisons: int
    declared: list[tuple[int, int]]

    def is_order_consistent(self) -> bool:
        """True when every recorded answer agrees with the claimed output order."""
        return all(i < j for i, j in self.declared)


def _make_outcome(output: list[int], session: _Session) -> SortOutcome:
    position = {element: index + 1 for index, element in enumerate(output)}
    declared = []
    edge_pairs = []
    for (lo, hi), lo_smaller in session.memo.items():
        p, q = position[lo], position[hi]
        declared.append((p, q) if lo_smaller else (q, p))
        edge_pairs.append((p, q) if p < q else (q, p))
    graph = OrderedMultigraph(len(output), dict(Counter(edge_pairs)))
    return SortOutcome(output, graph, len(session.memo), declared)


def mergesort(items, oracle) -> SortOutcome:
    """Plain top-down mergesort: at most s * ceil(log2 s) comparisons, never
    repeats a pair, and survives arbitrary answers (the output is then just
    some permutation)."""
    session = _Session(oracle)
    output = _msort(list(items), session)
    return _make_outcome(output, session)


def _msort(seq: list, session: _Session) -> list:
    if len(seq) <= 1:
        return seq
    mid = len(seq) // 2
    left = _msort(seq[:mid], session)
    right = _msort(seq[mid:], session)
    merged = []
    i = j = 0
    less = session.less
    while i < len(left) and j < len(right):
        if less(right[j], left[i]):
            merged.append(right[j])
            j += 1
        else:
            merged.append(left[i])
            i += 1
    merged.extend(left[i:])
    merged.extend(right[j:])
    return merged


def _insertion(seq, session: _Session) -> list:
    out: list = []
    for x in seq:
        i = len(out)
        while i > 0 and session.less(x, out[i - 1]):
            i -= 1
        out.insert(i, x)
    return out


def _select_kth(seq: list, rank: int, session: _Session):
    """Element of 1-based ``rank`` according to the answers seen so far.

    Median-of-medians with groups of five: deterministic, linear comparisons,
    and guaranteed to terminate even on adversarial answers because every
    descent strictly shrinks the working set.
    """
    while True:
        m = len(seq)
        if m <= 5:
            return _insertion(seq, session)[rank - 1]
        medians = []
        for i in range(0, m, 5):
            chunk = seq[i : i + 5]
            medians.append(_insertion(chunk, session)[(len(chunk) - 1) // 2])
        pivot = _select_kth(medians, (len(medians) + 1) // 2, session)
        smaller: list = []
        larger: list = []
        for x in seq:
            if x == pivot:
                continue
            (smaller if session.less(x, pivot) else larger).append(x)
        if rank <= len(smaller):
            seq = smaller
        elif rank == len(smaller) + 1:
            return pivot
        else:
            rank -= len(smaller) + 1
            seq = larger


def _median_partition(seq, session: _Session):
    m = len(seq)
    target = (m + 1) // 2
    median = _select_kth(list(seq), target, session)
    smaller: list = []
    larger: list = []
    for x in seq:
        if x == median:
            continue
        (smaller if session.less(x, median) else larger).append(x)
    if len(smaller) != target - 1:
        raise SortInconsistency(
            f"partition sizes off: {len(smaller)}/{len(larger)} around claimed median of {m}",
            len(session.memo),
        )
    return median, smaller, larger


def median_select(items, oracle, budget: SortBudget):
    """Median plus the strictly-smaller and strictly-larger sides.

    On truthful answers the median has rank ceil(m/2) and the sides have
    exactly ceil(m/2)-1 and m-ceil(m/2) elements; wrong sizes or a blown
    budget raise :class:`SortInconsistency`.
    """
    items = list(items)
    if not items:
        raise ValueError("median of an empty set")
    session = _Session(oracle, cap=budget.max_comparisons)
    return _median_partition(items, session)


def balanced_quicksort(items, oracle, budget: SortBudget) -> SortOutcome:
    """Quicksort splitting at the exact median on every level.

    The even split keeps the comparison graph shallow over every position
    (each level's comparisons mostly stay inside one half).  Raises
    :class:`SortInconsistency` on a wrong partition size at any level or on
    budget overrun; with a truthful oracle neither can happen.
    """
    session = _Session(oracle, cap=budget.max_comparisons)
    output = _bqsort(list(items), session)
    return _make_outcome(output, session)


def _bqsort(seq: list, session: _Session) -> list:
    if len(seq) <= 1:
        return list(seq)
    median, smaller, larger = _median_partition(seq, session)
    return _bqsort(smaller, session) + [median] + _bqsort(larger, session)


def thickness_of_run(outcome: SortOutcome) -> int:
    """Thickness of the attempt's comparison graph in output coordinates."""
    return outcome.graph.thickness()
