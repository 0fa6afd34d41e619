"""Ground-truth orderings, comparison answers, transcripts, and lie accounting.

Every other layer (oracles, sorters, selection algorithms, the experiment
harness) builds on these primitives.  Elements are dense integer ids 0..n-1
and the hidden truth is a rank permutation, so deciding whether a recorded
answer was a lie costs two array lookups.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum

__all__ = [
    "Answer",
    "InvalidQuery",
    "LieBudgetViolation",
    "PHASES",
    "QueryRecord",
    "RunStats",
    "TotalOrder",
    "Transcript",
    "assert_lie_budget",
    "count_lies",
    "truth_compare",
]


class InvalidQuery(ValueError):
    """A malformed comparison query, e.g. an element compared against itself."""


class LieBudgetViolation(RuntimeError):
    """An oracle produced more false answers than its budget allows.

    This signals a broken oracle implementation, not an algorithm bug.
    """

    def __init__(self, lies: int, budget: int) -> None:
        super().__init__(f"transcript contains {lies} lies but the budget is {budget}")
        self.lies = lies
        self.budget = budget


class Answer(Enum):
    """Oracle verdict for an ordered query pair (first, second)."""

    FIRST_SMALLER = "first-smaller"
    FIRST_LARGER = "first-larger"

    def flipped(self) -> "Answer":
        return Answer.FIRST_LARGER if self is Answer.FIRST_SMALLER else Answer.FIRST_SMALLER


@dataclass(frozen=True)
class TotalOrder:
    """Hidden ground truth: ``rank[e]`` is the position of element ``e``, 0 = smallest."""

    rank: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.rank) != list(range(len(self.rank))):
            raise ValueError("rank must be a permutation of 0..n-1")

    @property
    def n(self) -> int:
        return len(self.rank)

    @classmethod
    def identity(cls, n: int) -> "TotalOrder":
        return cls(tuple(range(n)))

    @classmethod
    def from_ascending(cls, elements) -> "TotalOrder":
        """Build the order in which ``elements[0]`` is smallest, ``elements[-1]`` largest."""
        rank = [0] * len(elements)
        for position, element in enumerate(elements):
            rank[element] = position
        return cls(tuple(rank))

    @classmethod
    def shuffled(cls, n: int, rng: random.Random) -> "TotalOrder":
        ranks = list(range(n))
        rng.shuffle(ranks)
        return cls(tuple(ranks))

    def min_element(self) -> int:
        return self.rank.index(0)

    def max_element(self) -> int:
        return self.rank.index(self.n - 1)

    def ascending(self) -> list[int]:
        """Element ids from smallest to largest."""
        return sorted(range(self.n), key=self.rank.__getitem__)


def truth_compare(order: TotalOrder, a: int, b: int) -> Answer:
    """True verdict for the pair (a, b) under the hidden order."""
    if a == b:
        raise InvalidQuery(f"cannot compare element {a} with itself")
    return Answer.FIRST_SMALLER if order.rank[a] < order.rank[b] else Answer.FIRST_LARGER


@dataclass(frozen=True)
class QueryRecord:
    index: int
    a: int
    b: int
    answer: Answer


class Transcript:
    """Ordered log of every oracle query, including repeats of the same pair."""

    __slots__ = ("records",)

    def __init__(self) -> None:
        self.records: list[QueryRecord] = []

    def append(self, a: int, b: int, answer: Answer) -> QueryRecord:
        record = QueryRecord(len(self.records), a, b, answer)
        self.records.append(record)
        return record

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, index):
        return self.records[index]


def count_lies(transcript: Transcript, order: TotalOrder) -> int:
    """Number of recorded answers that contradict the hidden order."""
    rank = order.rank
    smaller = Answer.FIRST_SMALLER
    lies = 0
    for record in transcript:
        if (rank[record.a] < rank[record.b]) != (record.answer is smaller):
            lies += 1
    return lies


def assert_lie_budget(transcript: Transcript, order: TotalOrder, k: int) -> int:
    """Return the lie count, raising :class:`LieBudgetViolation` if it exceeds ``k``."""
    lies = count_lies(transcript, order)
    if lies > k:
        raise LieBudgetViolation(lies, k)
    return lies


PHASES = ("group-sort", "group-verify", "final-min", "final-max")


@dataclass
class RunStats:
    """Comparison accounting for one full selection run."""

    restarts: int = 0
    phase_breakdown: dict[str, int] = field(default_factory=dict)

    @property
    def comparisons(self) -> int:
        return sum(self.phase_breakdown.values())

    def add(self, phase: str, count: int) -> None:
        if count:
            self.phase_breakdown[phase] = self.phase_breakdown.get(phase, 0) + count
