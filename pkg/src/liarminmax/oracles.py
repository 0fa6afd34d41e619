"""Comparison oracles that may lie, but never beyond their budget.

All oracles share one contract: ``query(a, b)`` returns an :class:`Answer`
for the ordered pair, appends one transcript record per call (when
recording), and never gives more than ``k`` false answers relative to the
hidden order.  The adaptive adversary has no fixed hidden order; it keeps
every (order, lies-spent) explanation alive and commits as late as possible.
"""

from __future__ import annotations

import random
from itertools import permutations
from typing import Iterable, Sequence

from .core import Answer, InvalidQuery, TotalOrder, Transcript

__all__ = [
    "AdaptiveAdversary",
    "AnswersExhausted",
    "EXHAUSTIVE_CAP",
    "LyingOracle",
    "RandomLiarOracle",
    "ScriptedOracle",
    "TriggeredLiarOracle",
    "TruthfulOracle",
    "adversary_consistent_orders",
]

# All n! orders get enumerated by the exhaustive backends; keep that desk-sized.
EXHAUSTIVE_CAP = 6


class LyingOracle:
    """Base class for oracles with a fixed hidden order and a lie budget.

    Subclasses override :meth:`_wants_lie`; the base class handles budget
    enforcement, lie counting, and transcript recording.  ``record=False``
    skips transcript records for large truthful benchmark runs.
    """

    def __init__(self, order: TotalOrder, k: int = 0, record: bool = True) -> None:
        if k < 0:
            raise ValueError("lie budget must be non-negative")
        self.order = order
        self.k = k
        self.lies_told = 0
        self.queries = 0
        self.transcript: Transcript | None = Transcript() if record else None

    def _wants_lie(self, index: int, a: int, b: int) -> bool:
        return False

    def query(self, a: int, b: int) -> Answer:
        if a == b:
            raise InvalidQuery(f"cannot compare element {a} with itself")
        rank = self.order.rank
        truth = Answer.FIRST_SMALLER if rank[a] < rank[b] else Answer.FIRST_LARGER
        if self.lies_told < self.k and self._wants_lie(self.queries, a, b):
            self.lies_told += 1
            answer = truth.flipped()
        else:
            answer = truth
        self.queries += 1
        if self.transcript is not None:
            self.transcript.append(a, b, answer)
        return answer


class TruthfulOracle(LyingOracle):
    """Always answers according to the hidden order."""

    def __init__(self, order: TotalOrder, record: bool = True) -> None:
        super().__init__(order, 0, record)


class RandomLiarOracle(LyingOracle):
    """Lies independently with probability ``p`` until the budget is spent.

    Deterministic for a fixed seed: two oracles with the same seed produce
    bit-identical transcripts over the same query sequence.
    """

    def __init__(self, order: TotalOrder, k: int, p: float, seed: int) -> None:
        if not 0.0 <= p <= 1.0:
            raise ValueError("lie probability must lie in [0, 1]")
        super().__init__(order, k)
        self.p = p
        self.seed = seed
        self._rng = random.Random(seed)

    def _wants_lie(self, index: int, a: int, b: int) -> bool:
        return self._rng.random() < self.p


class TriggeredLiarOracle(LyingOracle):
    """Lies exactly on the given global query indices, budget permitting.

    Useful for forcing a restart at a chosen moment, e.g. on the last
    verification query of a group.
    """

    def __init__(self, order: TotalOrder, k: int, triggers: Iterable[int]) -> None:
        super().__init__(order, k)
        self.triggers = frozenset(triggers)

    def _wants_lie(self, index: int, a: int, b: int) -> bool:
        return index in self.triggers


class AdaptiveAdversary:
    """Commits to no single order; answers to keep the explanation set large.

    The candidate set maps each still-viable ranking to the lies it would have
    to charge against the transcript so far.  The answer rule picks whichever
    answer keeps the larger surviving set, breaking ties toward FIRST_SMALLER.
    This is a heuristic; the harness's exhaustive verifier explores the full
    answer tree instead of trusting it.
    """

    def __init__(self, n: int, k: int) -> None:
        if n > EXHAUSTIVE_CAP:
            raise ValueError(
                f"adaptive adversary enumerates all n! orders; n must be <= {EXHAUSTIVE_CAP}"
            )
        self.n = n
        self.k = k
        self.transcript = Transcript()
        self._candidates: dict[tuple[int, ...], int] = {
            rank: 0 for rank in permutations(range(n))
        }

    def query(self, a: int, b: int) -> Answer:
        if a == b:
            raise InvalidQuery(f"cannot compare element {a} with itself")
        smaller_survivors: dict[tuple[int, ...], int] = {}
        larger_survivors: dict[tuple[int, ...], int] = {}
        for rank, lies in self._candidates.items():
            if rank[a] < rank[b]:
                smaller_survivors[rank] = lies
                if lies < self.k:
                    larger_survivors[rank] = lies + 1
            else:
                larger_survivors[rank] = lies
                if lies < self.k:
                    smaller_survivors[rank] = lies + 1
        if len(smaller_survivors) >= len(larger_survivors):
            answer, survivors = Answer.FIRST_SMALLER, smaller_survivors
        else:
            answer, survivors = Answer.FIRST_LARGER, larger_survivors
        # Every candidate survives the answer matching its own truth, so the
        # larger side is never empty.
        self._candidates = survivors
        self.transcript.append(a, b, answer)
        return answer

    @property
    def candidate_count(self) -> int:
        return len(self._candidates)

    def surviving_orders(self) -> list[TotalOrder]:
        return [TotalOrder(rank) for rank in sorted(self._candidates)]


class AnswersExhausted(Exception):
    """Raised by :class:`ScriptedOracle` when the script runs out.

    Carries the pending query pair so a driver can branch on both answers.
    """

    def __init__(self, a: int, b: int) -> None:
        super().__init__(f"answer script exhausted at query ({a}, {b})")
        self.a = a
        self.b = b


class ScriptedOracle:
    """Replays a fixed answer sequence; the backbone of transcript replay
    and of the exhaustive game-tree verifier."""

    def __init__(self, answers: Sequence[Answer]) -> None:
        self.answers = list(answers)
        self.position = 0
        self.transcript = Transcript()

    def query(self, a: int, b: int) -> Answer:
        if a == b:
            raise InvalidQuery(f"cannot compare element {a} with itself")
        if self.position >= len(self.answers):
            raise AnswersExhausted(a, b)
        answer = self.answers[self.position]
        self.position += 1
        self.transcript.append(a, b, answer)
        return answer


def adversary_consistent_orders(
    transcript: Transcript, n: int, k: int, cap: int = EXHAUSTIVE_CAP
) -> list[TotalOrder]:
    """Every order an honest-but-lying oracle could still be hiding.

    Enumerates all n! permutations and keeps those the transcript contradicts
    at most ``k`` times; refuses when ``n`` exceeds the cap.
    """
    if n > cap:
        raise ValueError(f"exhaustive order enumeration requested for n={n}, cap is {cap}")
    records = [(r.a, r.b, r.answer is Answer.FIRST_SMALLER) for r in transcript]
    matches = []
    for rank in permutations(range(n)):
        lies = 0
        for a, b, said_smaller in records:
            if (rank[a] < rank[b]) != said_smaller:
                lies += 1
                if lies > k:
                    break
        if lies <= k:
            matches.append(TotalOrder(rank))
    return matches
