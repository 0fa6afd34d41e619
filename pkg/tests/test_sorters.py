import random
from itertools import combinations, permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from liarminmax.core import TotalOrder
from liarminmax.oracles import (
    RandomLiarOracle,
    ScriptedOracle,
    TriggeredLiarOracle,
    TruthfulOracle,
)
from liarminmax.sorters import (
    SortBudget,
    SortInconsistency,
    balanced_quicksort,
    median_select,
    mergesort,
    thickness_of_run,
)


def mergesort_cap(s):
    return s * (s - 1).bit_length() if s > 1 else 0


class TestMergesort:
    def test_single_item(self):
        out = mergesort([3], TruthfulOracle(TotalOrder.identity(4)))
        assert out.output == [3]
        assert out.comparisons == 0

    def test_pair(self):
        order = TotalOrder((1, 0))
        out = mergesort([0, 1], TruthfulOracle(order))
        assert out.output == [1, 0]
        assert out.comparisons == 1

    def test_all_permutations_of_four(self):
        order = TotalOrder.identity(4)
        for perm in permutations(range(4)):
            out = mergesort(list(perm), TruthfulOracle(order))
            assert out.output == [0, 1, 2, 3]
            assert out.comparisons <= 5

    @settings(max_examples=60)
    @given(st.integers(1, 64), st.integers(0, 2**31))
    def test_truthful_sorts_within_cap(self, s, seed):
        rng = random.Random(seed)
        order = TotalOrder.shuffled(s, rng)
        items = list(range(s))
        rng.shuffle(items)
        out = mergesort(items, TruthfulOracle(order))
        assert out.output == order.ascending()
        assert out.comparisons <= mergesort_cap(s)
        assert out.is_order_consistent()

    def test_no_pair_queried_twice(self):
        rng = random.Random(11)
        order = TotalOrder.shuffled(20, rng)
        oracle = TruthfulOracle(order)
        out = mergesort(list(range(20)), oracle)
        pairs = [(min(r.a, r.b), max(r.a, r.b)) for r in oracle.transcript]
        assert len(pairs) == len(set(pairs)) == out.comparisons
        assert all(m == 1 for m in out.graph.edges.values())

    def test_lying_oracle_still_outputs_a_permutation(self):
        order = TotalOrder.identity(9)
        oracle = RandomLiarOracle(order, k=3, p=0.8, seed=2)
        out = mergesort(list(range(9)), oracle)
        assert sorted(out.output) == list(range(9))

    def test_truthful_determinism(self):
        order = TotalOrder.shuffled(12, random.Random(5))
        items = list(range(12))
        a = mergesort(items, TruthfulOracle(order))
        b = mergesort(items, TruthfulOracle(order))
        assert a.output == b.output
        assert a.comparisons == b.comparisons
        assert a.graph.edges == b.graph.edges


class TestMedianSelect:
    def test_single_item(self):
        oracle = TruthfulOracle(TotalOrder.identity(1))
        median, smaller, larger = median_select([0], oracle, SortBudget(100))
        assert (median, smaller, larger) == (0, [], [])
        assert oracle.queries == 0

    def test_five_items_truthful(self):
        order = TotalOrder((3, 1, 4, 0, 2))
        oracle = TruthfulOracle(order)
        median, smaller, larger = median_select([0, 1, 2, 3, 4], oracle, SortBudget(100))
        assert order.rank[median] == 2
        assert sorted(order.rank[x] for x in smaller) == [0, 1]
        assert sorted(order.rank[x] for x in larger) == [3, 4]

    def test_partition_lie_detected(self):
        # A lie on some query must eventually produce wrong side sizes for m=4.
        order = TotalOrder.identity(4)
        items = [2, 0, 3, 1]
        truthful = TruthfulOracle(order)
        median_select(items, truthful, SortBudget(100))
        total = truthful.queries
        failures = []
        for trigger in range(total):
            oracle = TriggeredLiarOracle(order, k=1, triggers={trigger})
            try:
                median_select(items, oracle, SortBudget(100))
            except SortInconsistency as exc:
                failures.append((trigger, exc.reason))
        assert failures, "no single lie produced an inconsistent partition"
        assert any("partition" in reason for _, reason in failures)

    def test_budget_overrun_flagged(self):
        order = TotalOrder.identity(10)
        with pytest.raises(SortInconsistency) as exc:
            median_select(list(range(10)), TruthfulOracle(order), SortBudget(3))
        assert "budget" in exc.value.reason


class TestBalancedQuicksort:
    def test_single_item(self):
        out = balanced_quicksort([5], TruthfulOracle(TotalOrder.identity(6)), SortBudget(10))
        assert out.output == [5]
        assert out.comparisons == 0
        assert thickness_of_run(out) == 0

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 48), st.integers(0, 2**31))
    def test_truthful_sorts_and_never_inconsistent(self, s, seed):
        rng = random.Random(seed)
        order = TotalOrder.shuffled(s, rng)
        items = list(range(s))
        rng.shuffle(items)
        out = balanced_quicksort(items, TruthfulOracle(order), SortBudget.default_for(s))
        assert out.output == order.ascending()
        assert out.is_order_consistent()
        assert out.comparisons <= SortBudget.default_for(s).max_comparisons

    def test_eight_items_thickness_within_threshold(self):
        from liarminmax.config import DEFAULT

        order = TotalOrder.shuffled(8, random.Random(3))
        out = balanced_quicksort(list(range(8)), TruthfulOracle(order), SortBudget.default_for(8))
        assert out.output == order.ascending()
        assert thickness_of_run(out) <= DEFAULT.thickness_ct * 8

    def test_single_lie_can_force_inconsistency(self):
        order = TotalOrder.identity(16)
        items = list(range(16))
        random.Random(0).shuffle(items)
        truthful = TruthfulOracle(order)
        balanced_quicksort(items, truthful, SortBudget.default_for(16))
        total = truthful.queries
        seen_inconsistency = False
        for trigger in range(total):
            oracle = TriggeredLiarOracle(order, k=1, triggers={trigger})
            try:
                balanced_quicksort(items, oracle, SortBudget.default_for(16))
            except SortInconsistency:
                seen_inconsistency = True
                break
        assert seen_inconsistency, "no single lie triggered the partition checks"

    def test_memoization_keeps_graph_simple(self):
        order = TotalOrder.shuffled(20, random.Random(7))
        oracle = RandomLiarOracle(order, k=2, p=0.3, seed=9)
        try:
            out = balanced_quicksort(list(range(20)), oracle, SortBudget.default_for(20))
        except SortInconsistency:
            return
        pairs = [(min(r.a, r.b), max(r.a, r.b)) for r in oracle.transcript]
        assert len(pairs) == len(set(pairs)) == out.comparisons
        assert all(m == 1 for m in out.graph.edges.values())

    def test_replay_reproduces_identical_outcome(self):
        order = TotalOrder.shuffled(15, random.Random(21))
        oracle = RandomLiarOracle(order, k=3, p=0.4, seed=4)
        items = list(range(15))
        try:
            original = balanced_quicksort(items, oracle, SortBudget.default_for(15))
        except SortInconsistency:
            pytest.skip("this seed trips the size checks before finishing")
        replay = ScriptedOracle([r.answer for r in oracle.transcript])
        repeated = balanced_quicksort(items, replay, SortBudget.default_for(15))
        assert repeated.output == original.output
        assert repeated.comparisons == original.comparisons
        assert repeated.graph.edges == original.graph.edges
        assert sorted(repeated.declared) == sorted(original.declared)


def test_mergesort_replay_reproduces_identical_outcome():
    order = TotalOrder.shuffled(13, random.Random(2))
    oracle = RandomLiarOracle(order, k=2, p=0.5, seed=8)
    items = list(range(13))
    original = mergesort(items, oracle)
    replay = ScriptedOracle([r.answer for r in oracle.transcript])
    repeated = mergesort(items, replay)
    assert repeated.output == original.output
    assert repeated.graph.edges == original.graph.edges


def test_graph_covers_every_compared_pair_in_output_coordinates():
    order = TotalOrder.shuffled(10, random.Random(6))
    oracle = TruthfulOracle(order)
    out = mergesort(list(range(10)), oracle)
    position = {e: i + 1 for i, e in enumerate(out.output)}
    expected = set()
    for r in oracle.transcript:
        pa, pb = position[r.a], position[r.b]
        expected.add((min(pa, pb), max(pa, pb)))
    assert set(out.graph.edges) == expected


def test_sort_budget_formula():
    assert SortBudget.default_for(1).max_comparisons == 32
    assert SortBudget.default_for(2).max_comparisons == 32 * 2 + 4 * 2 * 1
    assert SortBudget.default_for(8).max_comparisons == 32 * 8 + 4 * 8 * 3
    # budgets always cover the all-pairs count for small s, so a truthful
    # attempt can never trip them
    for s in range(1, 12):
        assert SortBudget.default_for(s).max_comparisons >= len(list(combinations(range(s), 2)))
