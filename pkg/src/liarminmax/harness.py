"""Experiment runner, exhaustive adversary verification, and self-tests.

Everything here is deterministic given a root seed: each trial derives its
own child seed, builds its own oracle and hidden order, and rows come out in
trial order, so CSV output is byte-stable for a fixed configuration.
"""

from __future__ import annotations

import math
import random
import statistics
from dataclasses import dataclass, field
from itertools import permutations, product
from pathlib import Path
from typing import Callable

from .config import DEFAULT, CalibratedConstants
from .core import Answer, TotalOrder, assert_lie_budget
from .graphs import (
    OrderedMultigraph,
    brute_force_min_cut,
    build_flow_network,
    complete_edges,
    flow_completion,
    max_flow_integral,
    min_split_cut,
)
from .oracles import (
    AnswersExhausted,
    RandomLiarOracle,
    ScriptedOracle,
    TriggeredLiarOracle,
    TruthfulOracle,
)
from .algorithms import (
    _blocks,
    _group_size,
    find_max_k_lies,
    find_min_k_lies,
    improved_minmax,
    pohl_minmax,
    simple_minmax,
)
from .sorters import SortBudget, balanced_quicksort, mergesort

__all__ = [
    "CSV_HEADER",
    "CalibrationResult",
    "Counterexample",
    "ExperimentConfig",
    "ExperimentRow",
    "FlowSelftestReport",
    "ThicknessRow",
    "VerifyReport",
    "calibrate",
    "flow_selftest",
    "measure_thickness",
    "mergesort_comparison_cap",
    "rows_to_csv",
    "run_experiments",
    "simple_comparison_bound",
    "thickness_rows_to_csv",
    "verify_exhaustive",
    "write_text",
]

ALGORITHMS = ("pohl", "simple", "improved", "find-min", "find-max")
ORACLES = ("truthful", "random-liar", "triggered-liar")

CSV_HEADER = "algorithm,n,k,oracle,seed,comparisons,restarts,bound,within_bound"


def _child_seed(root: int, index: int) -> int:
    # Splits one root seed into well-separated per-trial streams.
    return (root * 1_000_003 + index * 7_919 + 12_345) & 0x7FFF_FFFF_FFFF_FFFF


@dataclass(frozen=True)
class ExperimentConfig:
    algorithm: str
    n: int
    k: int
    oracle: str = "truthful"
    p: float = 0.0
    triggers: tuple[int, ...] = ()
    trials: int = 1
    seed: int = 0
    s_override: int | None = None
    record_transcripts: bool = True

    def validate(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.oracle not in ORACLES:
            raise ValueError(f"unknown oracle {self.oracle!r}")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.k < 0:
            raise ValueError("k must be non-negative")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.algorithm == "pohl" and self.oracle != "truthful":
            raise ValueError("the pairing algorithm assumes a reliable oracle")
        if self.algorithm in ("pohl", "simple", "improved") and self.n < 2:
            raise ValueError(f"{self.algorithm} needs at least two elements")


@dataclass(frozen=True)
class ExperimentRow:
    algorithm: str
    n: int
    k: int
    oracle: str
    seed: int
    comparisons: int
    restarts: int
    bound: int
    within_bound: bool

    def as_csv(self) -> str:
        return (
            f"{self.algorithm},{self.n},{self.k},{self.oracle},{self.seed},"
            f"{self.comparisons},{self.restarts},{self.bound},"
            f"{'true' if self.within_bound else 'false'}"
        )


def mergesort_comparison_cap(m: int) -> int:
    """Worst-case mergesort comparisons for m elements."""
    return m * (m - 1).bit_length() if m > 1 else 0


def simple_comparison_bound(n: int, k: int, restarts: int) -> int:
    """Instrumented closed-form cap for the simple algorithm.

    Per-group worst case (mergesort cap plus (k+1)(s-1) verification), one
    extra per-group worst case per observed restart, plus the loss-counter
    bounds for the two final selections over the group extrema.
    """
    s = _group_size(k)
    sizes = [len(block) for block in _blocks(list(range(n)), s)]
    per_group = [mergesort_comparison_cap(m) + (k + 1) * (m - 1) for m in sizes]
    final = 2 * ((k + 1) * len(sizes) - 1)
    return sum(per_group) + restarts * max(per_group) + final


def _bound_for(cfg: ExperimentConfig, restarts: int) -> int:
    if cfg.algorithm == "pohl":
        return (3 * cfg.n + 1) // 2 - 2
    if cfg.algorithm in ("find-min", "find-max"):
        return (cfg.k + 1) * cfg.n - 1
    if cfg.algorithm == "improved":
        # Regression thresholds: constant 10 on n, cubic slack on k.
        return (cfg.k + 1 + 10) * cfg.n + 1000 * cfg.k**3
    return simple_comparison_bound(cfg.n, cfg.k, restarts)


def _oracle_label(cfg: ExperimentConfig, triggers: tuple[int, ...]) -> str:
    if cfg.oracle == "random-liar":
        return f"random-liar(p={cfg.p})"
    if cfg.oracle == "triggered-liar":
        return "triggered-liar(" + ";".join(str(t) for t in triggers) + ")"
    return "truthful"


def _build_oracle(cfg: ExperimentConfig, order: TotalOrder, rng: random.Random):
    if cfg.oracle == "truthful":
        return TruthfulOracle(order, record=cfg.record_transcripts), ()
    if cfg.oracle == "random-liar":
        return RandomLiarOracle(order, cfg.k, cfg.p, seed=rng.randrange(2**62)), ()
    triggers = cfg.triggers
    if not triggers:
        horizon = max(1, (cfg.k + 1) * cfg.n)
        triggers = tuple(sorted(rng.sample(range(horizon), min(cfg.k, horizon))))
    return TriggeredLiarOracle(order, cfg.k, triggers), triggers


def run_experiments(
    cfg: ExperimentConfig, constants: CalibratedConstants | None = None
) -> list[ExperimentRow]:
    """One row per trial; verifies correctness and lie accounting as it goes."""
    cfg.validate()
    rows: list[ExperimentRow] = []
    items = list(range(cfg.n))
    for trial in range(cfg.trials):
        trial_seed = _child_seed(cfg.seed, trial)
        rng = random.Random(trial_seed)
        order = TotalOrder.shuffled(cfg.n, rng)
        oracle, triggers = _build_oracle(cfg, order, rng)
        restarts = 0
        if cfg.algorithm == "find-min":
            reported, comparisons = find_min_k_lies(items, cfg.k, oracle)
            if reported != order.min_element():
                raise RuntimeError(f"find-min returned a wrong element (seed {trial_seed})")
        elif cfg.algorithm == "find-max":
            reported, comparisons = find_max_k_lies(items, cfg.k, oracle)
            if reported != order.max_element():
                raise RuntimeError(f"find-max returned a wrong element (seed {trial_seed})")
        else:
            if cfg.algorithm == "pohl":
                result = pohl_minmax(items, oracle)
            elif cfg.algorithm == "simple":
                result = simple_minmax(items, cfg.k, oracle)
            else:
                result = improved_minmax(
                    items, cfg.k, oracle, s=cfg.s_override, constants=constants
                )
            if result.min != order.min_element() or result.max != order.max_element():
                raise RuntimeError(f"{cfg.algorithm} returned wrong extrema (seed {trial_seed})")
            comparisons = result.stats.comparisons
            restarts = result.stats.restarts
        if oracle.transcript is not None:
            assert_lie_budget(oracle.transcript, order, cfg.k)
            if restarts > oracle.lies_told:
                raise RuntimeError("more restarts than lies told; restart logic is broken")
        bound = _bound_for(cfg, restarts)
        rows.append(
            ExperimentRow(
                cfg.algorithm,
                cfg.n,
                cfg.k,
                _oracle_label(cfg, triggers),
                trial_seed,
                comparisons,
                restarts,
                bound,
                comparisons <= bound,
            )
        )
    return rows


def rows_to_csv(rows: list[ExperimentRow]) -> str:
    return "\n".join([CSV_HEADER] + [row.as_csv() for row in rows]) + "\n"


def write_text(text: str, out: str | Path | None) -> None:
    """Write to a file, or stdout when no path is given."""
    if out is None:
        print(text, end="")
    else:
        Path(out).write_text(text)


# --- exhaustive adversary verification -------------------------------------


@dataclass(frozen=True)
class Counterexample:
    answers: tuple[Answer, ...]
    reported_min: int | None
    reported_max: int | None
    surviving: tuple[TotalOrder, ...]


@dataclass
class VerifyReport:
    algorithm: str
    n: int
    k: int
    nodes: int = 0
    leaves: int = 0
    counterexample: Counterexample | None = None

    @property
    def passed(self) -> bool:
        return self.counterexample is None


Runner = Callable[[object], tuple[int | None, int | None]]


def _algorithm_runner(algorithm, items: list[int], k: int, s_override: int | None) -> Runner:
    if callable(algorithm):
        return lambda oracle: algorithm(items, k, oracle)
    if algorithm == "find-min":
        return lambda oracle: (find_min_k_lies(items, k, oracle)[0], None)
    if algorithm == "find-max":
        return lambda oracle: (None, find_max_k_lies(items, k, oracle)[0])
    if algorithm == "pohl":
        if k != 0:
            raise ValueError("the pairing algorithm is a k=0 algorithm")

        def run_pohl(oracle):
            result = pohl_minmax(items, oracle)
            return result.min, result.max

        return run_pohl
    if algorithm == "simple":

        def run_simple(oracle):
            result = simple_minmax(items, k, oracle)
            return result.min, result.max

        return run_simple
    if algorithm == "improved":

        def run_improved(oracle):
            result = improved_minmax(items, k, oracle, s=s_override)
            return result.min, result.max

        return run_improved
    raise ValueError(f"unknown algorithm {algorithm!r}")


def verify_exhaustive(
    n: int, k: int, algorithm, *, s_override: int | None = None, cap: int = 5
) -> VerifyReport:
    """Walk the complete adversary answer tree for an algorithm.

    At every query both answers are explored, except branches no (order,
    <= k lies) explanation can justify -- a contract-honoring oracle cannot
    produce them.  At each leaf the reported extrema must match the extrema
    of every surviving order.  The first violation is returned as a
    counterexample.
    """
    if n > cap:
        raise ValueError(f"game-tree verification enumerates all orders; n must be <= {cap}")
    items = list(range(n))
    runner = _algorithm_runner(algorithm, items, k, s_override)
    name = algorithm if isinstance(algorithm, str) else getattr(algorithm, "__name__", "custom")
    report = VerifyReport(name, n, k)
    initial = {rank: 0 for rank in permutations(range(n))}
    answers: list[Answer] = []

    def walk(candidates: dict[tuple[int, ...], int]) -> Counterexample | None:
        report.nodes += 1
        oracle = ScriptedOracle(answers)
        try:
            low, high = runner(oracle)
        except AnswersExhausted as pending:
            a, b = pending.a, pending.b
            for answer in (Answer.FIRST_SMALLER, Answer.FIRST_LARGER):
                said_smaller = answer is Answer.FIRST_SMALLER
                survivors: dict[tuple[int, ...], int] = {}
                for rank, lies in candidates.items():
                    if (rank[a] < rank[b]) == said_smaller:
                        survivors[rank] = lies
                    elif lies < k:
                        survivors[rank] = lies + 1
                if not survivors:
                    continue
                answers.append(answer)
                found = walk(survivors)
                answers.pop()
                if found is not None:
                    return found
            return None
        report.leaves += 1
        for rank in candidates:
            if (low is not None and rank.index(0) != low) or (
                high is not None and rank.index(n - 1) != high
            ):
                surviving = tuple(TotalOrder(r) for r in sorted(candidates))
                return Counterexample(tuple(answers), low, high, surviving)
        return None

    report.counterexample = walk(initial)
    return report


# --- thickness measurement ---------------------------------------------------


@dataclass(frozen=True)
class ThicknessRow:
    sorter: str
    s: int
    trials: int
    min_thickness: int
    mean_thickness: float
    max_thickness: int


def _run_sorter(
    name: str, items: list[int], oracle, constants: CalibratedConstants | None
):
    if name == "mergesort":
        return mergesort(items, oracle)
    if name == "balanced-quicksort":
        return balanced_quicksort(items, oracle, SortBudget.default_for(len(items), constants))
    raise ValueError(f"unknown sorter {name!r}")


def measure_thickness(
    sorter: str,
    s_values,
    trials: int,
    seed: int,
    constants: CalibratedConstants | None = None,
) -> list[ThicknessRow]:
    """Thickness statistics over seeded random inputs, one row per size."""
    rows = []
    for s in s_values:
        observed = []
        for trial in range(trials):
            rng = random.Random(_child_seed(seed, s * 100_000 + trial))
            order = TotalOrder.shuffled(s, rng)
            oracle = TruthfulOracle(order, record=False)
            outcome = _run_sorter(sorter, list(range(s)), oracle, constants)
            observed.append(outcome.graph.thickness())
        rows.append(
            ThicknessRow(
                sorter, s, trials, min(observed), statistics.fmean(observed), max(observed)
            )
        )
    return rows


def thickness_rows_to_csv(rows: list[ThicknessRow]) -> str:
    lines = ["sorter,s,trials,min_thickness,mean_thickness,max_thickness"]
    for r in rows:
        lines.append(
            f"{r.sorter},{r.s},{r.trials},{r.min_thickness},"
            f"{r.mean_thickness:.3f},{r.max_thickness}"
        )
    return "\n".join(lines) + "\n"


# --- flow completion self-test ----------------------------------------------


@dataclass
class FlowSelftestReport:
    exhaustive_checked: int = 0
    random_checked: int = 0
    failures: list[tuple[str, int, str]] = field(default_factory=list)  # (dump, k, problem)

    @property
    def passed(self) -> bool:
        return not self.failures


def _check_completion_instance(graph: OrderedMultigraph, k: int) -> str | None:
    """All completion guarantees for one (graph, k) instance, cross-checked
    against the exhaustive min-cut; returns a description of the first
    violation, or None."""
    s = graph.s
    e = graph.edge_count()
    t = graph.thickness()
    target = (k + 1) * (s - 1) - e - t
    net = build_flow_network(graph, k)
    value, flows = max_flow_integral(net)
    if value != target:
        return f"flow value {value} != (k+1)(s-1)-e-t = {target}"
    split = min_split_cut(graph, k)
    if split != target:
        return f"split-cut minimum {split} != {target}"
    brute = brute_force_min_cut(net)
    if brute != target:
        return f"brute-force min cut {brute} != {target}"
    star = flow_completion(graph, k, flows)
    left, right = star.degree_profile()
    cap = k + 1
    if any(left[j] > cap or right[j] > cap for j in range(1, s + 1)):
        return "flow completion overshot a degree bound"
    if star.defect(k) != 2 * t:
        return f"flow completion defect {star.defect(k)} != 2t = {2 * t}"
    full = complete_edges(graph, k)
    for pair, mult in graph.edges.items():
        if full.multiplicity(*pair) < mult:
            return f"completed graph dropped edge {pair}"
    left, right = full.degree_profile()
    if any(left[j] < cap for j in range(2, s + 1)):
        return "a non-first position is short of left neighbors"
    if any(right[j] < cap for j in range(1, s)):
        return "a non-last position is short of right neighbors"
    limit = (k + 1) * (s - 1) + t
    if full.edge_count() > limit:
        return f"completed graph has {full.edge_count()} edges, limit {limit}"
    return None


def _exhaustive_graphs(s: int, max_multiplicity: int):
    pairs = [(a, b) for a in range(1, s + 1) for b in range(a + 1, s + 1)]
    for mults in product(range(max_multiplicity + 1), repeat=len(pairs)):
        edges = {pair: m for pair, m in zip(pairs, mults) if m}
        yield OrderedMultigraph(s, edges)


def _max_degree(graph: OrderedMultigraph) -> int:
    left, right = graph.degree_profile()
    return max(max(left), max(right))


def _random_feasible_graph(rng: random.Random, s: int, k: int) -> OrderedMultigraph:
    graph = OrderedMultigraph.empty(s)
    left = [0] * (s + 1)
    right = [0] * (s + 1)
    cap = k + 1
    for _ in range(rng.randint(0, cap * (s - 1))):
        a = rng.randint(1, s - 1)
        b = rng.randint(a + 1, s)
        if right[a] < cap and left[b] < cap:
            graph.add(a, b)
            right[a] += 1
            left[b] += 1
    return graph


def flow_selftest(
    max_s: int = 8,
    max_k: int = 3,
    random_instances: int = 10_000,
    seed: int = 0,
    exhaustive_s: int = 5,
    exhaustive_k: int = 2,
    exhaustive_multiplicity: int = 2,
) -> FlowSelftestReport:
    """Exhaustive small instances plus seeded random ones, all cross-checked
    against the brute-force min-cut."""
    if exhaustive_s > 5 or max_s > 8:
        raise ValueError("brute-force min-cut enumeration is capped at s=5 exhaustive, s=8 random")
    report = FlowSelftestReport()
    for s in range(2, exhaustive_s + 1):
        for graph in _exhaustive_graphs(s, exhaustive_multiplicity):
            worst = _max_degree(graph)
            for k in range(exhaustive_k + 1):
                if worst > k + 1:
                    continue
                problem = _check_completion_instance(graph, k)
                report.exhaustive_checked += 1
                if problem is not None:
                    report.failures.append((graph.to_text(), k, problem))
    rng = random.Random(seed)
    for _ in range(random_instances):
        s = rng.randint(2, max_s)
        k = rng.randint(0, max_k)
        graph = _random_feasible_graph(rng, s, k)
        problem = _check_completion_instance(graph, k)
        report.random_checked += 1
        if problem is not None:
            report.failures.append((graph.to_text(), k, problem))
    return report


# --- calibration --------------------------------------------------------------


@dataclass
class CalibrationResult:
    constants: CalibratedConstants
    max_sort_ratio: float  # observed quicksort comparisons / budget formula
    max_thickness_ratio: float  # observed quicksort thickness / s
    details: list[tuple[int, int, int]] = field(default_factory=list)  # (s, max comps, max t)


def calibrate(
    *,
    sizes=(16, 64, 256, 1024, 4096),
    trials: int = 30,
    seed: int = 0,
    exhaustive_limit: int = 8,
    out_path: str | Path | None = None,
) -> CalibrationResult:
    """Measure truthful worst cases and freeze the budget/thickness constants.

    Small sizes are swept over every permutation; larger sizes over seeded
    random permutations.  The emitted budget constants are the defaults when
    those already cover everything observed, otherwise the log coefficient is
    raised until they do.
    """
    max_comps: dict[int, int] = {}
    max_thick: dict[int, int] = {}

    def observe(s: int, items: list[int], order: TotalOrder) -> None:
        oracle = TruthfulOracle(order, record=False)
        outcome = balanced_quicksort(items, oracle, SortBudget(10**9))
        max_comps[s] = max(max_comps.get(s, 0), outcome.comparisons)
        max_thick[s] = max(max_thick.get(s, 0), outcome.graph.thickness())

    for s in range(2, exhaustive_limit + 1):
        items = list(range(s))
        for ranks in permutations(range(s)):
            observe(s, items, TotalOrder(ranks))
    for s in sizes:
        items = list(range(s))
        for trial in range(trials):
            rng = random.Random(_child_seed(seed, s * 1_000_000 + trial))
            observe(s, items, TotalOrder.shuffled(s, rng))

    log_coefficient = DEFAULT.sort_budget_log
    linear = DEFAULT.sort_budget_linear
    while True:
        candidate = CalibratedConstants(linear, log_coefficient, DEFAULT.thickness_ct)
        if all(
            max_comps[s] <= SortBudget.default_for(s, candidate).max_comparisons
            for s in max_comps
        ):
            break
        log_coefficient += 1

    sort_ratios = [
        max_comps[s] / SortBudget.default_for(s).max_comparisons for s in max_comps
    ]
    thickness_ratios = [max_thick[s] / s for s in max_thick if s > 2]
    ct = max(2, math.ceil(max(thickness_ratios)) + 1)
    constants = CalibratedConstants(linear, log_coefficient, ct)
    result = CalibrationResult(
        constants,
        max(sort_ratios),
        max(thickness_ratios),
        [(s, max_comps[s], max_thick[s]) for s in sorted(max_comps)],
    )
    if out_path is not None:
        from .config import dump_constants

        dump_constants(constants, out_path)
    return result
