"""Exact small-instance solver and randomized property harness.

Greedy selection carries a (1 - 1/e) approximation guarantee for the
monotone submodular objective it maximizes.  This module certifies an
installed build against that theory: a brute-force enumerator computes
the true optimum on small ground sets, ``check_bound`` compares greedy
output against it over randomized instances, and ``property_suite``
probes monotonicity, submodularity, marginal-gain consistency and
empty-set normalization directly.

Random instances mirror the real pipeline's regime: semantic rows drawn
uniformly on the unit sphere (via normalized Gaussians), relevance
scores uniform on [0, 1].
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass

import numpy as np

from .errors import BoundViolationError, BudgetError, InstanceTooLargeError
from .selection import (
    PRESET_NAMES,
    CoverageState,
    Preset,
    make_preset,
    marginal_gain,
    objective_value,
    select,
)

# Enumeration is O(2^N); past this the oracle refuses rather than hangs.
MAX_EXACT_N = 20

GREEDY_RATIO_BOUND = 1.0 - 1.0 / math.e
RATIO_TOLERANCE = 1e-9


@dataclass(frozen=True)
class OracleReport:
    """One greedy-vs-optimal comparison on a small instance."""

    n: int
    k: int
    preset: str
    optimal_value: float
    greedy_value: float
    ratio: float
    optimal_set: tuple[int, ...]


@dataclass(frozen=True)
class RandomInstance:
    """A randomized selection problem small enough for exact search."""

    index: int
    scores: np.ndarray
    values: np.ndarray
    k: int
    preset: Preset


def brute_force_optimum(
    r,
    sim,
    k: int,
    preset: Preset,
    normalize_coverage: bool = False,
) -> tuple[float, tuple[int, ...]]:
    """Exact maximum of F over all position subsets of size <= k.

    Searching size <= k rather than exactly k keeps the check independent
    of the monotonicity argument that makes full budgets optimal.  Among
    subsets attaining the maximum, returns the lexicographically smallest
    (as a sorted position tuple).

    Raises:
        InstanceTooLargeError: more than 20 candidates.
        BudgetError: ``k < 1``.
    """
    scores = np.asarray(getattr(r, "scores", r), dtype=np.float64)
    n = scores.shape[0]
    if n > MAX_EXACT_N:
        raise InstanceTooLargeError(f"exact search handles at most {MAX_EXACT_N} candidates, got {n}")
    if k < 1:
        raise BudgetError(f"budget must be a positive integer, got {k!r}")
    best_value = 0.0
    best_set: tuple[int, ...] = ()
    for size in range(1, min(k, n) + 1):
        for subset in itertools.combinations(range(1, n + 1), size):
            value = objective_value(subset, r, sim, preset, normalize_coverage)
            if value > best_value or (value == best_value and subset < best_set):
                best_value = value
                best_set = subset
    return best_value, best_set


def random_instances(
    seed: int,
    count: int,
    max_n: int = 12,
    max_k: int = 4,
    presets: Iterable[Preset] | None = None,
    min_n: int = 1,
) -> Iterator[RandomInstance]:
    """Yield ``count`` seeded random instances, cycling through presets."""
    if presets is None:
        presets = tuple(make_preset(name) for name in PRESET_NAMES)
    else:
        presets = tuple(presets)
    rng = np.random.default_rng(seed)
    for index in range(count):
        n = int(rng.integers(min_n, max_n + 1))
        k = int(rng.integers(1, max_k + 1))
        dim = int(rng.integers(2, 9))
        rows = rng.normal(size=(n, dim))
        rows /= np.linalg.norm(rows, axis=1, keepdims=True)
        values = rows @ rows.T
        scores = rng.uniform(0.0, 1.0, size=n)
        yield RandomInstance(
            index=index,
            scores=scores,
            values=values,
            k=min(k, n),
            preset=presets[index % len(presets)],
        )


def check_bound(
    instances: Iterable[RandomInstance],
    trials: int | None = None,
) -> list[OracleReport]:
    """Compare greedy to the exact optimum on each instance.

    Every ratio must land in [1 - 1/e - 1e-9, 1 + 1e-9]; the first
    violation aborts the run.

    Raises:
        BoundViolationError: a ratio fell outside the guaranteed band.
    """
    if trials is not None:
        instances = itertools.islice(instances, trials)
    reports: list[OracleReport] = []
    for inst in instances:
        optimal_value, optimal_set = brute_force_optimum(inst.scores, inst.values, inst.k, inst.preset)
        result = select(inst.scores, inst.values, inst.k, inst.preset)
        greedy_value = result.objective
        ratio = 1.0 if optimal_value == 0.0 else greedy_value / optimal_value
        report = OracleReport(
            n=int(inst.scores.shape[0]),
            k=int(inst.k),
            preset=inst.preset.name,
            optimal_value=float(optimal_value),
            greedy_value=float(greedy_value),
            ratio=float(ratio),
            optimal_set=optimal_set,
        )
        if ratio < GREEDY_RATIO_BOUND - RATIO_TOLERANCE or ratio > 1.0 + RATIO_TOLERANCE:
            raise BoundViolationError(
                f"instance {inst.index} (n={report.n}, k={report.k}, preset={report.preset}): "
                f"greedy/optimal ratio {ratio!r} outside [{GREEDY_RATIO_BOUND}, 1]"
            )
        reports.append(report)
    return reports


def oracle_report_doc(report: OracleReport) -> dict:
    return {
        "n": report.n,
        "k": report.k,
        "preset": report.preset,
        "optimal_value": report.optimal_value,
        "greedy_value": report.greedy_value,
        "ratio": report.ratio,
        "optimal_set": [int(p) for p in report.optimal_set],
    }


@dataclass(frozen=True)
class PropertySummary:
    """Outcome of a randomized property run; failures reported, not thrown."""

    trials: int
    checks: dict[str, int]
    failures: int
    first_counterexample: str | None

    @property
    def passed(self) -> bool:
        return self.failures == 0


def _random_subset(rng, positions, max_size) -> list[int]:
    size = int(rng.integers(0, max_size + 1))
    if size == 0:
        return []
    return sorted(int(p) for p in rng.choice(positions, size=size, replace=False))


def _state_for(subset, values, n) -> CoverageState:
    state = CoverageState(n)
    for p in subset:
        state.update(p, values)
    return state


def property_suite(seed: int, trials: int) -> PropertySummary:
    """Probe the objective's structural guarantees on random instances.

    Per trial: C of the empty set is exactly zero; F is monotone under
    set growth (tolerance 1e-6); marginal gains diminish from a subset A
    to a superset B (tolerance 1e-6); and the incremental gain formula
    matches a direct F(S + {e}) - F(S) recomputation (tolerance 1e-5).
    """
    rng = np.random.default_rng(seed)
    checks = {"empty_set_zero": 0, "monotonicity": 0, "submodularity": 0, "marginal_consistency": 0}
    failures = 0
    first: str | None = None

    def record(trial: int, name: str, detail: str) -> None:
        nonlocal failures, first
        failures += 1
        if first is None:
            first = f"trial {trial}: {name}: {detail}"

    for trial, inst in enumerate(random_instances(seed + 1, trials, max_n=10, max_k=4)):
        n = inst.scores.shape[0]
        positions = np.arange(1, n + 1)
        preset = inst.preset

        checks["empty_set_zero"] += 1
        empty = objective_value((), inst.scores, inst.values, preset)
        if empty != 0.0:
            record(trial, "empty_set_zero", f"F(empty) = {empty!r}")

        small = _random_subset(rng, positions, n)
        extra = _random_subset(rng, positions, n)
        union = sorted(set(small) | set(extra))
        checks["monotonicity"] += 1
        f_small = objective_value(small, inst.scores, inst.values, preset)
        f_union = objective_value(union, inst.scores, inst.values, preset)
        if f_union < f_small - 1e-6:
            record(trial, "monotonicity", f"F({union}) = {f_union!r} < F({small}) = {f_small!r}")

        big = _random_subset(rng, positions, n - 1)
        sub = [p for p in big if rng.random() < 0.5]
        outside = [int(p) for p in positions if p not in big]
        checks["submodularity"] += 1
        e = int(outside[int(rng.integers(0, len(outside)))])
        state_a = _state_for(sub, inst.values, n)
        state_b = _state_for(big, inst.values, n)
        gain_a = marginal_gain(e, state_a, inst.scores, inst.values, preset)
        gain_b = marginal_gain(e, state_b, inst.scores, inst.values, preset)
        if gain_a < gain_b - 1e-6:
            record(trial, "submodularity", f"gain({e}|A) = {gain_a!r} < gain({e}|B) = {gain_b!r}")

        checks["marginal_consistency"] += 1
        base = _random_subset(rng, positions, n - 1)
        state = _state_for(base, inst.values, n)
        f_base = objective_value(base, inst.scores, inst.values, preset)
        for cand in positions:
            cand = int(cand)
            if cand in base:
                continue
            inc = marginal_gain(cand, state, inst.scores, inst.values, preset)
            direct = objective_value(sorted(base + [cand]), inst.scores, inst.values, preset) - f_base
            if abs(inc - direct) > 1e-5:
                record(
                    trial,
                    "marginal_consistency",
                    f"gain({cand}|{base}) = {inc!r} vs recomputed {direct!r}",
                )
                break

    return PropertySummary(trials=trials, checks=checks, failures=failures, first_counterexample=first)


def property_summary_doc(summary: PropertySummary) -> dict:
    return {
        "trials": summary.trials,
        "checks": dict(summary.checks),
        "failures": summary.failures,
        "first_counterexample": summary.first_counterexample,
        "passed": summary.passed,
    }
