# seeding/model/optimizer.py

from __future__ import annotations

import logging
import math
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..core.config import settings
from ..core.errors import (
    BudgetTooLarge,
    DegenerateType,
    InvalidArgument,
    MarginalCostTooLow,
    PhaseViolation,
    UnboundedSeeding,
)
from .kernel import Kernel, Scenario, TypeSpace
from .percolation import (
    PercolationProfile,
    SeedingPlan,
    build_profile,
    designer_utility,
    marginal_utility,
    solve_giant_fixed_point,
    utility_of_counts,
)

logger = logging.getLogger(__name__)

# Relative slack under which two cost ratios count as a tie.
_TIE_RTOL = 1e-12


# -----------------------------
# Pydantic models
# -----------------------------

class OptimizationResult(BaseModel):
    """
    Single-type seeding plan: which type to seed, the relaxed and rounded
    counts, and the marginal utility of each successive seed.
    """
    model_config = ConfigDict(frozen=True)

    best_type: int
    q_star: float
    relaxed_count: float
    integer_count: int
    plan: SeedingPlan
    utility_analytic: float
    marginal_schedule: List[Tuple[int, float]]
    leading_term: float
    relaxed_utility: float
    rounding_gap_bound: float


# -----------------------------
# Helper functions
# -----------------------------

def _er_constants(kg: float, kb: float) -> Tuple[float, float, float]:
    """Giant fraction y, C^G and C^B of a one-type network."""
    if not kb < 1.0 < kg:
        raise PhaseViolation(f"need kappa_bad < 1 < kappa_good, got {kb!r} and {kg!r}")
    types = TypeSpace(labels=["all"], mu=[1.0])
    kernel = Kernel(entries=[[kg]])
    y = float(solve_giant_fixed_point(kernel, types)[0])
    c_good = 1.0 / (1.0 - (1.0 - y) * kg)
    c_bad = 1.0 / (1.0 - kb)
    return y, c_good, c_bad


def _allocations(size: int, budget: int) -> Iterator[Tuple[int, ...]]:
    """Every non-negative integer vector of length ``size`` with sum <= budget, lexicographically."""
    if size == 1:
        for k in range(budget + 1):
            yield (k,)
        return
    for k in range(budget + 1):
        for rest in _allocations(size - 1, budget - k):
            yield (k, *rest)


# -----------------------------
# Erdos-Renyi closed form
# -----------------------------

def er_optimal_seed_count(kg: float, kb: float, lam: float, n: int) -> int:
    """
    Closed-form optimal number of seeds for a single-type network:
    ceil([log n + 2 log y - log(lam/(1-kb) - (1-y)/(1-(1-y)kg))] / log(1/(1-y))).
    """
    y, c_good, c_bad = _er_constants(kg, kb)
    margin = lam * c_bad - (1.0 - y) * c_good
    if margin <= 0:
        raise MarginalCostTooLow(
            f"marginal cost {lam * c_bad:.6g} never exceeds the small-component gain "
            f"{(1.0 - y) * c_good:.6g}; seeding is unbounded"
        )
    bracket = math.log(n) + 2.0 * math.log(y) - math.log(margin)
    if bracket <= 0:
        return 0
    return math.ceil(bracket / -math.log1p(-y))


def er_marginal_scan(kg: float, kb: float, lam: float, n: int) -> int:
    """
    Count seeds one at a time while the marginal benefit of the next seed
    is at least its marginal cost.
    """
    y, c_good, c_bad = _er_constants(kg, kb)
    cost = lam * c_bad
    if (1.0 - y) * c_good >= cost:
        raise MarginalCostTooLow("marginal benefit never drops below marginal cost")
    seeds = 0
    while seeds < n and y * (1.0 - y) ** seeds * y * n + (1.0 - y) * c_good >= cost:
        seeds += 1
    return seeds


# -----------------------------
# General inhomogeneous case
# -----------------------------

def seed_cost(profile: PercolationProfile, s: Scenario) -> np.ndarray:
    """Net expected cost of one seed of each type: lam C^B(i) - (1 - y(i)) C^G(i)."""
    y = profile.y()
    return s.lam * np.asarray(profile.c_bad) - (1.0 - y) * np.asarray(profile.c_good)


def _require_positive_cost(profile: PercolationProfile, s: Scenario) -> np.ndarray:
    cost = seed_cost(profile, s)
    bad = np.flatnonzero(cost <= 0)
    if bad.size:
        raise UnboundedSeeding(
            f"types {bad.tolist()} have non-positive seed cost {cost[bad].tolist()}: "
            "their marginal utility stays positive, so no interior optimum exists"
        )
    return cost


def q_star(profile: PercolationProfile, s: Scenario) -> float:
    """Optimal probability that at least one seed lands in the giant component."""
    cost = _require_positive_cost(profile, s)
    y = profile.y()
    scale = y * profile.y_aggregate * s.n
    with np.errstate(divide="ignore"):
        candidates = np.where(scale > 0, 1.0 - cost / np.where(scale > 0, scale, 1.0), -np.inf)
    q = float(np.max(candidates))
    return min(max(q, 0.0), math.nextafter(1.0, 0.0))


def best_type(profile: PercolationProfile, s: Scenario) -> int:
    """
    Type with the lowest seed cost per unit of log-probability of missing
    the giant component. Ties go to the lowest index.
    """
    cost = _require_positive_cost(profile, s)
    y = profile.y()
    ratios = np.empty(profile.size)
    for j in range(profile.size):
        if y[j] >= 1.0:
            # one seed hits the giant component surely
            ratios[j] = 0.0
        elif y[j] <= 0.0:
            ratios[j] = math.inf
        else:
            ratios[j] = cost[j] / -math.log1p(-y[j])

    if not np.isfinite(ratios).any():
        raise DegenerateType("no type reaches the giant component")
    best = float(np.min(ratios))
    return int(np.flatnonzero(ratios <= best + _TIE_RTOL * abs(best))[0])


def leading_term_seed_count(profile: PercolationProfile, s: Scenario, type_index: Optional[int] = None) -> float:
    """Non-vanishing part of the optimal count: log n / log(1/(1 - y(j)))."""
    j = best_type(profile, s) if type_index is None else type_index
    return math.log(s.n) / -math.log1p(-profile.y_by_type[j])


def relaxed_plan(profile: PercolationProfile, s: Scenario) -> OptimizationResult:
    """
    Seed only the best type until the giant component is hit with
    probability q*, then round the relaxed count up.
    """
    j = best_type(profile, s)
    q = q_star(profile, s)
    y_j = profile.y_by_type[j]

    if q <= 0.0:
        relaxed = 0.0
    elif y_j >= 1.0:
        relaxed = 1.0
    else:
        relaxed = math.log1p(-q) / math.log1p(-y_j)
    integer = min(math.ceil(relaxed), s.n)

    plan = SeedingPlan.single(j, integer, profile.size)
    schedule = marginal_schedule(profile, s, j, integer + settings.SCHEDULE_EXTRA)
    result = OptimizationResult(
        best_type=j,
        q_star=q,
        relaxed_count=relaxed,
        integer_count=integer,
        plan=plan,
        utility_analytic=designer_utility(plan, profile, s),
        marginal_schedule=schedule,
        leading_term=leading_term_seed_count(profile, s, j) if y_j < 1.0 else 1.0,
        relaxed_utility=designer_utility(SeedingPlan.single(j, min(relaxed, s.n), profile.size), profile, s),
        rounding_gap_bound=float(seed_cost(profile, s)[j]),
    )
    logger.info(
        "%s: seed type %d, q*=%.9g, relaxed=%.6g, integer=%d",
        s.name, j, q, relaxed, integer,
    )
    return result


def marginal_schedule(profile: PercolationProfile, s: Scenario, type_index: int, seeds: int) -> List[Tuple[int, float]]:
    """(k, marginal utility of the k-th seed of ``type_index``) for k = 1..seeds."""
    y_j = profile.y_by_type[type_index]
    schedule = []
    for k in range(1, min(seeds, s.n) + 1):
        q = 1.0 - (1.0 - y_j) ** (k - 1)
        schedule.append((k, marginal_utility(type_index, q, profile, s)))
    return schedule


def brute_force_plan(s: Scenario, profile: PercolationProfile, budget: int) -> SeedingPlan:
    """
    Exhaustive search over every integer allocation with at most ``budget``
    seeds; the lexicographically first maximiser wins.
    """
    if profile.size > settings.BRUTE_FORCE_MAX_TYPES or budget > settings.BRUTE_FORCE_MAX_BUDGET:
        raise BudgetTooLarge(
            f"exhaustive search limited to {settings.BRUTE_FORCE_MAX_TYPES} types and "
            f"budget {settings.BRUTE_FORCE_MAX_BUDGET}, got {profile.size} and {budget}"
        )
    if budget < 0:
        raise InvalidArgument(f"budget must be >= 0, got {budget}")

    budget = min(budget, s.n)
    allocations = np.array(list(_allocations(profile.size, budget)), dtype=float)
    utilities = utility_of_counts(allocations, profile, s)
    best = allocations[int(np.argmax(utilities))]
    logger.debug("brute force over %d allocations -> %s", len(allocations), best)
    return SeedingPlan(counts=[int(c) for c in best])


def scaling_sweep(s: Scenario, n_values: Sequence[int], profile: Optional[PercolationProfile] = None) -> List[Tuple[int, int]]:
    """Integer seed count for each network size in ``n_values``."""
    n_values = list(n_values)
    if not n_values:
        raise InvalidArgument("sweep needs at least one network size")
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise InvalidArgument(f"network sizes must be strictly increasing, got {n_values}")
    if n_values[0] < 1:
        raise InvalidArgument("network sizes must be positive")

    # y, C^B and C^G do not depend on n
    if profile is None:
        profile = build_profile(s)
    return [(n, relaxed_plan(profile, s.model_copy(update={"n": n})).integer_count) for n in n_values]


def fitted_log_slope(points: Sequence[Tuple[int, int]]) -> float:
    """Least-squares slope of seed count against log n."""
    if len(points) < 2:
        raise InvalidArgument("need at least two sweep points to fit a slope")
    log_n = np.log([n for n, _ in points])
    counts = np.asarray([c for _, c in points], dtype=float)
    return float(np.polyfit(log_n, counts, 1)[0])
