# seeding/model/percolation.py

from __future__ import annotations

import logging
import math
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from ..core.config import settings
from ..core.errors import (
    DegenerateSolution,
    DimensionMismatch,
    InsufficientNodes,
    NoConvergence,
    SingularSystem,
)
from .kernel import (
    Kernel,
    MeanOffspringMatrix,
    Phase,
    Scenario,
    TypeSpace,
    classify_phase,
    mean_offspring,
    spectral_radius,
)

logger = logging.getLogger(__name__)

# Tolerance for the "every component contains its root" check on solved sizes.
_SIZE_TOL = 1e-9


# -----------------------------
# Pydantic models
# -----------------------------

class PercolationProfile(BaseModel):
    """
    Per-type giant-component probabilities y(i), their mu-weighted aggregate,
    expected small-component sizes in both states and the dual kernel.
    """
    model_config = ConfigDict(frozen=True)

    y_by_type: List[float]
    y_aggregate: float
    c_bad: List[float]
    c_good: List[float]
    dual: MeanOffspringMatrix

    @model_validator(mode="after")
    def _check(self) -> "PercolationProfile":
        k = len(self.y_by_type)
        if len(self.c_bad) != k or len(self.c_good) != k or self.dual.size != k:
            raise DimensionMismatch("profile vectors must all have one entry per type")
        if any(not 0.0 <= y <= 1.0 for y in self.y_by_type) or not 0.0 <= self.y_aggregate <= 1.0:
            raise DegenerateSolution(f"giant-component probabilities outside [0, 1]: {self.y_by_type}")
        if any(c < 1.0 - _SIZE_TOL for c in (*self.c_bad, *self.c_good)):
            raise SingularSystem("expected component sizes must be at least 1")
        return self

    @property
    def size(self) -> int:
        return len(self.y_by_type)

    def y(self) -> np.ndarray:
        return np.asarray(self.y_by_type, dtype=float)


class SeedingPlan(BaseModel):
    """
    Number of seeds placed on each type. Relaxed plans may hold real
    counts; final plans hold integers.
    """
    model_config = ConfigDict(frozen=True)

    counts: List[float]

    @model_validator(mode="after")
    def _check(self) -> "SeedingPlan":
        if any(not math.isfinite(c) or c < 0 for c in self.counts):
            raise DimensionMismatch(f"seed counts must be finite and >= 0, got {self.counts}")
        return self

    @classmethod
    def empty(cls, size: int) -> "SeedingPlan":
        return cls(counts=[0] * size)

    @classmethod
    def single(cls, type_index: int, count: float, size: int) -> "SeedingPlan":
        counts: List[float] = [0] * size
        counts[type_index] = count
        return cls(counts=counts)

    @property
    def total(self) -> float:
        return math.fsum(self.counts)

    @property
    def is_integer(self) -> bool:
        return all(float(c).is_integer() for c in self.counts)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=float)


# -----------------------------
# Helper functions
# -----------------------------

def _check_vector(values: Sequence[float], types: TypeSpace, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.shape != (types.size,):
        raise DimensionMismatch(f"{what} has {arr.size} entries but there are {types.size} types")
    return arr


def _plan_counts(plan: SeedingPlan, profile: PercolationProfile, s: Scenario) -> np.ndarray:
    counts = plan.as_array()
    if counts.shape != (profile.size,):
        raise DimensionMismatch(f"plan has {counts.size} entries but there are {profile.size} types")
    if plan.total > s.n:
        raise InsufficientNodes(f"plan seeds {plan.total:g} agents but the network has {s.n}")
    return counts


# -----------------------------
# Operations
# -----------------------------

def solve_giant_fixed_point(
    kernel_good: Kernel,
    types: TypeSpace,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
) -> np.ndarray:
    """
    Maximal solution of 1 - y(i) = exp(-sum_j kappa(i, j) y(j) mu(j)).

    Iterates from y = 1 so the trivial fixed point y = 0 is never selected
    while a positive one exists. Below and at criticality y = 0 is the only
    fixed point and is returned without iterating.
    """
    tol = settings.FIXED_POINT_TOL if tol is None else tol
    max_iter = settings.FIXED_POINT_MAX_ITER if max_iter is None else max_iter

    m = mean_offspring(kernel_good, types).as_array()
    if classify_phase(spectral_radius(MeanOffspringMatrix.from_array(m))) is not Phase.SUPERCRITICAL:
        return np.zeros(types.size)

    y = np.ones(types.size)
    for it in range(1, max_iter + 1):
        y_next = -np.expm1(-(m @ y))
        change = float(np.max(np.abs(y_next - y)))
        y = y_next
        if change < tol:
            break
    else:
        raise NoConvergence(f"giant-component fixed point did not converge in {max_iter} iterations")

    residual = float(np.max(np.abs(1.0 - y - np.exp(-(m @ y)))))
    if residual >= 10 * tol:
        raise NoConvergence(f"fixed-point residual {residual:.3g} above {10 * tol:.3g}")

    if np.all(y < math.sqrt(tol)):
        raise DegenerateSolution("supercritical kernel but every y(i) is zero")

    logger.debug("giant fixed point: %d iterations, residual %.3g", it, residual)
    return y


def aggregate_giant_fraction(y_by_type: Sequence[float], types: TypeSpace) -> float:
    y = _check_vector(y_by_type, types, "y_by_type")
    return float(y @ types.as_array())


def small_component_sizes(m: MeanOffspringMatrix, residual_tol: Optional[float] = None) -> np.ndarray:
    """
    Expected size of the component containing an agent of each type when the
    branching operator ``m`` is subcritical: c = (I - M)^-1 1.
    """
    residual_tol = settings.LINEAR_RESIDUAL_TOL if residual_tol is None else residual_tol

    rho = spectral_radius(m)
    if rho >= 1.0:
        raise SingularSystem(f"spectral radius {rho:.12g} >= 1, component sizes are not finite")

    a = np.eye(m.size) - m.as_array()
    ones = np.ones(m.size)
    try:
        c = np.linalg.solve(a, ones)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"I - M is singular: {exc}") from exc

    residual = float(np.max(np.abs(a @ c - ones)))
    if residual > residual_tol or np.any(c < 1.0 - _SIZE_TOL):
        raise SingularSystem(f"component-size solve is unreliable (residual {residual:.3g}, sizes {c})")
    return c


def dual_kernel(kernel_good: Kernel, y_by_type: Sequence[float], types: TypeSpace) -> MeanOffspringMatrix:
    """Branching operator of the agents left outside the giant component."""
    y = _check_vector(y_by_type, types, "y_by_type")
    if kernel_good.size != types.size:
        raise DimensionMismatch(f"kernel is {kernel_good.size}x{kernel_good.size} but there are {types.size} types")
    return MeanOffspringMatrix.from_array(kernel_good.as_array() * ((1.0 - y) * types.as_array())[None, :])


def build_profile(s: Scenario, tol: Optional[float] = None) -> PercolationProfile:
    y = solve_giant_fixed_point(s.kernel_good, s.types, tol=tol)
    dual = dual_kernel(s.kernel_good, y, s.types)
    c_bad = small_component_sizes(mean_offspring(s.kernel_bad, s.types))
    c_good = small_component_sizes(dual)

    profile = PercolationProfile(
        y_by_type=y.tolist(),
        y_aggregate=aggregate_giant_fraction(y, s.types),
        c_bad=c_bad.tolist(),
        c_good=c_good.tolist(),
        dual=dual,
    )
    logger.info("profile for %s: y=%.6g, C^B=%s, C^G=%s", s.name, profile.y_aggregate, c_bad, c_good)
    return profile


def expected_adoption_bad(plan: SeedingPlan, profile: PercolationProfile, s: Scenario) -> float:
    """Every seed collects one expected small component of its type."""
    counts = _plan_counts(plan, profile, s)
    return float(counts @ np.asarray(profile.c_bad))


def expected_adoption_good(plan: SeedingPlan, profile: PercolationProfile, s: Scenario) -> float:
    """
    Giant component reached unless every seed misses it, plus the small
    components of the seeds that miss.
    """
    counts = _plan_counts(plan, profile, s)
    y = profile.y()
    miss = float(np.prod(np.power(1.0 - y, counts)))
    giant = (1.0 - miss) * profile.y_aggregate * s.n
    small = float(counts @ ((1.0 - y) * np.asarray(profile.c_good)))
    return giant + small


def designer_utility(plan: SeedingPlan, profile: PercolationProfile, s: Scenario) -> float:
    return expected_adoption_good(plan, profile, s) - s.lam * expected_adoption_bad(plan, profile, s)


def utility_of_counts(counts: np.ndarray, profile: PercolationProfile, s: Scenario) -> np.ndarray:
    """
    designer_utility for many plans at once, one plan per row of ``counts``.
    """
    counts = np.atleast_2d(np.asarray(counts, dtype=float))
    if counts.shape[1] != profile.size:
        raise DimensionMismatch(f"plans have {counts.shape[1]} entries but there are {profile.size} types")
    y = profile.y()
    miss = np.prod(np.power(1.0 - y, counts), axis=1)
    per_seed = (1.0 - y) * np.asarray(profile.c_good) - s.lam * np.asarray(profile.c_bad)
    return (1.0 - miss) * profile.y_aggregate * s.n + counts @ per_seed


def marginal_utility(type_index: int, q: float, profile: PercolationProfile, s: Scenario) -> float:
    """
    Gain from one more seed of ``type_index`` when the giant component is
    already hit with probability ``q``.
    """
    y_i = profile.y_by_type[type_index]
    return (
        y_i * (1.0 - q) * profile.y_aggregate * s.n
        + (1.0 - y_i) * profile.c_good[type_index]
        - s.lam * profile.c_bad[type_index]
    )


def calibrate_er_kernel(target_y: float) -> float:
    """One-type good kernel whose giant component holds a ``target_y`` fraction."""
    if not 0.0 < target_y < 1.0:
        raise DegenerateSolution(f"target giant fraction must lie in (0, 1), got {target_y}")
    return -math.log1p(-target_y) / target_y
