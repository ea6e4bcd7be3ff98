# seeding/model/kernel.py

from __future__ import annotations

import logging
import math
from enum import Enum
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.config import settings
from ..core.errors import (
    AsymmetricKernel,
    BadProportions,
    DimensionMismatch,
    InvalidKernel,
    NoConvergence,
    PhaseViolation,
)

logger = logging.getLogger(__name__)


# -----------------------------
# Pydantic models
# -----------------------------

class TypeSpace(BaseModel):
    """
    Finite set of agent types with their population proportions.
    """
    model_config = ConfigDict(frozen=True)

    labels: List[str]
    mu: List[float]

    @model_validator(mode="after")
    def _check(self) -> "TypeSpace":
        if not self.labels:
            raise DimensionMismatch("type space needs at least one type")
        if len(self.mu) != len(self.labels):
            raise DimensionMismatch(
                f"{len(self.labels)} labels but {len(self.mu)} proportions"
            )
        if any(not label for label in self.labels):
            raise DimensionMismatch("type labels must be non-empty")
        if len(set(self.labels)) != len(self.labels):
            raise DimensionMismatch(f"type labels must be unique, got {self.labels}")
        if any(not math.isfinite(m) or m < 0 for m in self.mu):
            raise BadProportions(f"proportions must be non-negative, got {self.mu}")
        total = math.fsum(self.mu)
        if abs(total - 1.0) > settings.MU_TOL:
            raise BadProportions(f"proportions must sum to 1, got {total!r}")
        return self

    @property
    def size(self) -> int:
        return len(self.labels)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.mu, dtype=float)


class Kernel(BaseModel):
    """
    Symmetric matrix of contact rates kappa(i, j), indexed in TypeSpace order.
    """
    model_config = ConfigDict(frozen=True)

    entries: List[List[float]]

    @model_validator(mode="after")
    def _check(self) -> "Kernel":
        k = len(self.entries)
        if k == 0 or any(len(row) != k for row in self.entries):
            raise DimensionMismatch(f"kernel must be square, got rows of {[len(r) for r in self.entries]}")
        for i, row in enumerate(self.entries):
            for j, value in enumerate(row):
                if not math.isfinite(value) or value < 0:
                    raise InvalidKernel(f"kernel entry ({i}, {j}) = {value!r} must be finite and >= 0")
                if value != self.entries[j][i]:
                    raise AsymmetricKernel(
                        f"kernel entry ({i}, {j}) = {value!r} differs from ({j}, {i}) = {self.entries[j][i]!r}"
                    )
        return self

    @property
    def size(self) -> int:
        return len(self.entries)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.entries, dtype=float)


class MeanOffspringMatrix(BaseModel):
    """
    M(i, j) = kappa(i, j) * mu(j): expected number of type-j neighbours of a
    type-i agent. Its Perron root decides the phase.
    """
    model_config = ConfigDict(frozen=True)

    entries: List[List[float]]

    @classmethod
    def from_array(cls, array: np.ndarray) -> "MeanOffspringMatrix":
        return cls(entries=np.asarray(array, dtype=float).tolist())

    @property
    def size(self) -> int:
        return len(self.entries)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.entries, dtype=float)


class Phase(str, Enum):
    SUBCRITICAL = "subcritical"
    CRITICAL = "critical"
    SUPERCRITICAL = "supercritical"


class Scenario(BaseModel):
    """
    Everything the designer knows: types, the two kernels, the weight on the
    bad state and the network size.
    """
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    name: str = "scenario"
    types: TypeSpace
    kernel_good: Kernel
    kernel_bad: Kernel
    lam: float = Field(alias="lambda", gt=0)
    n: int = Field(ge=1)


# -----------------------------
# Operations
# -----------------------------

def mean_offspring(k: Kernel, t: TypeSpace) -> MeanOffspringMatrix:
    """Weight each column of the kernel by the proportion of its type."""
    if k.size != t.size:
        raise DimensionMismatch(f"kernel is {k.size}x{k.size} but there are {t.size} types")
    return MeanOffspringMatrix.from_array(k.as_array() * t.as_array()[None, :])


def spectral_radius(
    m: MeanOffspringMatrix,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    fallback: bool = True,
) -> float:
    """
    Perron root of a non-negative matrix by power iteration from the all-ones
    vector, stopping when successive Rayleigh quotients differ by < tol.

    With ``fallback`` a non-converging iteration is resolved by a dense
    eigensolve; without it NoConvergence is raised.
    """
    tol = settings.SPECTRAL_TOL if tol is None else tol
    max_iter = settings.SPECTRAL_MAX_ITER if max_iter is None else max_iter

    a = m.as_array()
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"matrix must be square, got shape {a.shape}")
    if (a < 0).any():
        raise InvalidKernel("matrix must be non-negative")
    if not a.any():
        return 0.0

    # Iterate with M + I: same Perron vector, and strictly dominant even
    # when M is periodic.
    shifted = a + np.eye(a.shape[0])
    x = np.ones(a.shape[0])
    x /= np.linalg.norm(x)
    rho = float(x @ shifted @ x)

    for it in range(1, max_iter + 1):
        y = shifted @ x
        x = y / np.linalg.norm(y)
        rho_new = float(x @ shifted @ x)
        if abs(rho_new - rho) < tol:
            logger.debug("power iteration converged after %d iterations", it)
            return rho_new - 1.0
        rho = rho_new

    if not fallback:
        raise NoConvergence(f"power iteration did not converge in {max_iter} iterations")

    logger.warning("power iteration stalled after %d iterations, using dense eigensolve", max_iter)
    eig = np.linalg.eigvals(a)
    if not np.isfinite(eig).all():
        raise NoConvergence("dense eigensolve returned non-finite eigenvalues")
    return float(np.max(np.abs(eig)))


def phase(m: MeanOffspringMatrix, eps: Optional[float] = None) -> Phase:
    return classify_phase(spectral_radius(m), eps)


def classify_phase(rho: float, eps: Optional[float] = None) -> Phase:
    eps = settings.PHASE_EPS if eps is None else eps
    if rho > 1.0 + eps:
        return Phase.SUPERCRITICAL
    if rho < 1.0 - eps:
        return Phase.SUBCRITICAL
    return Phase.CRITICAL


def validate_scenario(s: Scenario) -> Scenario:
    """
    Return ``s`` unchanged if it satisfies every scenario invariant,
    including the good state being supercritical and the bad state
    subcritical.
    """
    t = s.types.size
    for label, kernel in (("kernel_good", s.kernel_good), ("kernel_bad", s.kernel_bad)):
        if kernel.size != t:
            raise DimensionMismatch(f"{label} is {kernel.size}x{kernel.size} but there are {t} types")

    rho_good = spectral_radius(mean_offspring(s.kernel_good, s.types))
    rho_bad = spectral_radius(mean_offspring(s.kernel_bad, s.types))
    if classify_phase(rho_good) is not Phase.SUPERCRITICAL:
        raise PhaseViolation(f"good kernel must be supercritical, spectral radius is {rho_good:.12g}")
    if classify_phase(rho_bad) is not Phase.SUBCRITICAL:
        raise PhaseViolation(f"bad kernel must be subcritical, spectral radius is {rho_bad:.12g}")

    logger.debug("scenario %s valid: rho_good=%.6g rho_bad=%.6g", s.name, rho_good, rho_bad)
    return s
