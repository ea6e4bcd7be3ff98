# seeding/model/simulator.py

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from enum import Enum
from functools import partial
from typing import Callable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..core.config import settings
from ..core.errors import DimensionMismatch, InsufficientNodes, SimulationError
from .kernel import Kernel, Scenario
from .percolation import SeedingPlan

logger = logging.getLogger(__name__)


class State(str, Enum):
    GOOD = "good"
    BAD = "bad"


# -----------------------------
# Pydantic models
# -----------------------------

class GraphInstance(BaseModel):
    """
    One sampled network. ``component_id`` labels every node with the
    smallest node index in its component; ``component_sizes`` is indexed by
    that label (zero for indices that are not a label).
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    n_types: int
    node_types: np.ndarray
    edges: np.ndarray
    component_id: Optional[np.ndarray] = None
    component_sizes: Optional[np.ndarray] = None

    @property
    def labelled(self) -> bool:
        return self.component_id is not None

    def largest_component(self) -> int:
        return int(self._sizes().max())

    def node_component_sizes(self) -> np.ndarray:
        """Size of the component each node belongs to."""
        return self._sizes()[self.component_id]

    def _sizes(self) -> np.ndarray:
        if self.component_sizes is None:
            raise SimulationError("graph components have not been labelled")
        return self.component_sizes


class SimulationEstimate(BaseModel):
    model_config = ConfigDict(frozen=True)

    mean: float
    std_error: float = Field(ge=0)
    trials: int = Field(ge=1)

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> "SimulationEstimate":
        samples = np.asarray(samples, dtype=float)
        if samples.size < 2:
            raise SimulationError("standard error needs at least two trials")
        return cls(
            mean=float(np.mean(samples)),
            std_error=float(np.std(samples, ddof=1) / math.sqrt(samples.size)),
            trials=int(samples.size),
        )

    def agrees_with(self, value: float, sigmas: Optional[float] = None) -> bool:
        sigmas = settings.AGREEMENT_SIGMAS if sigmas is None else sigmas
        return abs(value - self.mean) <= sigmas * self.std_error


class DisjointSet:
    """Union-find over 0..n-1 with union by rank and path compression."""

    def __init__(self, n: int) -> None:
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, element: int) -> int:
        parent = self.parent
        root = element
        while parent[root] != root:
            root = parent[root]
        while parent[element] != root:
            parent[element], element = root, parent[element]
        return root

    def unite(self, first: int, second: int) -> bool:
        """Merge the sets of two elements; False if they were already joined."""
        a = self.find(first)
        b = self.find(second)
        if a == b:
            return False
        if self.rank[a] < self.rank[b]:
            a, b = b, a
        self.parent[b] = a
        if self.rank[a] == self.rank[b]:
            self.rank[a] += 1
        return True


# -----------------------------
# Helper functions
# -----------------------------

def type_counts(mu: List[float], n: int) -> np.ndarray:
    """
    Split ``n`` nodes across types in proportion to ``mu`` by largest
    remainder rounding (ties to the lower type index).
    """
    exact = np.asarray(mu, dtype=float) * n
    counts = np.floor(exact).astype(np.int64)
    short = n - int(counts.sum())
    if short > 0:
        order = sorted(range(len(mu)), key=lambda i: (-(exact[i] - counts[i]), i))
        for i in order[:short]:
            counts[i] += 1
    return counts


def _skip_positions(rng: np.random.Generator, total: int, p: float) -> np.ndarray:
    """
    Indices in [0, total) kept independently with probability ``p``, drawn
    by geometric jumps between successes so the work is O(successes).
    """
    if total <= 0 or p <= 0.0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(total, dtype=np.int64)

    expected = total * p
    batch = int(expected + 6.0 * math.sqrt(expected) + 16)
    chunks = []
    last = -1
    while True:
        positions = last + np.cumsum(rng.geometric(p, size=batch))
        inside = positions[positions < total]
        chunks.append(inside)
        if inside.size < positions.size:
            break
        last = int(positions[-1])
        batch = max(16, batch // 4)
    return np.concatenate(chunks)


def _triangle_pairs(k: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Map linear indices over pairs i < j (ordered by j, then i) back to (i, j)."""
    j = np.floor((1.0 + np.sqrt(1.0 + 8.0 * k.astype(float))) / 2.0).astype(np.int64)
    j[j * (j - 1) // 2 > k] -= 1
    j[(j + 1) * j // 2 <= k] += 1
    i = k - j * (j - 1) // 2
    return i, j


def _kernel_for(s: Scenario, state: State) -> Kernel:
    return s.kernel_good if State(state) is State.GOOD else s.kernel_bad


def trial_seeds(base_seed: int, trial: int) -> Tuple[int, int]:
    """Independent (graph, placement) seeds for one trial, reproducible from its index."""
    seq = np.random.SeedSequence(entropy=base_seed, spawn_key=(trial,))
    graph_seed, placement_seed = seq.generate_state(2, dtype=np.uint64)
    return int(graph_seed), int(placement_seed)


def check_run(n: int, trials: int) -> None:
    if trials < 2:
        raise SimulationError(f"need at least 2 trials for a standard error, got {trials}")
    if n < 2:
        raise SimulationError(f"simulated networks need at least 2 nodes, got {n}")
    if n > settings.SIM_MAX_N:
        raise SimulationError(f"n = {n} exceeds the simulation limit {settings.SIM_MAX_N}")


def _run_trials(trial: Callable[[int], object], trials: int, workers: Optional[int]) -> list:
    """Evaluate ``trial(i)`` for every index, results kept in index order."""
    workers = settings.SIM_WORKERS if workers is None else workers
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(trial, range(trials)))
    return [trial(i) for i in range(trials)]


# -----------------------------
# Operations
# -----------------------------

def sample_graph(s: Scenario, state: State, n: int, seed: int) -> GraphInstance:
    """
    Sample a typed random network with edge probability
    min(kappa(type(u), type(v)) / n, 1) for every unordered pair.
    """
    if n < 2:
        raise SimulationError(f"simulated networks need at least 2 nodes, got {n}")

    kernel = _kernel_for(s, state).as_array()
    counts = type_counts(s.types.mu, n)
    offsets = np.concatenate(([0], np.cumsum(counts)))
    rng = np.random.default_rng(seed)

    blocks = []
    for a in range(len(counts)):
        for b in range(a, len(counts)):
            p = min(kernel[a, b] / n, 1.0)
            na, nb = int(counts[a]), int(counts[b])
            if a == b:
                k = _skip_positions(rng, na * (na - 1) // 2, p)
                i, j = _triangle_pairs(k)
                blocks.append(np.column_stack((i + offsets[a], j + offsets[a])))
            else:
                k = _skip_positions(rng, na * nb, p)
                blocks.append(np.column_stack((k // nb + offsets[a], k % nb + offsets[b])))

    edges = np.concatenate(blocks).astype(np.int64) if blocks else np.empty((0, 2), dtype=np.int64)
    node_types = np.repeat(np.arange(len(counts)), counts)
    logger.debug("sampled %s graph: n=%d, %d edges", State(state).value, n, len(edges))
    return GraphInstance(n=n, n_types=len(counts), node_types=node_types, edges=edges)


def components(g: GraphInstance) -> GraphInstance:
    """Label connected components; each label is the smallest node index in it."""
    ds = DisjointSet(g.n)
    for u, v in g.edges.tolist():
        ds.unite(u, v)

    roots = np.fromiter((ds.find(i) for i in range(g.n)), dtype=np.int64, count=g.n)
    smallest = np.full(g.n, g.n, dtype=np.int64)
    np.minimum.at(smallest, roots, np.arange(g.n, dtype=np.int64))
    component_id = smallest[roots]
    sizes = np.bincount(component_id, minlength=g.n)
    return g.model_copy(update={"component_id": component_id, "component_sizes": sizes})


def measure_adoption(g: GraphInstance, plan: SeedingPlan, seed: int) -> int:
    """
    Draw the plan's seeds uniformly without replacement within each type and
    return the number of nodes in the union of their components.

    Seeds are the first ``count`` nodes of a random permutation of each type,
    so a larger plan on the same seed seeds a superset of nodes.
    """
    if not g.labelled:
        g = components(g)

    if len(plan.counts) != g.n_types:
        raise DimensionMismatch(f"plan has {len(plan.counts)} entries but the graph has {g.n_types} types")
    if not plan.is_integer:
        raise DimensionMismatch(f"simulated plans need integer counts, got {plan.counts}")

    rng = np.random.default_rng(seed)
    chosen = []
    for t, count in enumerate(plan.counts):
        nodes = np.flatnonzero(g.node_types == t)
        count = int(count)
        if count > nodes.size:
            raise InsufficientNodes(f"plan seeds {count} agents of type {t} but only {nodes.size} exist")
        chosen.append(rng.permutation(nodes)[:count])

    seeds = np.concatenate(chosen)
    if seeds.size == 0:
        return 0
    labels = np.unique(g.component_id[seeds])
    return int(g.component_sizes[labels].sum())


def _adoption_trial(s: Scenario, state: State, n: int, plan: SeedingPlan, base_seed: int, trial: int) -> int:
    graph_seed, placement_seed = trial_seeds(base_seed, trial)
    g = components(sample_graph(s, state, n, graph_seed))
    return measure_adoption(g, plan, placement_seed)


def _largest_trial(s: Scenario, state: State, n: int, base_seed: int, trial: int) -> float:
    graph_seed, _ = trial_seeds(base_seed, trial)
    g = components(sample_graph(s, state, n, graph_seed))
    return g.largest_component() / n


def _component_size_trial(
    s: Scenario, state: State, n: int, exclude_largest: bool, base_seed: int, trial: int
) -> np.ndarray:
    graph_seed, _ = trial_seeds(base_seed, trial)
    g = components(sample_graph(s, state, n, graph_seed))
    sizes = g.node_component_sizes()
    keep = np.ones(n, dtype=bool)
    if exclude_largest:
        keep &= g.component_id != int(np.argmax(g.component_sizes))

    means = np.full(s.types.size, np.nan)
    for t in range(s.types.size):
        mask = keep & (g.node_types == t)
        if mask.any():
            means[t] = sizes[mask].mean()
    return means


def monte_carlo_adoption(
    s: Scenario,
    state: State,
    n: int,
    plan: SeedingPlan,
    trials: int,
    base_seed: int,
    workers: Optional[int] = None,
) -> SimulationEstimate:
    """Mean and standard error of adoption over independent graphs and seed draws."""
    check_run(n, trials)
    values = _run_trials(partial(_adoption_trial, s, State(state), n, plan, base_seed), trials, workers)
    estimate = SimulationEstimate.from_samples(np.asarray(values))
    logger.info("adoption (%s, n=%d, plan=%s): %.6g +- %.3g", State(state).value, n, plan.counts, estimate.mean, estimate.std_error)
    return estimate


def largest_component_fraction(
    s: Scenario,
    state: State,
    n: int,
    trials: int,
    base_seed: int,
    workers: Optional[int] = None,
) -> SimulationEstimate:
    check_run(n, trials)
    values = _run_trials(partial(_largest_trial, s, State(state), n, base_seed), trials, workers)
    return SimulationEstimate.from_samples(np.asarray(values))


def component_size_by_type(
    s: Scenario,
    state: State,
    n: int,
    trials: int,
    base_seed: int,
    exclude_largest: bool = False,
    workers: Optional[int] = None,
) -> List[SimulationEstimate]:
    """
    Per-type mean size of the component holding a uniformly chosen node of
    that type; with ``exclude_largest`` nodes of the largest component are
    left out (the small-component size in the good state).
    """
    check_run(n, trials)
    rows = _run_trials(
        partial(_component_size_trial, s, State(state), n, exclude_largest, base_seed), trials, workers
    )
    values = np.vstack(rows)
    return [SimulationEstimate.from_samples(values[:, t]) for t in range(s.types.size)]
