import math

import numpy as np
import pytest

from conftest import C_GOOD_ER2, Y_ER2, make_scenario
from seeding.core.config import settings
from seeding.core.errors import DimensionMismatch, InsufficientNodes, SimulationError
from seeding.model.percolation import SeedingPlan, build_profile, expected_adoption_good
from seeding.model.simulator import (
    DisjointSet,
    GraphInstance,
    SimulationEstimate,
    State,
    check_run,
    component_size_by_type,
    components,
    largest_component_fraction,
    measure_adoption,
    monte_carlo_adoption,
    sample_graph,
    trial_seeds,
    type_counts,
)

SIM_N = 20_000
SEED = 12345


@pytest.fixture
def er_sim():
    return make_scenario([1.0], [[2.0]], [[0.5]], n=SIM_N, name="er", labels=["all"])


def tiny_graph() -> GraphInstance:
    return GraphInstance(
        n=5,
        n_types=1,
        node_types=np.zeros(5, dtype=np.int64),
        edges=np.array([[0, 1], [3, 4]], dtype=np.int64),
    )


# -----------------------------
# Building blocks
# -----------------------------

def test_type_counts_largest_remainder():
    assert type_counts([0.25, 0.75], 10).tolist() == [3, 7]
    assert type_counts([0.5, 0.5], 7).tolist() == [4, 3]
    assert type_counts([1.0], 9).tolist() == [9]


def test_disjoint_set():
    ds = DisjointSet(6)
    assert ds.unite(0, 1)
    assert ds.unite(1, 2)
    assert not ds.unite(0, 2)
    assert ds.find(0) == ds.find(2)
    assert ds.find(3) != ds.find(0)


def test_components_label_with_smallest_index():
    g = components(tiny_graph())
    assert g.component_id.tolist() == [0, 0, 2, 3, 3]
    assert g.largest_component() == 2
    assert g.node_component_sizes().tolist() == [2, 2, 1, 2, 2]


def test_unlabelled_graph_has_no_sizes():
    with pytest.raises(SimulationError):
        tiny_graph().largest_component()


def test_trial_seeds_are_reproducible_and_distinct():
    assert trial_seeds(SEED, 3) == trial_seeds(SEED, 3)
    assert len({trial_seeds(SEED, t) for t in range(50)}) == 50


# -----------------------------
# Graph sampling
# -----------------------------

def test_sampling_is_reproducible(asymmetric_scenario):
    a = sample_graph(asymmetric_scenario, State.GOOD, 2000, seed=99)
    b = sample_graph(asymmetric_scenario, State.GOOD, 2000, seed=99)
    c = sample_graph(asymmetric_scenario, State.GOOD, 2000, seed=100)
    assert np.array_equal(a.edges, b.edges)
    assert np.array_equal(a.node_types, b.node_types)
    assert not np.array_equal(a.edges, c.edges)


def test_sampled_edges_are_simple(asymmetric_scenario):
    g = sample_graph(asymmetric_scenario, State.GOOD, 3000, seed=5)
    assert np.all(g.edges[:, 0] < g.edges[:, 1])
    assert np.all(g.edges < 3000)
    assert len(np.unique(g.edges, axis=0)) == len(g.edges)
    assert np.bincount(g.node_types).tolist() == [1500, 1500]


def test_sampled_edge_count_matches_kernel(er_sim):
    g = sample_graph(er_sim, State.GOOD, SIM_N, seed=1)
    expected = 2.0 / SIM_N * SIM_N * (SIM_N - 1) / 2
    assert abs(len(g.edges) - expected) < 5 * math.sqrt(expected)


def test_zero_kernel_gives_edgeless_graph():
    s = make_scenario([1.0], [[0.0]], [[0.0]])
    g = components(sample_graph(s, State.GOOD, 5, seed=0))
    assert len(g.edges) == 0
    assert g.component_id.tolist() == [0, 1, 2, 3, 4]


def test_clamped_probability_gives_complete_graph():
    s = make_scenario([0.5, 0.5], [[50.0, 50.0], [50.0, 50.0]], [[0.0, 0.0], [0.0, 0.0]])
    g = sample_graph(s, State.GOOD, 20, seed=0)
    assert len(g.edges) == 20 * 19 // 2
    est = largest_component_fraction(s, State.GOOD, 20, trials=2, base_seed=SEED)
    assert est.mean == 1.0


def test_components_partition_nodes(asymmetric_scenario):
    g = components(sample_graph(asymmetric_scenario, State.GOOD, 3000, seed=8))
    assert g.component_sizes.sum() == 3000
    assert np.all(g.component_id[g.edges[:, 0]] == g.component_id[g.edges[:, 1]])


def test_bad_state_has_no_giant(er_sim):
    est = largest_component_fraction(er_sim, State.BAD, SIM_N, trials=3, base_seed=SEED)
    assert est.mean < 0.01


# -----------------------------
# Adoption
# -----------------------------

def test_measure_adoption_counts_union_of_components():
    g = components(tiny_graph())
    assert measure_adoption(g, SeedingPlan(counts=[5]), seed=0) == 5
    assert measure_adoption(g, SeedingPlan(counts=[0]), seed=0) == 0


def test_measure_adoption_guards():
    g = components(tiny_graph())
    with pytest.raises(DimensionMismatch):
        measure_adoption(g, SeedingPlan(counts=[1, 1]), seed=0)
    with pytest.raises(DimensionMismatch):
        measure_adoption(g, SeedingPlan(counts=[1.5]), seed=0)
    with pytest.raises(InsufficientNodes):
        measure_adoption(g, SeedingPlan(counts=[6]), seed=0)


def test_adoption_is_monotone_in_the_plan(asymmetric_scenario):
    g = components(sample_graph(asymmetric_scenario, State.BAD, 4000, seed=3))
    previous = 0
    for k in range(0, 40, 4):
        value = measure_adoption(g, SeedingPlan(counts=[k, k // 2]), seed=11)
        assert value >= previous
        previous = value


def test_estimate_from_samples():
    est = SimulationEstimate.from_samples(np.array([1.0, 2.0, 3.0]))
    assert est.mean == 2.0
    assert est.std_error == pytest.approx(1.0 / math.sqrt(3.0))
    assert est.trials == 3
    assert est.agrees_with(2.0 + 3.0 / math.sqrt(3.0) - 1e-9)
    assert not est.agrees_with(4.0)
    with pytest.raises(SimulationError):
        SimulationEstimate.from_samples(np.array([1.0]))


def test_run_guards(monkeypatch):
    with pytest.raises(SimulationError):
        check_run(1000, 1)
    monkeypatch.setattr(settings, "SIM_MAX_N", 1000)
    with pytest.raises(SimulationError):
        check_run(1001, 10)


def test_adoption_estimate_is_reproducible(er_sim):
    plan = SeedingPlan(counts=[3])
    a = monte_carlo_adoption(er_sim, State.GOOD, 2000, plan, trials=5, base_seed=SEED)
    b = monte_carlo_adoption(er_sim, State.GOOD, 2000, plan, trials=5, base_seed=SEED)
    assert a == b


def test_parallel_trials_match_serial(asymmetric_scenario):
    plan = SeedingPlan(counts=[2, 1])
    serial = monte_carlo_adoption(asymmetric_scenario, State.GOOD, 2000, plan, trials=4, base_seed=SEED, workers=1)
    pooled = monte_carlo_adoption(asymmetric_scenario, State.GOOD, 2000, plan, trials=4, base_seed=SEED, workers=2)
    assert pooled == serial


# -----------------------------
# Monte Carlo oracles
# -----------------------------

@pytest.mark.slow
def test_largest_component_matches_giant_fraction(er_sim):
    est = largest_component_fraction(er_sim, State.GOOD, SIM_N, trials=30, base_seed=SEED)
    assert est.agrees_with(Y_ER2)


@pytest.mark.slow
def test_bad_state_adoption_oracle(er_sim):
    est = monte_carlo_adoption(er_sim, State.BAD, SIM_N, SeedingPlan(counts=[10]), trials=100, base_seed=SEED)
    assert est.agrees_with(10 / (1 - 0.5))


@pytest.mark.slow
@pytest.mark.parametrize("seeds", [1, 5, 10])
def test_good_state_adoption_oracle(er_sim, seeds):
    plan = SeedingPlan(counts=[seeds])
    analytic = expected_adoption_good(plan, build_profile(er_sim), er_sim)
    est = monte_carlo_adoption(er_sim, State.GOOD, SIM_N, plan, trials=200, base_seed=SEED)
    assert est.agrees_with(analytic)


@pytest.mark.slow
def test_component_size_oracles(er_sim):
    [bad] = component_size_by_type(er_sim, State.BAD, SIM_N, trials=30, base_seed=SEED)
    assert bad.agrees_with(2.0)
    [good] = component_size_by_type(er_sim, State.GOOD, SIM_N, trials=30, base_seed=SEED, exclude_largest=True)
    assert good.agrees_with(C_GOOD_ER2)
