# seeding/commands/simulate.py

import logging
from typing import List, Optional

import click

from ..core.config import settings
from ..core.errors import SeedingError
from ..core.scenarios import parse_scenario
from ..model.kernel import Scenario
from ..model.optimizer import relaxed_plan
from ..model.percolation import (
    PercolationProfile,
    SeedingPlan,
    build_profile,
    expected_adoption_bad,
    expected_adoption_good,
)
from ..model.simulator import (
    SimulationEstimate,
    State,
    check_run,
    component_size_by_type,
    largest_component_fraction,
    monte_carlo_adoption,
)
from .report import ExperimentReport, ReportRow, echo_report, report_csv, write_csv

logger = logging.getLogger(__name__)

STATES = ("good", "bad", "both")


def _paired(quantity: str, analytic: float, est: SimulationEstimate) -> ReportRow:
    return ReportRow(
        quantity=quantity,
        analytic=analytic,
        mean=est.mean,
        std_error=est.std_error,
        trials=est.trials,
    )


def simulation_plan(profile: PercolationProfile, s: Scenario) -> SeedingPlan:
    """
    The optimizer's integer plan, or one seed of the first type when there
    is no finite optimum or the optimum seeds nobody.
    """
    try:
        plan = relaxed_plan(profile, s).plan
    except SeedingError as exc:
        logger.warning("optimizer failed (%s), simulating one seed of type 0", exc.detail)
        return SeedingPlan.single(0, 1, profile.size)
    if plan.total == 0:
        return SeedingPlan.single(0, 1, profile.size)
    return plan


def simulate_scenario(
    s: Scenario,
    n: int,
    trials: int,
    base_seed: int,
    state: str = "both",
    workers: Optional[int] = None,
) -> ExperimentReport:
    """
    Pair every analytic quantity with a Monte Carlo estimate on networks of
    ``n`` agents. Analytic values are evaluated at the simulated size.
    """
    check_run(n, trials)
    s_sim = s.model_copy(update={"n": n})
    profile = build_profile(s_sim)
    plan = simulation_plan(profile, s_sim)
    labels = s.types.labels

    rows: List[ReportRow] = [
        ReportRow(quantity=f"plan[{label}]", analytic=int(c)) for label, c in zip(labels, plan.counts)
    ]

    if state in ("good", "both"):
        largest = largest_component_fraction(s_sim, State.GOOD, n, trials, base_seed, workers=workers)
        rows.append(_paired("y", profile.y_aggregate, largest))
        sizes = component_size_by_type(s_sim, State.GOOD, n, trials, base_seed, exclude_largest=True, workers=workers)
        rows += [_paired(f"C_good[{label}]", c, est) for label, c, est in zip(labels, profile.c_good, sizes)]
        adoption = monte_carlo_adoption(s_sim, State.GOOD, n, plan, trials, base_seed, workers=workers)
        rows.append(_paired("A_good", expected_adoption_good(plan, profile, s_sim), adoption))

    if state in ("bad", "both"):
        sizes = component_size_by_type(s_sim, State.BAD, n, trials, base_seed, workers=workers)
        rows += [_paired(f"C_bad[{label}]", c, est) for label, c, est in zip(labels, profile.c_bad, sizes)]
        adoption = monte_carlo_adoption(s_sim, State.BAD, n, plan, trials, base_seed, workers=workers)
        rows.append(_paired("A_bad", expected_adoption_bad(plan, profile, s_sim), adoption))

    report = ExperimentReport(scenario=s.name, command="simulate", rows=rows)
    logger.info("simulate %s: n=%d trials=%d, all agree: %s", s.name, n, trials, report.all_agree)
    return report


@click.command("simulate")
@click.argument("scenario_file")
@click.option("--n", "n", type=int, default=settings.SIM_N, show_default=True, help="Agents per simulated network.")
@click.option("--trials", type=int, default=settings.SIM_TRIALS, show_default=True)
@click.option("--seed", "base_seed", type=click.IntRange(min=0), default=settings.SIM_BASE_SEED, show_default=True)
@click.option("--state", type=click.Choice(STATES), default="both", show_default=True)
@click.option("--out", default=None, help="Write the report as CSV to this path.")
def command(scenario_file: str, n: int, trials: int, base_seed: int, state: str, out: Optional[str]) -> None:
    """Check the analytic quantities against simulated networks."""
    report = simulate_scenario(parse_scenario(scenario_file), n, trials, base_seed, state)
    echo_report(report)
    write_csv(report_csv(report), out)
