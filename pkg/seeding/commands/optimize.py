# seeding/commands/optimize.py

import logging
from typing import List, Optional

import click

from ..core.errors import UnboundedSeeding
from ..core.scenarios import parse_scenario
from ..model.kernel import Scenario
from ..model.optimizer import brute_force_plan, er_optimal_seed_count, relaxed_plan
from ..model.percolation import build_profile, designer_utility
from .report import ExperimentReport, ReportRow, echo_report, report_csv, write_csv

logger = logging.getLogger(__name__)


def optimize_scenario(s: Scenario, budget: Optional[int] = None) -> ExperimentReport:
    profile = build_profile(s)
    try:
        result = relaxed_plan(profile, s)
    except UnboundedSeeding as exc:
        raise exc.with_context(
            f"{s.name}: every extra seed keeps adding utility, so there is no finite optimal plan"
        ) from exc

    labels = s.types.labels
    rows: List[ReportRow] = [
        ReportRow(quantity="best_type", analytic=labels[result.best_type]),
        ReportRow(quantity="q_star", analytic=result.q_star),
        ReportRow(quantity="relaxed_count", analytic=result.relaxed_count),
        ReportRow(quantity="integer_count", analytic=result.integer_count),
        ReportRow(quantity="leading_term", analytic=result.leading_term),
    ]
    if s.types.size == 1:
        kg = s.kernel_good.entries[0][0]
        kb = s.kernel_bad.entries[0][0]
        rows.append(ReportRow(quantity="er_closed_form", analytic=er_optimal_seed_count(kg, kb, s.lam, s.n)))
    rows += [
        ReportRow(quantity="utility", analytic=result.utility_analytic),
        ReportRow(quantity="relaxed_utility", analytic=result.relaxed_utility),
        ReportRow(quantity="rounding_gap_bound", analytic=result.rounding_gap_bound),
    ]
    rows += [ReportRow(quantity=f"marginal[{k}]", analytic=value) for k, value in result.marginal_schedule]

    if budget is not None:
        best = brute_force_plan(s, profile, budget)
        best_utility = designer_utility(best, profile, s)
        rows += [ReportRow(quantity=f"brute_force[{label}]", analytic=int(c)) for label, c in zip(labels, best.counts)]
        rows += [
            ReportRow(quantity="brute_force_utility", analytic=best_utility),
            ReportRow(quantity="brute_force_gap", analytic=best_utility - result.utility_analytic),
        ]

    return ExperimentReport(scenario=s.name, command="optimize", rows=rows)


@click.command("optimize")
@click.argument("scenario_file")
@click.option("--out", default=None, help="Write the report as CSV to this path.")
@click.option("--budget", type=int, default=None, help="Also search every plan with at most this many seeds.")
def command(scenario_file: str, out: Optional[str], budget: Optional[int]) -> None:
    """Optimal single-type seeding plan and its marginal schedule."""
    report = optimize_scenario(parse_scenario(scenario_file), budget)
    echo_report(report)
    write_csv(report_csv(report), out)
