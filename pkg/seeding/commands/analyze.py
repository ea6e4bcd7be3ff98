# seeding/commands/analyze.py

import logging
from typing import List, Optional

import click

from ..core.scenarios import parse_scenario
from ..model.kernel import Scenario, classify_phase, mean_offspring, spectral_radius
from ..model.percolation import build_profile
from .report import ExperimentReport, ReportRow, echo_report, report_csv, write_csv

logger = logging.getLogger(__name__)


def analyze_scenario(s: Scenario) -> ExperimentReport:
    """
    Percolation profile of a scenario: per-type and aggregate giant-component
    probabilities, expected small-component sizes in both states, and the
    spectral radii with their phases.
    """
    profile = build_profile(s)
    rho_good = spectral_radius(mean_offspring(s.kernel_good, s.types))
    rho_bad = spectral_radius(mean_offspring(s.kernel_bad, s.types))
    rho_dual = spectral_radius(profile.dual)

    rows: List[ReportRow] = []
    for label, y in zip(s.types.labels, profile.y_by_type):
        rows.append(ReportRow(quantity=f"y[{label}]", analytic=y))
    rows.append(ReportRow(quantity="y", analytic=profile.y_aggregate))
    for label, c in zip(s.types.labels, profile.c_bad):
        rows.append(ReportRow(quantity=f"C_bad[{label}]", analytic=c))
    for label, c in zip(s.types.labels, profile.c_good):
        rows.append(ReportRow(quantity=f"C_good[{label}]", analytic=c))
    rows += [
        ReportRow(quantity="rho_good", analytic=rho_good),
        ReportRow(quantity="rho_bad", analytic=rho_bad),
        ReportRow(quantity="rho_dual", analytic=rho_dual),
        ReportRow(quantity="phase_good", analytic=classify_phase(rho_good).value),
        ReportRow(quantity="phase_bad", analytic=classify_phase(rho_bad).value),
        ReportRow(quantity="phase_dual", analytic=classify_phase(rho_dual).value),
    ]
    return ExperimentReport(scenario=s.name, command="analyze", rows=rows)


@click.command("analyze")
@click.argument("scenario_file")
@click.option("--out", default=None, help="Write the report as CSV to this path.")
def command(scenario_file: str, out: Optional[str]) -> None:
    """Giant-component and small-component quantities of a scenario."""
    report = analyze_scenario(parse_scenario(scenario_file))
    echo_report(report)
    write_csv(report_csv(report), out)
