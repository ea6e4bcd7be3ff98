# seeding/commands/sweep.py

import logging
import math
from typing import List, Optional, Sequence, Tuple

import click
from pydantic import BaseModel, ConfigDict

from ..core.errors import InvalidArgument
from ..core.scenarios import parse_scenario
from ..model.kernel import Scenario
from ..model.optimizer import best_type, fitted_log_slope, q_star, scaling_sweep
from ..model.percolation import build_profile
from .report import table_csv, write_csv

logger = logging.getLogger(__name__)

SWEEP_HEADER = ["n", "integer_count", "count_over_log_n", "q_star_n"]


class SweepResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    scenario: str
    rows: List[Tuple[int, int, float, float]]
    limit: float
    slope: Optional[float] = None


def parse_n_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise InvalidArgument(f"--n-list must be comma separated integers, got {text!r}") from exc


def sweep_scenario(s: Scenario, n_values: Sequence[int]) -> SweepResult:
    """
    Integer seed count across network sizes. count / log n tends to
    1 / log(1 / (1 - y(j*))); q_star_n is q* n, which grows linearly.
    """
    profile = build_profile(s)
    points = scaling_sweep(s, n_values, profile)
    j = best_type(profile, s)
    y_j = profile.y_by_type[j]
    limit = 1.0 / -math.log1p(-y_j) if y_j < 1.0 else 0.0

    rows = []
    for n, count in points:
        per_log = count / math.log(n) if n > 1 else math.nan
        value = q_star(profile, s.model_copy(update={"n": n})) * n
        rows.append((n, count, per_log, value))

    slope = fitted_log_slope(points) if len(points) >= 2 else None
    return SweepResult(scenario=s.name, rows=rows, limit=limit, slope=slope)


@click.command("sweep")
@click.argument("scenario_file")
@click.option("--n-list", "n_list", required=True, help="Comma separated, strictly increasing network sizes.")
@click.option("--out", default=None, help="Write the sweep as CSV to this path.")
def command(scenario_file: str, n_list: str, out: Optional[str]) -> None:
    """Optimal seed count as the network grows."""
    result = sweep_scenario(parse_scenario(scenario_file), parse_n_list(n_list))
    text = table_csv(SWEEP_HEADER, [list(row) for row in result.rows])
    click.echo(text, nl=False)
    click.echo(f"limit {result.limit!r}")
    if result.slope is not None:
        click.echo(f"fitted slope {result.slope!r}")
    write_csv(text, out)
