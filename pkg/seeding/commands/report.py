# seeding/commands/report.py

from __future__ import annotations

import csv
import io
import math
from pathlib import Path
from typing import List, Optional, Union

import click
from pydantic import BaseModel, ConfigDict

from ..core.config import settings

CSV_HEADER = ["quantity", "analytic", "mean", "std_error", "trials", "agree"]


# -----------------------------
# Pydantic models
# -----------------------------

class ReportRow(BaseModel):
    """
    One reported quantity. Simulated rows also carry the Monte Carlo mean,
    its standard error and the number of trials.
    """
    model_config = ConfigDict(frozen=True)

    quantity: str
    analytic: Union[int, float, str]
    mean: Optional[float] = None
    std_error: Optional[float] = None
    trials: Optional[int] = None

    @property
    def simulated(self) -> bool:
        return self.mean is not None

    @property
    def agree(self) -> Optional[bool]:
        """|analytic - mean| <= AGREEMENT_SIGMAS * std_error, or None for analytic-only rows."""
        if not self.simulated or isinstance(self.analytic, str):
            return None
        return abs(float(self.analytic) - self.mean) <= settings.AGREEMENT_SIGMAS * (self.std_error or 0.0)


class ExperimentReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    scenario: str
    command: str
    rows: List[ReportRow]

    def row(self, quantity: str) -> ReportRow:
        for r in self.rows:
            if r.quantity == quantity:
                return r
        raise KeyError(quantity)

    @property
    def all_agree(self) -> bool:
        return all(r.agree for r in self.rows if r.agree is not None)


# -----------------------------
# Formatting
# -----------------------------

def format_value(value: Union[int, float, str, bool, None]) -> str:
    """Locale-free rendering; floats use repr so output is byte-stable."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def report_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in report.rows:
        writer.writerow(
            [format_value(v) for v in (r.quantity, r.analytic, r.mean, r.std_error, r.trials, r.agree)]
        )
    return buf.getvalue()


def table_csv(header: List[str], rows: List[List[Union[int, float, str]]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def write_csv(text: str, out: Optional[str]) -> None:
    if out is None:
        return
    with Path(out).open("w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    click.echo(f"wrote {out}")


def _short(value: Union[int, float, str, None]) -> str:
    if isinstance(value, float) and math.isfinite(value):
        return f"{value:.10g}"
    return format_value(value)


def echo_report(report: ExperimentReport) -> None:
    """Human-readable table on stdout."""
    click.echo(f"{report.command}: {report.scenario}")
    width = max((len(r.quantity) for r in report.rows), default=8)
    for r in report.rows:
        line = f"  {r.quantity:<{width}}  {_short(r.analytic)}"
        if r.simulated:
            flag = "ok" if r.agree else "MISMATCH"
            line += f"  | sim {_short(r.mean)} +- {_short(r.std_error)} ({r.trials} trials) {flag}"
        click.echo(line)
