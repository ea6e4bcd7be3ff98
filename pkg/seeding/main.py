# seeding/main.py

import logging

import click

from .commands import command_list
from .core.config import settings
from .core.errors import SeedingError
from .core.logging import configure_logging


class SeedingGroup(click.Group):
    """Turns a SeedingError escaping any command into its exit code."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except SeedingError as exc:
            click.echo(f"error: {exc.detail}", err=True)
            ctx.exit(exc.exit_code)


def create_cli() -> click.Group:
    @click.group(cls=SeedingGroup, help=settings.PROJECT_NAME)
    @click.option("-v", "--verbose", count=True, help="-v for progress, -vv for solver detail.")
    def cli(verbose: int) -> None:
        if verbose >= 2:
            configure_logging(logging.DEBUG)
        elif verbose == 1:
            configure_logging(logging.INFO)
        else:
            configure_logging(settings.LOG_LEVEL)

    # analyze, optimize, simulate, sweep
    for command in command_list:
        cli.add_command(command)

    return cli


cli = create_cli()
