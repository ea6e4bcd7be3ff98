"""
Error hierarchy shared by the models and the CLI.

Every error carries a human readable ``detail`` and the process exit code
the CLI uses when the error escapes a command.
"""


class SeedingError(Exception):
    exit_code: int = 1

    def __init__(self, detail: str) -> None:
        super().__init__(detail)
        self.detail = detail

    def with_context(self, context: str) -> "SeedingError":
        """Return a copy of this error with ``context`` prefixed to the detail."""
        return type(self)(f"{context}: {self.detail}")


class ParseError(SeedingError):
    exit_code = 3


class PhaseViolation(SeedingError):
    exit_code = 4


# Scenario shape errors
class DimensionMismatch(SeedingError):
    exit_code = 6


class AsymmetricKernel(SeedingError):
    exit_code = 6


class InvalidKernel(SeedingError):
    exit_code = 6


class BadProportions(SeedingError):
    exit_code = 6


# Numerical failures
class NoConvergence(SeedingError):
    exit_code = 7


class DegenerateSolution(SeedingError):
    exit_code = 7


class SingularSystem(SeedingError):
    exit_code = 7


# The interior optimum does not exist
class UnboundedSeeding(SeedingError):
    exit_code = 5


class MarginalCostTooLow(SeedingError):
    exit_code = 5


class DegenerateType(SeedingError):
    exit_code = 5


# Simulation / enumeration guards
class BudgetTooLarge(SeedingError):
    exit_code = 8


class InsufficientNodes(SeedingError):
    exit_code = 8


class SimulationError(SeedingError):
    exit_code = 8


class InvalidArgument(SeedingError):
    exit_code = 2
