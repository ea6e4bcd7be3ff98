import logging

import pytest
from click.testing import CliRunner

from seeding.core.scenarios import bundled_scenario, parse_scenario
from seeding.model.kernel import Kernel, Scenario, TypeSpace

# Giant-component fraction of a one-type network with kappa = 2.
Y_ER2 = 0.7968121834
# Expected small-component size outside the giant component, kappa = 2.
C_GOOD_ER2 = 1.684566
# 1 / log(1 / (1 - Y_ER2)): the limit of count / log n.
ER2_LOG_LIMIT = 0.627501


def make_scenario(mu, kernel_good, kernel_bad, lam=1.0, n=100_000, name="test", labels=None):
    labels = labels or [f"t{i}" for i in range(len(mu))]
    return Scenario(
        name=name,
        types=TypeSpace(labels=labels, mu=mu),
        kernel_good=Kernel(entries=kernel_good),
        kernel_bad=Kernel(entries=kernel_bad),
        lam=lam,
        n=n,
    )


@pytest.fixture
def er_scenario() -> Scenario:
    return make_scenario([1.0], [[2.0]], [[0.5]], n=1_000_000, name="er", labels=["all"])


@pytest.fixture
def symmetric_scenario() -> Scenario:
    return parse_scenario(bundled_scenario("two_type_symmetric"))


@pytest.fixture
def asymmetric_scenario() -> Scenario:
    return parse_scenario(bundled_scenario("two_type_asymmetric"))


@pytest.fixture
def constant_kernel_scenario() -> Scenario:
    # Two types that are indistinguishable apart from their share.
    return make_scenario(
        [0.25, 0.75],
        [[2.0, 2.0], [2.0, 2.0]],
        [[0.5, 0.5], [0.5, 0.5]],
        n=100_000,
        name="constant",
    )


@pytest.fixture
def write_scenario(tmp_path):
    """Write YAML text to a file in tmp_path and return its path as a string."""

    def _write(text: str, name: str = "scenario.yaml") -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write


@pytest.fixture(autouse=True)
def reset_package_logger():
    """The CLI points its log handler at the runner's stderr; drop it after each test."""
    yield
    logger = logging.getLogger("seeding")
    logger.handlers.clear()
    logger.setLevel(logging.NOTSET)


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()
