import pytest

from seeding.core.errors import (
    AsymmetricKernel,
    BadProportions,
    DimensionMismatch,
    ParseError,
    PhaseViolation,
)
from seeding.core.scenarios import (
    bundled_scenario,
    emit_scenario,
    parse_scenario,
    parse_scenario_text,
)
from seeding.model.percolation import calibrate_er_kernel

ER_TEXT = """\
name: er
types:
  labels: [all]
  mu: [1.0]
kernel_good:
  - [2.0]
kernel_bad:
  - [0.5]
lambda: 1.0
n: 1000
"""


@pytest.mark.parametrize("name", ["er_baseline", "two_type_symmetric", "two_type_asymmetric", "instagram"])
def test_bundled_scenarios_parse_and_round_trip(name):
    s = parse_scenario(bundled_scenario(name))
    assert s.name == name
    assert parse_scenario_text(emit_scenario(s)) == s


def test_instagram_scenario():
    s = parse_scenario(bundled_scenario("instagram"))
    assert s.n == 7_000_000_000
    assert s.types.size == 1
    assert s.kernel_good.entries[0][0] == pytest.approx(calibrate_er_kernel(2.0 / 8.1), rel=1e-9)


def test_name_defaults_to_file_stem(write_scenario):
    path = write_scenario(ER_TEXT.replace("name: er\n", ""), name="my_network.yaml")
    assert parse_scenario(path).name == "my_network"


def test_lambda_alias():
    s = parse_scenario_text(ER_TEXT)
    assert s.lam == 1.0
    assert s.n == 1000


def test_round_trip_keeps_exact_floats():
    text = ER_TEXT.replace("[2.0]", "[2.0000000000000004]").replace("lambda: 1.0", "lambda: 0.1")
    s = parse_scenario_text(text)
    assert parse_scenario_text(emit_scenario(s)) == s


def test_proportions_error_names_line_and_field():
    text = ER_TEXT.replace("mu: [1.0]", "mu: [0.9]")
    with pytest.raises(BadProportions, match=r"<string>:2: field 'types'"):
        parse_scenario_text(text)


def test_asymmetric_kernel_rejected():
    text = """\
types:
  labels: [a, b]
  mu: [0.5, 0.5]
kernel_good:
  - [3.0, 1.0]
  - [1.5, 3.0]
kernel_bad:
  - [0.5, 0.5]
  - [0.5, 0.5]
lambda: 1.0
n: 1000
"""
    with pytest.raises(AsymmetricKernel, match=r":4: field 'kernel_good'"):
        parse_scenario_text(text)


def test_kernel_of_wrong_size_rejected():
    text = ER_TEXT.replace("  - [0.5]\n", "  - [0.5, 0.1]\n  - [0.1, 0.5]\n")
    with pytest.raises(DimensionMismatch):
        parse_scenario_text(text)


@pytest.mark.parametrize("written", ["7e9", "7.0e+9", "7000000000.0"])
def test_whole_number_population_in_exponent_form(written):
    s = parse_scenario_text(ER_TEXT.replace("n: 1000", f"n: {written}"))
    assert s.n == 7_000_000_000
    assert isinstance(s.n, int)


@pytest.mark.parametrize(
    "text, pattern",
    [
        (ER_TEXT.replace("lambda: 1.0", "lambda: -1.0"), r":9: field 'lambda'"),
        (ER_TEXT.replace("n: 1000", "n: 0"), r":10: field 'n'"),
        (ER_TEXT.replace("n: 1000", "n: lots"), r"field 'n'"),
        (ER_TEXT.replace("n: 1000", "n: 1.5"), r":10: field 'n'"),
        (ER_TEXT.replace("n: 1000", "n: 2.5e-1"), r"field 'n'"),
        (ER_TEXT.replace("kernel_bad:\n  - [0.5]\n", ""), r"missing section 'kernel_bad'"),
        (ER_TEXT + "colour: red\n", r":11: unknown section 'colour'"),
        ("types: [unclosed\n", r"invalid YAML"),
        ("- just\n- a list\n", r"must be a mapping"),
        (ER_TEXT.replace("[2.0]", "[two]"), r"field 'kernel_good'"),
    ],
)
def test_parse_errors(text, pattern):
    with pytest.raises(ParseError, match=pattern):
        parse_scenario_text(text)


def test_subcritical_good_state_rejected(write_scenario):
    path = write_scenario(ER_TEXT.replace("[2.0]", "[0.8]"))
    with pytest.raises(PhaseViolation, match="good kernel"):
        parse_scenario(path)


def test_missing_file(tmp_path):
    with pytest.raises(ParseError, match="cannot read"):
        parse_scenario(tmp_path / "nope.yaml")
