from __future__ import annotations

from pathlib import Path
from typing import Any, Callable, Dict, TypeVar

import yaml
from pydantic import ValidationError

from ..model.kernel import Kernel, Scenario, TypeSpace, validate_scenario
from .errors import ParseError, SeedingError

# repository root
BASE_DIR = Path(__file__).resolve().parent.parent.parent
SCENARIO_DIR = BASE_DIR / "scenarios"

SECTIONS = ("name", "types", "kernel_good", "kernel_bad", "lambda", "n")
REQUIRED = ("types", "kernel_good", "kernel_bad", "lambda", "n")

T = TypeVar("T")


def bundled_scenario(name: str) -> Path:
    """Path of a scenario shipped in scenarios/, e.g. bundled_scenario("er_baseline")."""
    return SCENARIO_DIR / f"{name}.yaml"


def _key_lines(text: str) -> Dict[str, int]:
    """1-based line of every top-level key, for error messages."""
    node = yaml.compose(text, Loader=yaml.SafeLoader)
    if not isinstance(node, yaml.MappingNode):
        return {}
    return {key.value: key.start_mark.line + 1 for key, _ in node.value}


def _integral(value: Any) -> Any:
    """
    YAML 1.1 reads `7e9` as a string and `7.0e+9` as a float; turn either
    into an int when it is a whole number and leave anything else for
    validation to reject.
    """
    if isinstance(value, str):
        try:
            value = float(value)
        except ValueError:
            return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    return value


def _field(source: str, lines: Dict[str, int], key: str, build: Callable[[], T]) -> T:
    """Run ``build`` and qualify any error with the file, line and field."""
    try:
        return build()
    except ValidationError as exc:
        err = exc.errors()[0]
        if err["loc"] and str(err["loc"][0]) in lines:
            key = str(err["loc"][0])
        loc = ".".join(str(part) for part in err["loc"])
        detail = f"{loc}: {err['msg']}" if loc else err["msg"]
        raise ParseError(f"{source}:{lines.get(key, '?')}: field '{key}': {detail}") from exc
    except SeedingError as exc:
        raise exc.with_context(f"{source}:{lines.get(key, '?')}: field '{key}'") from exc


def parse_scenario_text(text: str, source: str = "<string>", default_name: str = "scenario") -> Scenario:
    try:
        data = yaml.safe_load(text)
        lines = _key_lines(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{source}:{mark.line + 1}" if mark is not None else source
        raise ParseError(f"{where}: invalid YAML: {getattr(exc, 'problem', None) or exc}") from exc

    if not isinstance(data, dict):
        raise ParseError(f"{source}: a scenario must be a mapping with sections {', '.join(REQUIRED)}")

    unknown = sorted(set(data) - set(SECTIONS))
    if unknown:
        raise ParseError(f"{source}:{lines.get(unknown[0], '?')}: unknown section '{unknown[0]}'")
    missing = [key for key in REQUIRED if key not in data]
    if missing:
        raise ParseError(f"{source}: missing section '{missing[0]}'")

    types = _field(source, lines, "types", lambda: TypeSpace.model_validate(data["types"]))
    kernel_good = _field(source, lines, "kernel_good", lambda: Kernel(entries=data["kernel_good"]))
    kernel_bad = _field(source, lines, "kernel_bad", lambda: Kernel(entries=data["kernel_bad"]))

    def build() -> Scenario:
        return Scenario.model_validate(
            {
                "name": str(data.get("name") or default_name),
                "types": types,
                "kernel_good": kernel_good,
                "kernel_bad": kernel_bad,
                "lambda": data["lambda"],
                "n": _integral(data["n"]),
            }
        )

    scenario = _field(source, lines, "lambda", build)
    try:
        return validate_scenario(scenario)
    except SeedingError as exc:
        raise exc.with_context(source) from exc


def parse_scenario(path: str | Path) -> Scenario:
    """
    Read and validate a YAML scenario file. Every failure is raised as a
    SeedingError naming the file, and where possible the line and field.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: cannot read scenario file: {exc.strerror or exc}") from exc
    return parse_scenario_text(text, source=str(path), default_name=path.stem)


def scenario_document(s: Scenario) -> Dict[str, Any]:
    return {
        "name": s.name,
        "types": {"labels": list(s.types.labels), "mu": list(s.types.mu)},
        "kernel_good": [list(row) for row in s.kernel_good.entries],
        "kernel_bad": [list(row) for row in s.kernel_bad.entries],
        "lambda": s.lam,
        "n": s.n,
    }


def emit_scenario(s: Scenario) -> str:
    """YAML text that parse_scenario_text turns back into ``s``."""
    return yaml.safe_dump(scenario_document(s), sort_keys=False, default_flow_style=None)
