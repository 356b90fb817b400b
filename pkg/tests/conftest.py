from __future__ import annotations

from functools import lru_cache
from pathlib import Path

import pytest

from montiarc.checks import CheckResult, check_model
from montiarc.symbols import Model, ModelPool
from montiarc.typesys import TypeRegistry

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
VALID = FIXTURES / "valid"
VIOLATIONS = FIXTURES / "violations"
SIM = FIXTURES / "sim"

VALID_ROOTS = sorted(p.name for p in VALID.iterdir() if p.is_dir())


def load_model(root: Path) -> Model:
    types = root / "types.txt"
    registry = TypeRegistry.load(types) if types.exists() else None
    return Model(ModelPool.load([root]), registry)


@lru_cache(maxsize=None)
def checked(root: str) -> tuple[Model, CheckResult]:
    """Model and check result for a fixture directory, relative to fixtures/."""
    model = load_model(FIXTURES / root)
    return model, check_model(model)


def model_from(sources: dict[str, str], types: str = "") -> Model:
    return Model(ModelPool.from_sources(sources), TypeRegistry.parse(types))


@pytest.fixture
def adra():
    return checked("valid/adra")


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    outcome: dict[str, str] = {}
    for key in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(key, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in nodeid:
                continue
            name = nodeid.split("::test_criterion_")[1]
            if report.failed or name not in outcome:
                outcome[name] = "FAIL" if report.failed else "PASS"
    if not outcome:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(outcome):
        number, _, title = name.partition("_")
        terminalreporter.write_line(f"{outcome[name]}  criterion {int(number):2d}: {title.replace('_', ' ')}")
