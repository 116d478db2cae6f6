from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import settings

from invariant_data.store import ArchiveStore
from invariant_data.text_format import parse

FIXTURES = Path(__file__).parent / "fixtures"
COLLECTIONS = ("kinect", "festo", "trains", "weather")

settings.register_profile("repo", max_examples=100, deadline=None)
settings.load_profile("repo")


def fixture_text(collection: str) -> str:
    return (FIXTURES / f"{collection}.txt").read_text()


@pytest.fixture(scope="session")
def fixture_texts() -> dict[str, str]:
    return {c: fixture_text(c) for c in COLLECTIONS}


@pytest.fixture(scope="session")
def fixture_formulas(fixture_texts):
    return {c: parse(t) for c, t in fixture_texts.items()}


@pytest.fixture
def store(tmp_path) -> ArchiveStore:
    return ArchiveStore(tmp_path / "data")


# -- acceptance reporting ----------------------------------------------------------

_criteria: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        # a criterion may span several tests; any failure fails it
        _, verdict = _criteria.get(number, (title, "PASS"))
        _criteria[number] = (title, "PASS" if verdict == "PASS" and report.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, verdict = _criteria[number]
        terminalreporter.write_line(f"criterion {number}: {verdict}  {title}")
