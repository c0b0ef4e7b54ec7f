"""Shared fixtures and the acceptance summary printed at the end of a run."""
from __future__ import annotations

from collections import OrderedDict

import pytest

from quons.spectrum import Spectrum, bundled_spectrum

_criteria: "OrderedDict[int, dict]" = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            number, title = mark.args
            _criteria.setdefault(number, {"title": title, "failed": [], "passed": 0})


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when != "call":
        return
    entry = _criteria[mark.args[0]]
    if report.passed:
        entry["passed"] += 1
    else:
        entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        total = entry["passed"] + len(entry["failed"])
        if total == 0:
            continue
        status = "PASS" if not entry["failed"] else "FAIL"
        line = f"{status} criterion {number:>2}: {entry['title']} ({entry['passed']}/{total} checks)"
        if entry["failed"]:
            line += " failing: " + ", ".join(entry["failed"])
        tr.write_line(line)


@pytest.fixture
def osc8() -> Spectrum:
    return bundled_spectrum()


@pytest.fixture
def one_level() -> Spectrum:
    return Spectrum.from_pairs([(0.0, 1.0)])


@pytest.fixture
def two_level() -> Spectrum:
    return Spectrum.from_pairs([(0.0, 1.0), (1.0, 1.0)])
