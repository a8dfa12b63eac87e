from __future__ import annotations

import re

import pytest

from rlocality.algebra import boolean2, goedel_chain, lukasiewicz_chain

CRITERIA = {
    1: "algebra suite: flags and fault witnesses",
    2: "two-point asymmetry counterexample",
    3: "single-point monadic pair",
    4: "isotype / game / sentence triangle, exhaustive",
    5: "Hanf theorem and swap corollary harnesses",
    6: "distance encodings against BFS",
    7: "prenex form preserves values",
    8: "relativization against spheres",
    9: "query case studies and stable reproductions",
    10: "small-instance substitution suites",
}

_outcomes: dict[int, list[tuple[str, str]]] = {}
_PATTERN = re.compile(r"test_criterion_(\d+)")


def pytest_runtest_logreport(report):
    m = _PATTERN.search(report.nodeid)
    if not m or "test_acceptance" not in report.nodeid:
        return
    if report.when == "call" or report.outcome != "passed":
        _outcomes.setdefault(int(m.group(1)), []).append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for num, desc in CRITERIA.items():
        results = _outcomes.get(num)
        if not results:
            line = f"criterion {num:2d}: NOT RUN  {desc}"
        else:
            failed = [name for name, outcome in results if outcome != "passed"]
            verdict = "PASS" if not failed else "FAIL"
            line = f"criterion {num:2d}: {verdict}  {desc}"
            if failed:
                line += f"  (failing: {', '.join(failed)})"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def l3():
    return lukasiewicz_chain(3)


@pytest.fixture(scope="session")
def g3():
    return goedel_chain(3)


@pytest.fixture(scope="session")
def g5():
    return goedel_chain(5)


@pytest.fixture(scope="session")
def b2():
    return boolean2()
