import re
from collections import defaultdict

import pytest

from flopslope.catalog import get_entry

CRITERION_TITLES = {
    1: "boundary and negative-section slope invariants on F1",
    2: "conic blow-up family: slope, flop correction, zero-angle limit",
    3: "anticanonical F1 fiber degeneration: flop polynomial and 12/13",
    4: "two-point anticanonical blow-up: slope positivity and 21/25",
    5: "flopped triple products against the blow-up oracle",
    6: "closed form versus general symbolic engine",
    7: "adjoint-ample small-angle pipeline",
    8: "dichotomy routing and closed-form identity",
    9: "ampleness and pseudoeffective threshold table",
    10: "deterministic verification suite",
}

_results: dict[int, list[bool]] = defaultdict(list)


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    m = re.search(r"test_criterion_(\d+)", report.nodeid)
    if m:
        _results[int(m.group(1))].append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for num in sorted(_results):
        ok = all(_results[num])
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(
            f"{status}  criterion {num:2d}: {CRITERION_TITLES.get(num, '')}")


@pytest.fixture(scope="session")
def f1_pair():
    return get_entry("f1_e_plus_f").build().pair


@pytest.fixture(scope="session")
def p2_conic_pair():
    return get_entry("p2_conic").build().pair


@pytest.fixture(scope="session")
def f1_anticanonical():
    return get_entry("f1_anticanonical").build()


@pytest.fixture(scope="session")
def bl2p2_anticanonical():
    return get_entry("bl2p2_anticanonical").build()
