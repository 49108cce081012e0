from importlib.resources import files

import pytest

from iolb.dfgraph import classify_edges, parse_program
from iolb.pebblelab import parse_cdag

DATA = files("iolb") / "data"


def load_program(name):
    return parse_program((DATA / f"{name}.prog").read_text())


def load_graph(name):
    return classify_edges(load_program(name))


def load_cdag(name):
    return parse_cdag((DATA / f"{name}.cdag").read_text())


@pytest.fixture
def data_dir():
    return DATA


# one summary line per acceptance criterion, filled in by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
