import pathlib

import pytest

from motifcensus import Graph, load_graph

DATA = pathlib.Path(__file__).parent / "data"

# one line per acceptance criterion, echoed after the test summary
CRITERION_LINES = []


def record_criterion(line: str) -> None:
    CRITERION_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.write_line(line)


def data_path(name: str) -> pathlib.Path:
    return DATA / name


@pytest.fixture
def k4() -> Graph:
    return load_graph(data_path("k4.txt"))


@pytest.fixture
def k3() -> Graph:
    return load_graph(data_path("k3.txt"))


@pytest.fixture
def path3() -> Graph:
    # path on 4 vertices, 3 edges
    return load_graph(data_path("path3.txt"))


@pytest.fixture
def ffl() -> Graph:
    # feed-forward triangle: 0->1, 0->2, 1->2
    return load_graph(data_path("ffl.txt"), directed=True)
