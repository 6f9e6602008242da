from __future__ import annotations

import numpy as np
import pytest

from dsd.generators import complete_graph, fixture_f, gnp, path_graph, star_graph
from dsd.graph import Graph

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def report():
    def add(criterion: str, status: str, detail: str = "") -> None:
        line = f"[{status}] {criterion}"
        if detail:
            line += f" :: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return add


@pytest.fixture
def k4() -> Graph:
    return complete_graph(4)


@pytest.fixture
def star4() -> Graph:
    return star_graph(4)


@pytest.fixture
def path5() -> Graph:
    return path_graph(5)


@pytest.fixture
def fixture_F() -> Graph:
    return fixture_f()


def random_graphs(count: int, seed: int, max_n: int = 14):
    rng = np.random.default_rng(seed)
    probs = (0.1, 0.3, 0.5, 0.8)
    for i in range(count):
        n = int(rng.integers(1, max_n + 1))
        yield gnp(n, probs[i % len(probs)], rng)


@pytest.fixture(scope="session")
def small_graphs() -> list[Graph]:
    return list(random_graphs(60, seed=7, max_n=12))
