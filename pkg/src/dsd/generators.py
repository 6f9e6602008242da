"""Small synthetic graphs used by the tests and the documentation."""

from __future__ import annotations

import numpy as np

from .graph import Graph


def complete(n: int, offset: int = 0) -> list[tuple[int, int]]:
    return [(offset + a, offset + b) for a in range(n) for b in range(a + 1, n)]


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(complete(n), num_vertices=n)


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges([(0, i) for i in range(1, leaves + 1)], num_vertices=leaves + 1)


def path_graph(n: int) -> Graph:
    return Graph.from_edges([(i, i + 1) for i in range(n - 1)], num_vertices=n)


def gnp(n: int, p: float, rng: np.random.Generator) -> Graph:
    """Erdos-Renyi G(n, p) with internal ids ``0..n-1`` (isolated vertices kept)."""
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(len(iu)) < p
    return Graph.from_edges(np.column_stack([iu[keep], ju[keep]]), num_vertices=n)


def fixture_f_edges() -> list[tuple[int, int]]:
    """K6 on 0..5, vertex 6 joined to 0, 1, 2, and a disjoint 3-regular
    bipartite graph on 7..46 (left i joined to right i, i+1, i+2 mod 20)."""
    edges = complete(6)
    edges += [(6, 0), (6, 1), (6, 2)]
    left, right = 7, 27
    for i in range(20):
        for j in (i, i + 1, i + 2):
            edges.append((left + i, right + j % 20))
    return edges


FIXTURE_F_X = 6
FIXTURE_F_K6 = tuple(range(6))


def fixture_f() -> Graph:
    return Graph.from_edges(fixture_f_edges(), num_vertices=47)
