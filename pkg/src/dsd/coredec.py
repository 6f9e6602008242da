"""Level-synchronous parallel k-core decomposition with a core-density trace.

This is the PKC scheme extended to record, after every level ``k``, the
density of what survives (the ``(k+1)``-core) and to remember the densest
such core.  At the end the working degree array holds the coreness of every
vertex.

Within a level, workers first scan their contiguous vertex ranges for live
vertices of degree exactly ``k`` into private buffers.  The cascade then
runs in rounds: every worker drains its buffer and emits one decrement per
neighbour whose degree is still above ``k``.  After the join the decrements
are applied together.  A neighbour at degree ``d`` receiving ``c``
decrements keeps ``min(c, d - k)`` of them; the surplus is the compensating
re-increment of an overshooting atomic decrement, and a neighbour that lands
on ``k`` joins the next round's buffers.  Which vertices leave at level
``k`` and the degrees left behind do not depend on the interleaving, so the
result is identical for any worker count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ._parallel import ForkJoin, split
from .errors import EmptyGraphError, InvariantError
from .graph import DensityValue, Graph, density, gather_neighbors


class LevelRecord(NamedTuple):
    k: int
    remaining_vertices: int
    remaining_edges: int
    density: DensityValue  # density of the (k+1)-core


@dataclass
class LevelState:
    """Global accumulators of the level loop."""

    visited: int = 0
    deleted: int = 0
    aux: int = 0
    removed_loops: int = 0
    decrements: int = 0  # attempted decrements, for the O(m + n) check

    def removed_edges(self) -> int:
        # deleted + aux counts every removed proper edge from both ends and
        # a removed loop from one end only
        total = self.deleted + self.aux + self.removed_loops
        if total % 2:
            raise InvariantError("edge accounting is not even")
        return total // 2


@dataclass
class CoreDecomposition:
    coreness: np.ndarray
    level_trace: list[LevelRecord]
    max_density: DensityValue
    max_density_core: int
    m_v: int
    m_e: int
    k_max: int
    levels_executed: int = 0
    stats: LevelState = field(default_factory=LevelState, compare=False)

    def member_mask(self) -> np.ndarray:
        return self.coreness >= self.max_density_core


def core_members(decomp: CoreDecomposition) -> np.ndarray:
    """Vertices of the densest core: ``coreness >= max_density_core``."""
    return np.flatnonzero(decomp.member_mask())


def decompose(graph: Graph, workers: int = 1, *, check_invariants: bool = False) -> CoreDecomposition:
    n = graph.num_vertices
    if n == 0:
        raise EmptyGraphError("cannot decompose an empty graph")
    deg = graph.base_degree.copy()
    vertex_ids = np.arange(n, dtype=np.int64)
    ranges = split(vertex_ids, workers)
    st = LevelState()
    trace: list[LevelRecord] = []
    best: DensityValue | None = None
    best_core = 0
    m_v, m_e = n, 0
    k = 0
    with ForkJoin(workers) as team:
        while st.visited < n:

            def scan(rng: np.ndarray) -> np.ndarray:
                return rng[deg[rng] == k]

            buffers = team.map(scan, ranges)
            popped_total = 0
            while any(len(b) for b in buffers):
                buffers = [b for b in buffers if len(b)]

                def drain(buf: np.ndarray) -> tuple[np.ndarray, int]:
                    src, nbr = gather_neighbors(graph, buf)
                    proper = nbr != src
                    loops = len(nbr) - int(proper.sum())
                    nbr = nbr[proper]
                    return nbr[deg[nbr] > k], loops

                out = team.map(drain, buffers)
                popped = sum(len(b) for b in buffers)
                popped_total += popped
                st.deleted += k * popped
                st.removed_loops += sum(o[1] for o in out)
                targets = np.concatenate([o[0] for o in out])
                st.decrements += len(targets)
                if len(targets) == 0:
                    break
                hit, count = np.unique(targets, return_counts=True)
                room = deg[hit] - k
                kept = np.minimum(count, room)
                undone = count - kept
                st.aux += int(kept.sum()) - int(undone.sum())
                st.deleted += int(undone.sum())
                deg[hit] -= kept
                landed = hit[deg[hit] == k]
                buffers = split(landed, workers)
            st.visited += popped_total
            # barrier
            if st.visited < n:
                rem_v = n - st.visited
                rem_e = graph.num_edges - st.removed_edges()
                d = density(rem_e, rem_v)
                trace.append(LevelRecord(k, rem_v, rem_e, d))
                if best is None or d > best:
                    best, best_core, m_v, m_e = d, k + 1, rem_v, rem_e
                if check_invariants:
                    _check_level(graph, deg, k, rem_e)
            elif graph.num_edges - st.removed_edges() != 0:
                raise InvariantError("edges left after every vertex was removed")
            k += 1

    if best is None:
        # no edges at all: the whole graph (0-core) is the only candidate
        best = density(0, n)
    return CoreDecomposition(
        coreness=deg,
        level_trace=trace,
        max_density=best,
        max_density_core=best_core,
        m_v=m_v,
        m_e=m_e,
        k_max=int(deg.max()),
        levels_executed=k,
        stats=st,
    )


def _check_level(graph: Graph, deg: np.ndarray, k: int, rem_e: int) -> None:
    from .graph import induced_edge_count

    alive = deg > k
    if induced_edge_count(graph, alive) != rem_e:
        raise InvariantError(f"level {k}: remaining edge count drifted")
