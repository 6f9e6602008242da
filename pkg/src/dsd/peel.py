"""Parallel batch peeling (P-Bahmani).

Each pass removes, all at once, every live vertex whose current degree is at
most ``2(1+eps) * rho`` where ``rho`` is the density of the live subgraph at
the start of the pass.  The densest intermediate subgraph is remembered as a
pass index: it is ``{v : removal_pass[v] > best_pass}``.

A pass is two fork-join phases.  Phase 1 filters each worker's slice of the
live list against the threshold (read-only, no communication).  Phase 2
walks the failed vertices' adjacency; each worker emits its decrement
targets and an edge-removal partial, and the decrements are applied as one
unordered subtraction after the join.  Subtraction commutes, so the outcome
is the same for any number of workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from ._parallel import ForkJoin, split
from .errors import EmptyGraphError, InvariantError
from .graph import DensityValue, Graph, density, gather_neighbors, induced_edge_count

NEVER = np.iinfo(np.int64).max


def as_epsilon(epsilon) -> Fraction:
    """Exact rational for ``epsilon``; floats are read by their decimal repr."""
    if isinstance(epsilon, float):
        eps = Fraction(repr(epsilon))
    else:
        eps = Fraction(epsilon)
    if eps < 0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon}")
    return eps


@dataclass(frozen=True)
class PeelConfig:
    epsilon: float | Fraction = 0
    workers: int = 1

    def __post_init__(self):
        as_epsilon(self.epsilon)
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")


class PassRecord(NamedTuple):
    pass_index: int
    vertices: int
    edges: int
    density: DensityValue | None  # None once the graph is exhausted


@dataclass
class PeelState:
    live_degree: np.ndarray
    removal_pass: np.ndarray
    remaining_vertices: int
    remaining_edges: int
    rho: DensityValue
    rho_best: DensityValue
    best_pass: int = 0

    def check(self, graph: Graph) -> None:
        alive = self.removal_pass == NEVER
        if int(alive.sum()) != self.remaining_vertices:
            raise InvariantError("remaining vertex count drifted")
        if induced_edge_count(graph, alive) != self.remaining_edges:
            raise InvariantError("remaining edge count drifted")


@dataclass
class PeelResult:
    best_density: DensityValue
    best_pass: int
    removal_pass: np.ndarray
    passes_executed: int
    pass_trace: list[PassRecord]
    epsilon: Fraction
    workers: int = field(default=1, compare=False)

    def member_mask(self) -> np.ndarray:
        return self.removal_pass > self.best_pass

    def members(self) -> np.ndarray:
        return np.flatnonzero(self.member_mask())


def threshold(rho: DensityValue | float, epsilon) -> float:
    """Removal threshold ``2(1+eps) * rho``; degrees at or below it fail."""
    r = rho.as_fraction() if isinstance(rho, DensityValue) else Fraction(rho)
    return float(2 * (1 + as_epsilon(epsilon)) * r)


def _threshold_floor(edges: int, vertices: int, eps: Fraction) -> int:
    # deg <= 2(1+eps)e/v  <=>  deg <= floor(...) for integer deg; exact for ties
    return math.floor(2 * (1 + eps) * Fraction(edges, vertices))


def peel_densest(
    graph: Graph,
    config: PeelConfig | None = None,
    *,
    epsilon=None,
    workers: int | None = None,
    check_invariants: bool = False,
) -> PeelResult:
    config = config or PeelConfig()
    eps = as_epsilon(config.epsilon if epsilon is None else epsilon)
    nworkers = config.workers if workers is None else workers
    n = graph.num_vertices
    if n == 0:
        raise EmptyGraphError("cannot peel an empty graph")

    rho0 = density(graph.num_edges, n)
    state = PeelState(
        live_degree=graph.base_degree.copy(),
        removal_pass=np.full(n, NEVER, dtype=np.int64),
        remaining_vertices=n,
        remaining_edges=graph.num_edges,
        rho=rho0,
        rho_best=rho0,
    )
    trace = [PassRecord(0, n, graph.num_edges, rho0)]
    deg = state.live_degree
    removal = state.removal_pass
    failing = np.zeros(n, dtype=bool)
    live = np.arange(n, dtype=np.int64)
    pass_no = 0

    with ForkJoin(nworkers) as team:
        while state.remaining_vertices > 0:
            pass_no += 1
            limit = _threshold_floor(state.remaining_edges, state.remaining_vertices, eps)

            def phase1(chunk: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
                fail = deg[chunk] <= limit
                return chunk[fail], chunk[~fail]

            parts = team.map(phase1, split(live, nworkers))
            failed = [p[0] for p in parts]
            live = np.concatenate([p[1] for p in parts]) if parts else live
            all_failed = np.concatenate(failed) if failed else np.empty(0, np.int64)
            if len(all_failed) == 0:
                raise InvariantError(f"pass {pass_no} removed no vertex")
            failing[all_failed] = True
            # barrier: failing[] is complete before anyone reads it

            def phase2(chunk: np.ndarray) -> tuple[np.ndarray, int]:
                src, nbr = gather_neighbors(graph, chunk)
                gone_before = removal[nbr] != NEVER
                both_failing = failing[nbr]
                to_live = ~gone_before & ~both_failing
                # an edge between two failing vertices is charged to its
                # smaller endpoint only; a loop (nbr == src) once
                shared = both_failing & (nbr >= src)
                return nbr[to_live], int(to_live.sum() + shared.sum())

            partials = team.map(phase2, split(all_failed, nworkers))
            targets = np.concatenate([p[0] for p in partials])
            np.subtract.at(deg, targets, 1)
            state.remaining_edges -= sum(p[1] for p in partials)
            state.remaining_vertices -= len(all_failed)
            removal[all_failed] = pass_no
            failing[all_failed] = False

            if state.remaining_vertices > 0:
                state.rho = density(state.remaining_edges, state.remaining_vertices)
                if state.rho > state.rho_best:
                    state.rho_best = state.rho
                    state.best_pass = pass_no
                trace.append(PassRecord(pass_no, state.remaining_vertices,
                                        state.remaining_edges, state.rho))
            else:
                if state.remaining_edges != 0:
                    raise InvariantError("edges left after all vertices were removed")
                trace.append(PassRecord(pass_no, 0, 0, None))
            if check_invariants:
                state.check(graph)

    return PeelResult(
        best_density=state.rho_best,
        best_pass=state.best_pass,
        removal_pass=removal,
        passes_executed=pass_no,
        pass_trace=trace,
        epsilon=eps,
        workers=nworkers,
    )
