"""Densest-core augmentation (CBDS-P phase 2).

Starting from the densest core found by :func:`dsd.coredec.decompose`, add
every outside vertex whose number of edges into the core exceeds the core's
density.  Such a vertex alone would raise the density by
``(n*e_tilde - e) / (n*(n+1))`` (see :func:`density_gain`); adding the whole
batch at once still raises it, and edges among the added vertices only help.

Counts of core-incident edges are kept in half-units (a retained self-loop
is worth 0.5) so every comparison is integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from ._parallel import ForkJoin, split
from .coredec import CoreDecomposition
from .graph import DensityValue, Graph, density, gather_neighbors


class GainTerms(NamedTuple):
    n: int
    e: int | Fraction
    e_tilde: int | float | Fraction

    def validate(self) -> None:
        if self.n < 1 or self.e < 0 or self.e_tilde < 0:
            raise ValueError(f"invalid gain terms {self}")


def density_gain(terms: GainTerms) -> Fraction:
    """Density change from adding one vertex with ``e_tilde`` edges into a
    subgraph of ``n`` vertices and ``e`` edges.  Positive iff ``e_tilde > e/n``."""
    terms = GainTerms(*terms)
    terms.validate()
    n, e, et = terms.n, Fraction(terms.e), Fraction(terms.e_tilde)
    return (n * et - e) / (n * (n + 1))


@dataclass
class AugmentResult:
    eligible_count: int
    legit_vertices: np.ndarray
    legit_halfunits: np.ndarray  # per legit vertex, 2 * legits
    core_incident_halfunits: int
    cross_edges: int
    core_density: DensityValue
    final_density: DensityValue
    max_density_core: int
    labels: np.ndarray  # coreness with legit vertices raised to max_density_core

    @property
    def legit_count(self) -> int:
        return len(self.legit_vertices)

    @property
    def intermediate_edges(self) -> Fraction:
        return Fraction(self.core_incident_halfunits, 2) + self.cross_edges

    def member_mask(self) -> np.ndarray:
        return self.labels >= self.max_density_core

    def members(self) -> np.ndarray:
        return np.flatnonzero(self.member_mask())


def find_eligible(graph: Graph, decomp: CoreDecomposition, workers: int = 1) -> np.ndarray:
    """Vertices with ``max_density < coreness < max_density_core``."""
    core = decomp.coreness
    e, v = decomp.max_density.edges, decomp.max_density.vertices
    ids = np.arange(graph.num_vertices, dtype=np.int64)

    def scan(chunk: np.ndarray) -> np.ndarray:
        c = core[chunk]
        # c > e/v  <=>  c*v > e, compared exactly
        ok = (c * v > e) & (c < decomp.max_density_core)
        return chunk[ok]

    with ForkJoin(workers) as team:
        parts = team.map(scan, split(ids, workers))
    return np.concatenate(parts) if parts else np.empty(0, np.int64)


def filter_legit(
    graph: Graph,
    decomp: CoreDecomposition,
    eligible: np.ndarray,
    workers: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """Split out the eligible vertices whose core-incident edge count beats
    the core density.

    Returns ``(legit, halfunits)`` with ``legit`` sorted ascending and
    ``halfunits[i]`` equal to twice the legits count of ``legit[i]``.
    """
    core = decomp.coreness
    mdc = decomp.max_density_core
    e2 = 2 * decomp.max_density.edges
    v = decomp.max_density.vertices
    eligible = np.asarray(eligible, dtype=np.int64)

    def count(chunk: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        src, nbr = gather_neighbors(graph, chunk)
        inside = core[nbr] >= mdc
        loop = ~inside & (nbr == src)
        half = 2 * inside.astype(np.int64) + loop.astype(np.int64)
        pos = np.repeat(np.arange(len(chunk)), graph.base_degree[chunk])
        totals = np.bincount(pos, weights=half, minlength=len(chunk)).astype(np.int64)
        # legits > e/v  <=>  halfunits * v > 2e
        ok = totals * v > e2
        return chunk[ok], totals[ok]

    with ForkJoin(workers) as team:
        parts = team.map(count, split(eligible, workers))
    if not parts:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    legit = np.concatenate([p[0] for p in parts])
    half = np.concatenate([p[1] for p in parts])
    order = np.argsort(legit, kind="stable")
    return legit[order], half[order]


def cross_edges(graph: Graph, legit: np.ndarray, workers: int = 1) -> int:
    """Edges among the legit vertices by the pairwise scan ``i < j``."""
    legit = np.asarray(legit, dtype=np.int64)
    t = len(legit)
    if t < 2:
        return 0
    rows = np.arange(t - 1, dtype=np.int64)

    def scan(chunk: np.ndarray) -> int:
        total = 0
        for i in chunk:
            nbrs = graph.neighbors(legit[i])
            if len(nbrs) == 0:
                continue
            later = legit[i + 1:]
            pos = np.searchsorted(nbrs, later)
            pos[pos == len(nbrs)] = 0
            total += int(np.count_nonzero(nbrs[pos] == later))
        return total

    with ForkJoin(workers) as team:
        return sum(team.map(scan, split(rows, workers)))


def augment(graph: Graph, decomp: CoreDecomposition, workers: int = 1) -> AugmentResult:
    eligible = find_eligible(graph, decomp, workers)
    legit, half = filter_legit(graph, decomp, eligible, workers)
    cross = cross_edges(graph, legit, workers)
    core_half = int(half.sum())
    edges = Fraction(2 * decomp.m_e + core_half, 2) + cross
    if edges.denominator == 1:
        edges = int(edges)
    final = density(edges, decomp.m_v + len(legit))
    labels = decomp.coreness.copy()
    labels[legit] = decomp.max_density_core
    return AugmentResult(
        eligible_count=len(eligible),
        legit_vertices=legit,
        legit_halfunits=half,
        core_incident_halfunits=core_half,
        cross_edges=cross,
        core_density=decomp.max_density,
        final_density=final,
        max_density_core=decomp.max_density_core,
        labels=labels,
    )
