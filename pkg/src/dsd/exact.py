"""Exact densest-subgraph oracles.

:func:`brute_force_densest` enumerates every vertex subset of a tiny graph.
:func:`flow_exact_densest` is the classic parametric min-cut construction:
for a guess ``lam`` build

    source -> v      capacity m
    v -> sink        capacity m + 2*lam - deg(v)
    u <-> v          capacity 1 per undirected edge

whose minimum cut is ``m*n + 2*min_S(lam*|S| - e(S))``.  The cut is below
``m*n`` exactly when some ``S`` has density above ``lam``, and the source
side of the cut is such an ``S``.  Guesses are rationals ``p/q`` and every
capacity is multiplied by ``q``, so the decision is made in exact integer
arithmetic.

Both oracles drop self-loops.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import EmptyGraphError, GraphSizeError, InvariantError
from .graph import DensityValue, Graph, density

BRUTE_FORCE_CAP = 16


@dataclass
class ExactResult:
    density: DensityValue
    members: np.ndarray
    method: str  # "brute_force" | "flow"
    search_iterations: int = 0
    probes: list["Probe"] = field(default_factory=list, repr=False)


class Probe(NamedTuple):
    guess: Fraction
    found: DensityValue | None
    flow: int
    cut: int
    candidates: int  # vertices left after core pruning


# --------------------------------------------------------------------------
# max-flow


class FlowNetwork:
    """Residual network with paired arcs: arc ``a ^ 1`` is the reverse of ``a``."""

    def __init__(self, num_nodes: int):
        self.num_nodes = num_nodes
        self.adj: list[list[int]] = [[] for _ in range(num_nodes)]
        self.head: list[int] = []
        self.cap: list[int] = []
        self.capacity: list[int] = []  # original capacities, for cut checks

    def add_edge(self, u: int, v: int, cap, rev_cap=0) -> int:
        if cap < 0 or rev_cap < 0:
            raise ValueError("capacities must be non-negative")
        a = len(self.head)
        self.head += [v, u]
        self.cap += [cap, rev_cap]
        self.capacity += [cap, rev_cap]
        self.adj[u].append(a)
        self.adj[v].append(a + 1)
        return a

    def cut_capacity(self, side: set[int] | list[bool]) -> int:
        inside = side if isinstance(side, list) else [u in side for u in range(self.num_nodes)]
        total = 0
        for u in range(self.num_nodes):
            if inside[u]:
                for a in self.adj[u]:
                    if not inside[self.head[a]]:
                        total += self.capacity[a]
        return total


def max_flow(net: FlowNetwork, source: int, sink: int) -> tuple[int, list[bool]]:
    """Dinic's algorithm.  Returns the flow value and the set of nodes
    reachable from ``source`` in the final residual network (as a mask),
    which is the source side of a minimum cut."""
    if source == sink:
        raise ValueError("source and sink must differ")
    n = net.num_nodes
    adj, head, cap = net.adj, net.head, net.cap
    total = 0
    while True:
        level = [-1] * n
        level[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for a in adj[u]:
                v = head[a]
                if cap[a] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        if level[sink] < 0:
            return total, [lv >= 0 for lv in level]
        it = [0] * n
        path: list[int] = []
        u = source
        while True:
            if u == sink:
                f = min(cap[a] for a in path)
                total += f
                cut_at = -1
                for i, a in enumerate(path):
                    cap[a] -= f
                    cap[a ^ 1] += f
                    if cut_at < 0 and cap[a] == 0:
                        cut_at = i
                u = head[path[cut_at] ^ 1]
                del path[cut_at:]
                continue
            arcs = adj[u]
            i = it[u]
            lu = level[u] + 1
            while i < len(arcs):
                a = arcs[i]
                if cap[a] > 0 and level[head[a]] == lu:
                    break
                i += 1
            it[u] = i
            if i < len(arcs):
                path.append(arcs[i])
                u = head[arcs[i]]
            elif u == source:
                break
            else:
                level[u] = -1  # dead end for the rest of this phase
                a = path.pop()
                u = head[a ^ 1]
                it[u] += 1


# --------------------------------------------------------------------------
# brute force


def _simple_edges(graph: Graph) -> np.ndarray:
    e = graph.edge_array()
    return e[e[:, 0] != e[:, 1]]


def brute_force_densest(graph: Graph, cap: int = BRUTE_FORCE_CAP) -> ExactResult:
    """Exhaustive search over all non-empty subsets.

    Ties go to the smaller subset, then to the lexicographically smallest
    sorted member list.
    """
    n = graph.num_vertices
    if n == 0:
        raise EmptyGraphError("graph has no vertices")
    if n > cap:
        raise GraphSizeError(f"brute force limited to {cap} vertices, graph has {n}")
    nbr_mask = np.zeros(n, dtype=np.int64)
    for u, v in _simple_edges(graph):
        nbr_mask[u] |= 1 << int(v)
        nbr_mask[v] |= 1 << int(u)
    size = 1 << n
    edges = np.zeros(size, dtype=np.int64)
    for i in range(n):
        lo, hi = 1 << i, 1 << (i + 1)
        masks = np.arange(lo, hi, dtype=np.int64)
        # adding vertex i to every subset of {0..i-1}
        edges[lo:hi] = edges[:lo] + np.bitwise_count(masks & nbr_mask[i])
    sizes = np.bitwise_count(np.arange(size, dtype=np.int64))
    best: Fraction | None = None
    best_size = 0
    best_edges = 0
    for s in range(1, n + 1):
        e = int(edges[sizes == s].max())
        d = Fraction(e, s)
        if best is None or d > best:
            best, best_size, best_edges = d, s, e
    cands = np.flatnonzero((sizes == best_size) & (edges == best_edges))
    # lexicographically smallest sorted tuple == largest bit-reversed mask
    rev = np.zeros_like(cands)
    for i in range(n):
        rev |= ((cands >> i) & 1) << (n - 1 - i)
    chosen = int(cands[np.argmax(rev)])
    members = np.array([i for i in range(n) if chosen >> i & 1], dtype=np.int64)
    return ExactResult(density(best_edges, best_size), members, "brute_force", size - 1)


# --------------------------------------------------------------------------
# flow


def _k_core_mask(n: int, edges: np.ndarray, alive: np.ndarray, k: int) -> np.ndarray:
    """Sequential queue peeling restricted to ``alive``; independent of coredec."""
    alive = alive.copy()
    keep = alive[edges[:, 0]] & alive[edges[:, 1]]
    e = edges[keep]
    deg = np.bincount(e.ravel(), minlength=n)
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in e.tolist():
        adj[u].append(v)
        adj[v].append(u)
    queue = deque(int(v) for v in np.flatnonzero(alive & (deg < k)))
    for v in queue:
        alive[v] = False
    while queue:
        v = queue.popleft()
        for u in adj[v]:
            if alive[u]:
                deg[u] -= 1
                if deg[u] < k:
                    alive[u] = False
                    queue.append(u)
    return alive


def _pick_guess(lo: Fraction, hi: Fraction) -> Fraction:
    # a small-denominator rational within the middle half of (lo, hi)
    mid = (lo + hi) / 2
    width = hi - lo
    guess = mid.limit_denominator(max(1, math.ceil(4 / width)))
    if not lo < guess < hi:
        guess = mid
    return guess


def _probe(n: int, edges: np.ndarray, alive: np.ndarray, guess: Fraction):
    verts = np.flatnonzero(alive)
    local = np.full(n, -1, dtype=np.int64)
    local[verts] = np.arange(len(verts))
    e = edges[alive[edges[:, 0]] & alive[edges[:, 1]]]
    m = len(e)
    deg = np.bincount(local[e.ravel()], minlength=len(verts)) if m else np.zeros(len(verts), np.int64)
    p, q = guess.numerator, guess.denominator
    s, t = len(verts), len(verts) + 1
    net = FlowNetwork(len(verts) + 2)
    for i, d in enumerate(deg.tolist()):
        net.add_edge(s, i, m * q)
        to_sink = m * q + 2 * p - d * q
        if to_sink < 0:
            raise InvariantError("negative sink capacity")
        net.add_edge(i, t, to_sink)
    for u, v in local[e].tolist():
        net.add_edge(u, v, q, q)
    flow, side = max_flow(net, s, t)
    cut = net.cut_capacity(side)
    if cut != flow:
        raise InvariantError(f"max-flow {flow} != min-cut {cut}")
    chosen = verts[np.flatnonzero(side[:len(verts)])]
    return chosen, flow, cut


def flow_exact_densest(graph: Graph, *, prune: bool = True) -> ExactResult:
    """Exact densest subgraph by bisection on the density with min-cut probes.

    The search keeps ``lo`` (density of the best set found so far) and ``hi``
    (a proven upper bound) and stops once ``hi - lo`` is below the smallest
    possible gap between ``lo`` and any larger density of a set drawn from
    the candidates, ``1/(den(lo) * size)``.  With ``prune`` each
    probe runs on the ``ceil(lo)``-core only: every vertex of a densest
    subgraph has at least ``rho*`` neighbours inside it.
    """
    n = graph.num_vertices
    if n == 0:
        raise EmptyGraphError("graph has no vertices")
    edges = _simple_edges(graph)
    m = len(edges)
    if m == 0:
        return ExactResult(density(0, 1), np.array([0], dtype=np.int64), "flow")

    def edges_in(mask: np.ndarray) -> int:
        return int(np.count_nonzero(mask[edges[:, 0]] & mask[edges[:, 1]]))

    best = np.ones(n, dtype=bool)
    lo = Fraction(m, n)
    deg = np.bincount(edges.ravel(), minlength=n)
    hi = Fraction(int(deg.max()), 2)
    alive = np.ones(n, dtype=bool)
    if prune:
        alive = _k_core_mask(n, edges, alive, math.ceil(lo))
    probes: list[Probe] = []
    improved = False
    while True:
        size = int(alive.sum())
        if size < 2:
            break
        # any density above lo is c/d with d <= size, hence >= lo + 1/(den(lo)*size)
        if hi - lo < Fraction(1, lo.denominator * size):
            break
        # right after an improvement, probe lo itself: failure there proves
        # optimality and ends the search without further halving
        guess = lo if improved else _pick_guess(lo, hi)
        improved = False
        chosen, flow, cut = _probe(n, edges, alive, guess)
        if len(chosen):
            mask = np.zeros(n, dtype=bool)
            mask[chosen] = True
            found = density(edges_in(mask), len(chosen))
            if not found > guess:
                raise InvariantError(f"cut certified {found} which is not above {guess}")
            best, lo = mask, found.as_fraction()
            improved = True
            probes.append(Probe(guess, found, flow, cut, size))
            if prune:
                alive = _k_core_mask(n, edges, alive, math.ceil(lo))
        else:
            hi = guess
            probes.append(Probe(guess, None, flow, cut, size))
    members = np.flatnonzero(best)
    result = density(edges_in(best), len(members))
    if result.as_fraction() != lo:
        raise InvariantError("reported set does not reproduce the search bound")
    return ExactResult(result, members, "flow", len(probes), probes)
