"""Graph data model, SNAP edge-list ingestion and density arithmetic.

A :class:`Graph` is an immutable CSR structure over dense internal vertex ids
``0..n-1``.  External ids from the input file are kept in ``labels`` (internal
-> external) and remapped in first-appearance order, so sparse or huge id
spaces cost nothing.  Algorithms never mutate a graph; they keep their own
degree arrays and mark vertices as logically removed.
"""

from __future__ import annotations

import gzip
import io
import os
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, TextIO, Union

import numpy as np

from .errors import EmptyGraphError, EmptySubgraphError, InvariantError, ParseError

Members = Union[np.ndarray, Callable[[int], bool], Iterable[int]]


@dataclass(frozen=True)
class DensityValue:
    """Edge density ``edges / vertices`` held as an exact pair.

    ``edges`` is an ``int`` except when half-unit self-loop contributions are
    involved (augmentation with retained loops), where it is a ``Fraction``.
    """

    edges: int | Fraction
    vertices: int

    def __post_init__(self):
        if self.vertices < 1:
            raise EmptySubgraphError("density of an empty vertex set is undefined")

    @property
    def value(self) -> float:
        return float(self.as_fraction())

    def as_fraction(self) -> Fraction:
        return Fraction(self.edges) / self.vertices

    def __float__(self) -> float:
        return self.value

    def _cmp_key(self, other) -> tuple[Fraction, Fraction]:
        if isinstance(other, DensityValue):
            return self.as_fraction(), other.as_fraction()
        if isinstance(other, (Rational, int)):
            return self.as_fraction(), Fraction(other)
        return NotImplemented  # type: ignore[return-value]

    def __lt__(self, other):
        a, b = self._cmp_key(other)
        return a < b

    def __le__(self, other):
        a, b = self._cmp_key(other)
        return a <= b

    def __gt__(self, other):
        a, b = self._cmp_key(other)
        return a > b

    def __ge__(self, other):
        a, b = self._cmp_key(other)
        return a >= b

    def same_ratio(self, other: "DensityValue") -> bool:
        return self.as_fraction() == other.as_fraction()

    def __str__(self) -> str:
        return f"{self.edges}/{self.vertices} ({self.value:.6g})"


def density(edges: int | Fraction, vertices: int) -> DensityValue:
    """Density of a subgraph with the given edge and vertex counts.

    Raises :class:`EmptySubgraphError` for ``vertices == 0`` instead of
    silently returning zero.
    """
    return DensityValue(edges, int(vertices))


class Graph:
    """Immutable, deduplicated, undirected graph in CSR form."""

    def __init__(
        self,
        indptr: np.ndarray,
        indices: np.ndarray,
        labels: np.ndarray,
        num_edges: int,
        *,
        self_loops_retained: bool = False,
        self_loop_count: int = 0,
        raw_line_count: int | None = None,
    ):
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.labels = np.asarray(labels, dtype=np.int64)
        self.num_vertices = len(self.indptr) - 1
        self.num_edges = int(num_edges)
        self.base_degree = np.diff(self.indptr)
        self.self_loops_retained = self_loops_retained
        # distinct loops seen in the input, whether or not they were kept
        self.self_loop_count = int(self_loop_count)
        self.raw_line_count = num_edges if raw_line_count is None else int(raw_line_count)
        for arr in (self.indptr, self.indices, self.labels, self.base_degree):
            arr.setflags(write=False)
        self._index_of: dict[int, int] | None = None
        if self_loops_retained:
            src = np.repeat(np.arange(self.num_vertices), self.base_degree)
            self.loop_mask = np.zeros(self.num_vertices, dtype=bool)
            self.loop_mask[src[src == self.indices]] = True
        else:
            self.loop_mask = np.zeros(self.num_vertices, dtype=bool)
        self.loop_mask.setflags(write=False)

    # construction -----------------------------------------------------------

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[int, int]] | np.ndarray,
        *,
        retain_self_loops: bool = False,
        num_vertices: int | None = None,
    ) -> "Graph":
        """Build a graph from ``(u, v)`` pairs.

        Without ``num_vertices`` the pairs are external labels remapped in
        first-appearance order.  With it, pairs are taken as internal ids in
        ``[0, num_vertices)`` and labels are the identity, which keeps
        isolated vertices of synthetic graphs.
        """
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        arr = arr.reshape(-1, 2)
        if num_vertices is None:
            return _build(arr[:, 0], arr[:, 1], retain_self_loops, raw_line_count=len(arr))
        if len(arr) and (arr.min() < 0 or arr.max() >= num_vertices):
            raise ValueError("edge endpoint outside [0, num_vertices)")
        return _build(
            arr[:, 0], arr[:, 1], retain_self_loops, raw_line_count=len(arr),
            labels=np.arange(num_vertices, dtype=np.int64),
        )

    # queries ----------------------------------------------------------------

    def __repr__(self) -> str:
        return f"Graph(n={self.num_vertices}, m={self.num_edges}, raw={self.raw_line_count})"

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    @property
    def adjacency(self) -> list[np.ndarray]:
        return [self.neighbors(v) for v in range(self.num_vertices)]

    def degree(self, v: int) -> int:
        return int(self.base_degree[v])

    def max_degree(self) -> int:
        return int(self.base_degree.max()) if self.num_vertices else 0

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.neighbors(u)
        i = np.searchsorted(nbrs, v)
        return bool(i < len(nbrs) and nbrs[i] == v)

    def index_of(self, label: int) -> int:
        if self._index_of is None:
            self._index_of = {int(x): i for i, x in enumerate(self.labels)}
        return self._index_of[int(label)]

    def label_of(self, v: int) -> int:
        return int(self.labels[v])

    def edge_array(self) -> np.ndarray:
        """Every edge once as an ``(m, 2)`` array with ``u <= v``."""
        src = np.repeat(np.arange(self.num_vertices, dtype=np.int64), self.base_degree)
        keep = src <= self.indices
        return np.column_stack([src[keep], self.indices[keep]])

    def density(self) -> DensityValue:
        if self.num_vertices == 0:
            raise EmptyGraphError("graph has no vertices")
        return density(self.num_edges, self.num_vertices)

    def subgraph(self, members: Members) -> "Graph":
        """Induced subgraph, internal ids renumbered, original labels kept."""
        mask = member_mask(self, members)
        keep = np.flatnonzero(mask)
        remap = np.full(self.num_vertices, -1, dtype=np.int64)
        remap[keep] = np.arange(len(keep))
        e = self.edge_array()
        e = e[mask[e[:, 0]] & mask[e[:, 1]]]
        g = _build(
            remap[e[:, 0]], remap[e[:, 1]], self.self_loops_retained,
            raw_line_count=len(e), labels=np.arange(len(keep), dtype=np.int64),
        )
        g.labels = self.labels[keep]
        g.labels.setflags(write=False)
        return g

    def check(self) -> None:
        """Verify structural invariants; raises :class:`InvariantError`."""
        n = self.num_vertices
        src = np.repeat(np.arange(n, dtype=np.int64), self.base_degree)
        dst = self.indices
        if len(dst) and (dst.min() < 0 or dst.max() >= n):
            raise InvariantError("neighbor index out of range")
        same_row = src[1:] == src[:-1]
        if np.any(dst[1:][same_row] <= dst[:-1][same_row]):
            raise InvariantError("adjacency lists not strictly ascending")
        fwd = np.sort(src * n + dst)
        rev = np.sort(dst * n + src)
        if not np.array_equal(fwd, rev):
            raise InvariantError("adjacency not symmetric")
        loops = int(np.count_nonzero(src == dst))
        if loops and not self.self_loops_retained:
            raise InvariantError("self-loop present while loops are dropped")
        if int(self.base_degree.sum()) != 2 * self.num_edges - loops:
            raise InvariantError("degree sum does not match edge count")
        if len(np.unique(self.labels)) != n:
            raise InvariantError("labels are not a bijection")


def _build(
    src: np.ndarray,
    dst: np.ndarray,
    retain_self_loops: bool,
    *,
    raw_line_count: int,
    labels: np.ndarray | None = None,
) -> Graph:
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    if labels is None:
        tokens = np.column_stack([src, dst]).ravel()
        uniq, first, inv = np.unique(tokens, return_index=True, return_inverse=True)
        order = np.argsort(first, kind="stable")
        labels = uniq[order]
        rank = np.empty(len(uniq), dtype=np.int64)
        rank[order] = np.arange(len(uniq))
        internal = rank[inv.ravel()].reshape(-1, 2)
        src, dst = internal[:, 0], internal[:, 1]
    n = len(labels)
    lo = np.minimum(src, dst)
    hi = np.maximum(src, dst)
    keys = np.unique(lo * max(n, 1) + hi)
    lo, hi = keys // max(n, 1), keys % max(n, 1)
    is_loop = lo == hi
    loop_count = int(is_loop.sum())
    if not retain_self_loops:
        lo, hi = lo[~is_loop], hi[~is_loop]
        is_loop = is_loop[~is_loop]
    m = len(lo)
    proper = ~is_loop
    s = np.concatenate([lo, hi[proper]])
    d = np.concatenate([hi, lo[proper]])
    order = np.lexsort((d, s))
    s, d = s[order], d[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(s, minlength=n), out=indptr[1:])
    return Graph(
        indptr, d, labels, m,
        self_loops_retained=retain_self_loops,
        self_loop_count=loop_count,
        raw_line_count=raw_line_count,
    )


def parse_edge_list(
    stream: Iterable[str],
    retain_self_loops: bool = False,
    *,
    source: str | None = None,
    skip_header: bool = False,
) -> Graph:
    """Parse a SNAP-style edge list.

    Data lines hold two non-negative integers separated by whitespace (a
    comma is accepted too, for the MUSAE ``.csv`` exports).  ``#`` lines and
    blank lines are ignored.  With ``skip_header`` the first non-comment line
    is discarded unparsed.
    """
    us: list[int] = []
    vs: list[int] = []
    header_pending = skip_header
    for lineno, line in enumerate(stream, start=1):
        line = line.strip()
        if not line or line[0] == "#":
            continue
        if header_pending:
            header_pending = False
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            raise ParseError(f"expected 2 fields, found {len(parts)}: {line!r}", lineno, source)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer token in {line!r}", lineno, source) from None
        if u < 0 or v < 0:
            raise ParseError(f"negative vertex id in {line!r}", lineno, source)
        us.append(u)
        vs.append(v)
    if not us:
        raise EmptyGraphError(f"{source or 'input'}: no edges")
    g = _build(np.array(us, dtype=np.int64), np.array(vs, dtype=np.int64),
               retain_self_loops, raw_line_count=len(us))
    if g.num_edges == 0:
        raise EmptyGraphError(f"{source or 'input'}: no edges after dropping self-loops")
    return g


def open_text(path: str | os.PathLike) -> TextIO:
    path = os.fspath(path)
    if path.endswith(".gz"):
        return io.TextIOWrapper(gzip.open(path, "rb"), encoding="utf-8")
    return open(path, "r", encoding="utf-8")


def load_edge_list(path: str | os.PathLike, retain_self_loops: bool = False,
                   skip_header: bool = False) -> Graph:
    with open_text(path) as fh:
        return parse_edge_list(fh, retain_self_loops, source=os.fspath(path),
                               skip_header=skip_header)


def write_edge_list(graph: Graph, stream: TextIO) -> None:
    """Write each deduplicated edge once, using external labels."""
    for u, v in graph.edge_array():
        stream.write(f"{graph.labels[u]}\t{graph.labels[v]}\n")


def member_mask(graph: Graph, members: Members) -> np.ndarray:
    n = graph.num_vertices
    if isinstance(members, np.ndarray) and members.dtype == bool:
        if members.shape != (n,):
            raise ValueError("member mask has wrong length")
        return members
    if callable(members):
        return np.fromiter((bool(members(v)) for v in range(n)), dtype=bool, count=n)
    mask = np.zeros(n, dtype=bool)
    idx = np.fromiter(members, dtype=np.int64)
    mask[idx] = True
    return mask


def induced_edge_count(graph: Graph, members: Members) -> int:
    """Number of edges with both endpoints in ``members`` (each counted once).

    ``members`` may be a boolean mask, a predicate over internal ids, or an
    iterable of internal ids.
    """
    mask = member_mask(graph, members)
    src = np.repeat(mask, graph.base_degree)
    both = src & mask[graph.indices]
    loops = int(np.count_nonzero(graph.loop_mask & mask))
    # each proper edge is seen from both ends, each loop once
    return (int(np.count_nonzero(both)) - loops) // 2 + loops


def induced_density(graph: Graph, members: Members) -> DensityValue:
    mask = member_mask(graph, members)
    return density(induced_edge_count(graph, mask), int(mask.sum()))


def gather_neighbors(graph: Graph, verts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Flattened ``(source, neighbor)`` pairs for every adjacency entry of ``verts``."""
    verts = np.asarray(verts, dtype=np.int64)
    counts = graph.base_degree[verts]
    total = int(counts.sum())
    if total == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    starts = graph.indptr[verts]
    offsets = np.repeat(starts - (np.cumsum(counts) - counts), counts) + np.arange(total)
    return np.repeat(verts, counts), graph.indices[offsets]
