import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dsd.errors import EmptyGraphError, EmptySubgraphError, ParseError
from dsd.generators import complete_graph, gnp
from dsd.graph import (
    Graph,
    density,
    induced_edge_count,
    load_edge_list,
    parse_edge_list,
    write_edge_list,
)

from .oracles import edge_list, recount_edges


def parse(text, **kw):
    return parse_edge_list(io.StringIO(text), **kw)


def test_duplicate_directions_collapse():
    g = parse("0 1\n1 0\n1 2\n")
    assert (g.num_vertices, g.num_edges, g.raw_line_count) == (3, 2, 3)


def test_self_loop_dropped_by_default():
    g = parse("5 5\n5 6\n")
    assert (g.num_vertices, g.num_edges) == (2, 1)
    assert g.degree(g.index_of(5)) == 1
    assert g.self_loop_count == 1


def test_self_loop_retained():
    g = parse("5 5\n5 6\n", retain_self_loops=True)
    v = g.index_of(5)
    assert g.num_edges == 2
    assert g.degree(v) == 2
    assert g.has_edge(v, v)
    g.check()


def test_comments_blank_lines_and_tabs():
    g = parse("# FromNodeId\tToNodeId\n\n10\t20\n# mid comment\n20\t30\n")
    assert g.num_edges == 2
    assert list(g.labels) == [10, 20, 30]


def test_labels_first_appearance_order():
    g = parse("7 3\n3 100\n42 7\n")
    assert list(g.labels) == [7, 3, 100, 42]
    assert g.index_of(42) == 3
    assert g.label_of(2) == 100


def test_csv_with_header():
    g = parse("id1,id2\n0,1\n1,2\n", skip_header=True)
    assert g.num_edges == 2


@pytest.mark.parametrize("text,line", [
    ("0 1\n1 x\n", 2),
    ("0 1\n# c\n1 2 3\n", 3),
    ("4\n", 1),
    ("1 -2\n", 1),
])
def test_malformed_lines_report_line_number(text, line):
    with pytest.raises(ParseError) as err:
        parse(text)
    assert err.value.line == line
    assert f"{line}:" in str(err.value)


@pytest.mark.parametrize("text", ["", "# only a comment\n", "3 3\n"])
def test_empty_input(text):
    with pytest.raises(EmptyGraphError):
        parse(text)


def test_load_plain_and_gzip(tmp_path):
    import gzip

    body = "0 1\n1 2\n2 0\n"
    (tmp_path / "t.txt").write_text(body)
    with gzip.open(tmp_path / "t.txt.gz", "wt") as fh:
        fh.write(body)
    a = load_edge_list(tmp_path / "t.txt")
    b = load_edge_list(tmp_path / "t.txt.gz")
    assert a.num_edges == b.num_edges == 3


def test_density_examples():
    assert density(6, 4).value == 1.5
    assert density(15, 6).value == 2.5
    assert math.isclose(density(28980, 5242).value, 5.5284, rel_tol=1e-4)
    with pytest.raises(EmptySubgraphError):
        density(3, 0)


@given(st.integers(0, 10**9), st.integers(1, 10**6))
def test_density_value_times_vertices(e, v):
    d = density(e, v)
    assert math.isclose(d.value * v, e, rel_tol=2**-52, abs_tol=0)


def test_induced_edge_count_k4():
    g = complete_graph(4)
    assert induced_edge_count(g, np.ones(4, bool)) == 6
    assert induced_edge_count(g, [0, 2, 3]) == 3
    assert induced_edge_count(g, lambda v: v != 1) == 3


def test_induced_edge_count_matches_double_loop():
    rng = np.random.default_rng(3)
    for _ in range(20):
        g = gnp(12, 0.3, rng)
        subset = [v for v in range(12) if rng.random() < 0.5]
        edges = edge_list(g)
        slow = sum(1 for i in subset for j in subset if i < j and (i, j) in set(edges))
        assert induced_edge_count(g, subset) == slow == recount_edges(edges, subset)


edge_lists = st.lists(st.tuples(st.integers(0, 30), st.integers(0, 30)), min_size=1, max_size=80)


@settings(max_examples=150, deadline=None)
@given(edge_lists, st.booleans())
def test_structure_invariants(pairs, loops):
    if not loops and all(u == v for u, v in pairs):
        return
    g = Graph.from_edges(pairs, retain_self_loops=loops)
    g.check()
    # symmetry scan over every counted edge
    for u, v in g.edge_array():
        assert g.has_edge(u, v) and g.has_edge(v, u)
    distinct = {frozenset(p) for p in pairs}
    if not loops:
        distinct = {p for p in distinct if len(p) == 2}
    assert g.num_edges == len(distinct)
    loop_count = int(g.loop_mask.sum())
    assert int(g.base_degree.sum()) == 2 * g.num_edges - loop_count
    if not loops:
        assert loop_count == 0
    assert set(g.labels.tolist()) == {x for p in pairs for x in p}


@settings(max_examples=100, deadline=None)
@given(edge_lists)
def test_parse_is_idempotent(pairs):
    pairs = [(u, v) for u, v in pairs if u != v]
    if not pairs:
        return
    text = "".join(f"{u} {v}\n" for u, v in pairs)
    g1 = parse(text)
    buf = io.StringIO()
    write_edge_list(g1, buf)
    g2 = parse(buf.getvalue())
    assert g2.num_vertices == g1.num_vertices and g2.num_edges == g1.num_edges

    def labelled(g):
        return {frozenset((int(g.labels[u]), int(g.labels[v]))) for u, v in g.edge_array()}

    assert labelled(g1) == labelled(g2)
    assert np.array_equal(np.sort(g1.base_degree), np.sort(g2.base_degree))
    # and a second round trip changes nothing
    buf2 = io.StringIO()
    write_edge_list(g2, buf2)
    g3 = parse(buf2.getvalue())
    assert labelled(g3) == labelled(g2)


def test_graph_is_read_only(k4):
    with pytest.raises(ValueError):
        k4.indices[0] = 3
    with pytest.raises(ValueError):
        k4.base_degree[0] = 0


def test_subgraph_keeps_labels():
    g = parse("10 20\n20 30\n30 10\n30 40\n")
    sub = g.subgraph([g.index_of(10), g.index_of(20), g.index_of(30)])
    assert sub.num_edges == 3
    assert sorted(sub.labels.tolist()) == [10, 20, 30]
