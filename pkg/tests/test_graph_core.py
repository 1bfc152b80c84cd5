import itertools

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from nbspectra.errors import CapabilityError, GraphParseError, PreconditionError
from nbspectra.graph_core import (SimpleGraph, are_isomorphic, canonical_form, complete, cycle,
                                  enumerate_graphs, graphs_on, isomorphism, line_graph,
                                  parse_edge_list, parse_generator_spec, parse_graph6, path, petal,
                                  to_edge_list, wheel)


def _nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


@st.composite
def graphs(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return SimpleGraph.from_edges(n, edges)


def test_graph6_known_strings():
    assert parse_graph6("C~").edges == complete(4).edges
    assert parse_graph6("A_").edges == ((0, 1),)
    assert parse_graph6("Cr").edges == ((0, 1), (0, 2), (1, 3), (2, 3))


def test_graph6_matches_networkx_encoding():
    for g in [petal(2, 3), wheel(7), complete(5), cycle(8)]:
        assert g.to_graph6() == nx.to_graph6_bytes(_nx(g), header=False).decode().strip()


@given(graphs(max_n=12))
def test_graph6_round_trip(g):
    assert parse_graph6(g.to_graph6()) == g


@given(graphs())
def test_edge_list_round_trip(g):
    assert parse_edge_list(to_edge_list(g)) == g


@pytest.mark.parametrize("bad, offset", [("C~~", 2), ("C\x7f", 1), ("", 0), ("B~", 1)])
def test_graph6_errors(bad, offset):
    with pytest.raises(GraphParseError) as exc:
        parse_graph6(bad)
    if offset is not None:
        assert exc.value.offset == offset


def test_edge_list_rejects_loops_and_negatives():
    with pytest.raises(GraphParseError):
        parse_edge_list("n 3\n0 0\n")
    with pytest.raises(GraphParseError):
        parse_edge_list("n 3\n0 -1\n")


def test_edge_list_header_and_comments():
    g = parse_edge_list("# a triangle\nn=3\n0 1\n1 2  # closing soon\n2 0\n")
    assert g == cycle(3)


def test_generators():
    assert petal(2, 3).degrees == (4, 2, 2, 2, 2)
    assert wheel(6).max_degree == 5 and wheel(6).m == 10
    assert path(3).m == 3 and path(3).n == 4
    assert parse_generator_spec("petal:2,3") == petal(2, 3)
    with pytest.raises(PreconditionError):
        parse_generator_spec("nosuch:3")


def test_line_graph_matches_networkx():
    for g in [petal(2, 3), wheel(5), complete(4)]:
        ours = line_graph(g)
        assert nx.is_isomorphic(_nx(ours), nx.line_graph(_nx(g)))


@settings(max_examples=60)
@given(graphs(), st.randoms())
def test_isomorphism_matches_networkx(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = g.relabel(perm)
    assert are_isomorphic(g, h)
    iso = isomorphism(g, h)
    assert {tuple(sorted((iso[u], iso[v]))) for u, v in g.edges} == set(h.edges)
    assert canonical_form(g) == canonical_form(h)


@settings(max_examples=60)
@given(graphs(max_n=6), graphs(max_n=6))
def test_isomorphism_decision_matches_networkx(g, h):
    if g.n == h.n:
        assert are_isomorphic(g, h) == nx.is_isomorphic(_nx(g), _nx(h))


def test_isomorphism_cap():
    with pytest.raises(CapabilityError):
        are_isomorphic(cycle(11), cycle(11))


def test_enumeration_counts():
    # numbers of graphs on n vertices (OEIS A000088)
    assert [len(graphs_on(n)) for n in range(1, 8)] == [1, 2, 4, 11, 34, 156, 1044]
    assert [len(graphs_on(n, 2)) for n in range(3, 8)] == [1, 3, 11, 62, 510]


def test_enumeration_is_isomorphism_free():
    reps = graphs_on(5)
    for a, b in itertools.combinations(reps, 2):
        assert not nx.is_isomorphic(_nx(a), _nx(b))


def test_enumeration_order_and_cap():
    gs = list(enumerate_graphs(5, 2))
    assert [g.n for g in gs] == sorted(g.n for g in gs)
    with pytest.raises(CapabilityError):
        list(enumerate_graphs(9))


def test_graphs_by_edges_counts():
    from nbspectra.graph_core import _connected_by_edges, graphs_by_edges

    # OEIS A000664 (no isolated vertices) and A002905 (connected), by edge count
    assert [len(graphs_by_edges(m)) for m in range(1, 9)] == [1, 2, 5, 11, 26, 68, 177, 497]
    assert [len(_connected_by_edges(m)) for m in range(1, 9)] == [1, 1, 3, 5, 12, 30, 79, 227]
    for g in graphs_by_edges(6):
        assert g.m == 6 and g.min_degree >= 1
    assert max(g.n for g in graphs_by_edges(4)) == 8


def test_graphs_by_edges_distinct():
    from nbspectra.graph_core import graphs_by_edges

    gs = graphs_by_edges(5)
    for a, b in itertools.combinations(gs, 2):
        if a.n == b.n and sorted(a.degrees) == sorted(b.degrees):
            assert not nx.is_isomorphic(nx.Graph(list(a.edges)), nx.Graph(list(b.edges)))
