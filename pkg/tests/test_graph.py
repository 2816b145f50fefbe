import math

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matchmeasure._errors import ResourceCapError
from matchmeasure.generators import make_complete, make_complete_bipartite, make_cycle, make_path, make_petersen, random_graph
from matchmeasure.graph import (
    Digraph,
    Graph,
    bipartition,
    count_cycles,
    disjoint_union,
    extract_ball,
    format_graph,
    girth,
    line_graph,
    parse_graph,
    read_graph,
    tensor_with_k2,
    vertices_within,
    write_graph,
)

from _oracles import to_nx


@st.composite
def graphs(draw, max_vertices=9):
    n = draw(st.integers(0, max_vertices))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n, chosen)


def test_rejects_self_loops_and_out_of_range():
    with pytest.raises(ValueError):
        Graph(3, [(1, 1)])
    with pytest.raises(ValueError):
        Graph(3, [(0, 3)])
    with pytest.raises(ValueError):
        Graph(-1)


def test_edges_are_canonical_and_sorted():
    g = Graph(4, [(3, 1), (0, 2), (1, 0)])
    assert g.edges == ((0, 1), (0, 2), (1, 3))
    assert g.has_edge(3, 1) and g.has_edge(1, 3)
    assert g.degrees == (2, 2, 1, 1)
    assert g.max_degree == 2
    assert not g.is_regular()


def test_equality_and_hash():
    a = Graph(3, [(0, 1), (1, 2)])
    b = Graph(3, [(2, 1), (1, 0)])
    assert a == b and hash(a) == hash(b)
    assert a != Graph(4, [(0, 1), (1, 2)])


def test_remove_and_add():
    g = make_cycle(5)
    h = g.remove_edges([(0, 4)])
    assert h == make_path(5)
    assert h.add_edges([(4, 0)]) == g
    sub = g.remove_vertices([0])
    assert sub.num_vertices == 4 and sub.num_edges == 3
    with pytest.raises(ValueError):
        g.remove_edges([(0, 2)])


def test_components():
    g = disjoint_union(make_cycle(3), make_path(2))
    assert g.components() == [[0, 1, 2], [3, 4]]


def test_line_graph_of_star_is_triangle():
    star = Graph(4, [(0, 1), (0, 2), (0, 3)])
    assert line_graph(star) == make_complete(3)


@given(graphs())
@settings(max_examples=60, deadline=None)
def test_line_graph_matches_networkx(g):
    assert nx.is_isomorphic(to_nx(line_graph(g)), nx.line_graph(to_nx(g)))


def test_tensor_with_k2_is_bipartite_double_cover():
    h = tensor_with_k2(make_cycle(5))
    assert nx.is_isomorphic(to_nx(h), nx.cycle_graph(10))
    assert bipartition(h) is not None
    assert h.is_regular(2)


@pytest.mark.parametrize(
    "g, expected",
    [
        (make_cycle(7), 7),
        (make_complete(4), 3),
        (make_complete_bipartite(3, 3), 4),
        (make_petersen(), 5),
        (make_path(6), math.inf),
        (Graph(3), math.inf),
    ],
)
def test_girth_examples(g, expected):
    assert girth(g) == expected


@given(graphs())
@settings(max_examples=80, deadline=None)
def test_girth_matches_networkx(g):
    expected = nx.girth(to_nx(g))
    assert girth(g) == expected


@given(graphs(max_vertices=8))
@settings(max_examples=60, deadline=None)
def test_count_cycles_matches_simple_cycles(g):
    h = to_nx(g)
    by_len = {}
    for c in nx.simple_cycles(h):
        by_len[len(c)] = by_len.get(len(c), 0) + 1
    for k in range(3, 9):
        assert count_cycles(g, k) == by_len.get(k, 0)


def test_count_cycles_guards():
    with pytest.raises(ValueError):
        count_cycles(make_cycle(4), 2)
    with pytest.raises(ResourceCapError):
        count_cycles(make_cycle(4), 13)


def test_bipartition():
    left, right = bipartition(make_complete_bipartite(2, 3))
    assert left == (0, 1) and right == (2, 3, 4)
    assert bipartition(make_cycle(5)) is None


def test_vertices_within_and_ball():
    g = make_cycle(10)
    assert vertices_within(g, [0], 2) == {0: 0, 1: 1, 9: 1, 2: 2, 8: 2}
    ball = extract_ball(g, 0, 2)
    assert ball.root == 0 and ball.num_vertices == 5
    assert ball.origin[0] == 0
    assert ball.graph.num_edges == 4
    with pytest.raises(ValueError):
        extract_ball(g, 10, 1)
    with pytest.raises(ValueError):
        extract_ball(g, 0, -1)


@given(graphs(), st.integers(0, 3))
@settings(max_examples=60, deadline=None)
def test_ball_is_induced_subgraph(g, r):
    if g.num_vertices == 0:
        return
    ball = extract_ball(g, 0, r)
    dist = nx.single_source_shortest_path_length(to_nx(g), 0, cutoff=r)
    assert set(ball.origin) == set(dist)
    mapped = {(min(ball.origin[u], ball.origin[v]), max(ball.origin[u], ball.origin[v])) for u, v in ball.graph.edges}
    assert mapped == {e for e in g.edges if e[0] in dist and e[1] in dist}


def test_digraph_self_arcs_are_separate():
    dg = Digraph(3, [(0, 0), (0, 1), (1, 2), (2, 0)])
    assert dg.self_arcs == {0}
    assert dg.num_arcs == 3
    assert dg.distance(0, 2) == 2
    assert dg.distance(0, 0) == 0
    assert Digraph(2, [(0, 1)]).distance(1, 0) is None


@given(graphs())
@settings(max_examples=60, deadline=None)
def test_text_format_round_trip(g):
    assert parse_graph(format_graph(g, "a comment\nover two lines")) == g


def test_file_round_trip(tmp_path):
    g = random_graph(9, 4, 0.5, seed=3)
    path = tmp_path / "g.txt"
    write_graph(g, path)
    assert read_graph(path) == g


@pytest.mark.parametrize(
    "text",
    [
        "e 0 1\n",
        "p 3\np 3\n",
        "p 3\ne 0 3\n",
        "p 3\ne 1 0\n",
        "p 3\ne 0 1\ne 0 1\n",
        "p 3\nx 1\n",
        "",
    ],
)
def test_parse_errors(text):
    with pytest.raises(ValueError):
        parse_graph(text)
