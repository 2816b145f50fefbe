import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matchmeasure._errors import ResourceCapError
from matchmeasure.canonical import canonical_graph_key, canonical_labeling, canonical_signature
from matchmeasure.generators import make_complete_bipartite, make_cycle, make_petersen, random_graph, random_regular
from matchmeasure.graph import Graph, RootedBall, extract_ball

from _oracles import rooted_isomorphic, to_nx


def _shuffled(g: Graph, rng: random.Random) -> tuple:
    perm = list(range(g.num_vertices))
    rng.shuffle(perm)
    return g.relabel(perm), perm


def test_labeling_is_a_permutation():
    g = make_petersen()
    lab = canonical_labeling(g)
    assert sorted(lab) == list(range(10))


@given(st.integers(1, 10), st.integers(0, 2**16))
@settings(max_examples=80, deadline=None)
def test_graph_key_is_relabel_invariant(n, seed):
    rng = random.Random(seed)
    g = random_graph(n, 4, rng.random(), seed)
    h, _ = _shuffled(g, rng)
    assert canonical_graph_key(g) == canonical_graph_key(h)


def test_graph_key_separates_nonisomorphic_atlas_graphs():
    keys = set()
    graphs = [h for h in nx.graph_atlas_g() if 1 <= h.number_of_nodes() <= 6]
    for h in graphs:
        keys.add(canonical_graph_key(Graph(h.number_of_nodes(), h.edges())))
    assert len(keys) == len(graphs)


def test_strongly_regular_pair_separated():
    # Shrikhande graph versus the 4x4 rook graph: same parameters, not isomorphic
    rook = nx.cartesian_product(nx.complete_graph(4), nx.complete_graph(4))
    rook = nx.convert_node_labels_to_integers(rook)
    shr = nx.Graph()
    for a in range(4):
        for b in range(4):
            for da, db in ((0, 1), (1, 0), (1, 1)):
                shr.add_edge(4 * a + b, 4 * ((a + da) % 4) + (b + db) % 4)
    g1 = Graph(16, rook.edges())
    g2 = Graph(16, shr.edges())
    assert g1.is_regular(6) and g2.is_regular(6)
    assert canonical_graph_key(g1) != canonical_graph_key(g2)
    rng = random.Random(0)
    assert canonical_graph_key(g2) == canonical_graph_key(_shuffled(g2, rng)[0])


def test_signature_depends_on_root():
    path = Graph(3, [(0, 1), (1, 2)])
    end = canonical_signature(RootedBall(path, 0, 1))
    mid = canonical_signature(RootedBall(path.relabel([1, 0, 2]), 0, 1))
    assert end != mid


def test_vertex_transitive_graphs_have_one_ball_type():
    for g in (make_petersen(), make_cycle(12), make_complete_bipartite(3, 3)):
        sigs = {canonical_signature(extract_ball(g, v, 2)) for v in range(g.num_vertices)}
        assert len(sigs) == 1


@pytest.mark.parametrize("seed", range(8))
def test_signature_agrees_with_rooted_vf2(seed):
    rng = random.Random(seed)
    g = random_graph(14, 4, 0.35, seed)
    balls = [extract_ball(g, v, rng.choice([1, 2])) for v in range(g.num_vertices)]
    sigs = [canonical_signature(b) for b in balls]
    for i in range(len(balls)):
        for j in range(i + 1, len(balls)):
            if balls[i].radius != balls[j].radius:
                continue
            assert (sigs[i] == sigs[j]) == rooted_isomorphic(balls[i], balls[j])


def test_signature_agrees_with_vf2_on_regular_balls():
    g = random_regular(40, 3, seed=4)
    balls = [extract_ball(g, v, 3) for v in range(g.num_vertices)]
    sigs = [canonical_signature(b) for b in balls]
    for i in range(0, 40, 3):
        for j in range(i + 1, 40):
            assert (sigs[i] == sigs[j]) == rooted_isomorphic(balls[i], balls[j])


def test_cap():
    with pytest.raises(ResourceCapError):
        canonical_labeling(make_cycle(30), max_size=20)
