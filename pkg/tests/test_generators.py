import pytest

from matchmeasure._errors import GenerationError
from matchmeasure.generators import (
    large_girth_regular,
    make_complete,
    make_complete_bipartite,
    make_cycle,
    make_empty,
    make_path,
    make_petersen,
    moore_bound,
    random_bipartite_regular,
    random_graph,
    random_regular,
)
from matchmeasure.graph import bipartition, girth


def test_named_families():
    assert make_empty(4).num_edges == 0
    assert make_path(5).num_edges == 4
    assert make_cycle(6).is_regular(2)
    assert make_complete(5).num_edges == 10
    kb = make_complete_bipartite(2, 3)
    assert kb.num_edges == 6 and bipartition(kb) == ((0, 1), (2, 3, 4))
    p = make_petersen()
    assert p.is_regular(3) and p.num_vertices == 10 and girth(p) == 5


@pytest.mark.parametrize("d, g, n", [(3, 5, 10), (3, 6, 14), (3, 7, 22), (3, 8, 30), (4, 5, 17), (2, 9, 9)])
def test_moore_bound(d, g, n):
    assert moore_bound(d, g) == n


@pytest.mark.parametrize("n, d", [(10, 3), (12, 4), (20, 3), (7, 2)])
def test_random_regular_is_simple_and_regular(n, d):
    g = random_regular(n, d, seed=5)
    assert g.num_vertices == n and g.is_regular(d)


def test_random_regular_is_seeded():
    assert random_regular(16, 3, seed=1) == random_regular(16, 3, seed=1)
    assert random_regular(16, 3, seed=1) != random_regular(16, 3, seed=2)


def test_random_regular_rejects_impossible():
    with pytest.raises(ValueError):
        random_regular(7, 3)
    with pytest.raises(ValueError):
        random_regular(4, 4)


@pytest.mark.parametrize("n, d", [(4, 3), (8, 3), (6, 2)])
def test_random_bipartite_regular(n, d):
    g = random_bipartite_regular(n, d, seed=9)
    left, right = bipartition(g)
    assert g.is_regular(d)
    assert set(left) | set(right) == set(range(2 * n))
    assert all(u < n <= v for u, v in g.edges)


@pytest.mark.parametrize("n, g_min", [(14, 6), (20, 6), (24, 6), (30, 7)])
def test_large_girth_regular(n, g_min):
    g = large_girth_regular(n, 3, g_min, seed=2)
    assert g.is_regular(3)
    assert girth(g) >= g_min


def test_large_girth_below_moore_bound_fails():
    with pytest.raises(GenerationError):
        large_girth_regular(12, 3, 6, seed=0)


def test_random_graph_respects_degree_cap():
    for seed in range(20):
        g = random_graph(12, 3, 0.8, seed)
        assert g.max_degree <= 3
