import csv
import io
import json
import math
import random
from fractions import Fraction

import pytest

from matchmeasure.bs_stats import (
    CSV_HEADER,
    FamilySpec,
    ball_distribution,
    load_manifest,
    locality_bound,
    make_family_graph,
    rows_to_csv,
    run_convergence_experiment,
    run_divergence_experiment,
    tv_distance,
)
from matchmeasure.canonical import canonical_signature
from matchmeasure.generators import large_girth_regular, make_complete_bipartite, make_cycle, random_graph, random_regular
from matchmeasure.graph import Graph, extract_ball, girth
from matchmeasure.mckay import theorem_limits

from _oracles import rooted_isomorphic


def test_cycle_has_one_ball_type():
    dist = ball_distribution(make_cycle(100), 2)
    assert dist.num_types == 1 and dist.total == 100
    (sig,) = dist.counts
    assert dist.frequency(sig) == 1


def test_star_ball_frequencies():
    dist = ball_distribution(make_complete_bipartite(1, 3), 1)
    assert sorted(Fraction(c, dist.total) for c in dist.counts.values()) == [Fraction(1, 4), Fraction(3, 4)]


def test_large_girth_cubic_balls_are_trees():
    g = large_girth_regular(20, 3, 6, seed=1)
    dist = ball_distribution(g, 2)
    assert dist.num_types == 1
    ball = extract_ball(g, 0, 2)
    assert ball.num_vertices == 10 and ball.graph.num_edges == 9


def test_ball_types_match_vf2_classes():
    g = random_graph(16, 3, 0.4, seed=7)
    dist = ball_distribution(g, 2)
    balls = [extract_ball(g, v, 2) for v in range(g.num_vertices)]
    classes = []
    for b in balls:
        for cls in classes:
            if rooted_isomorphic(cls[0], b):
                cls.append(b)
                break
        else:
            classes.append([b])
    assert dist.num_types == len(classes)
    assert sorted(dist.counts.values()) == sorted(len(c) for c in classes)
    for cls in classes:
        assert len({canonical_signature(b) for b in cls}) == 1


def test_empty_graph_rejected():
    with pytest.raises(ValueError):
        ball_distribution(Graph(0), 1)


@pytest.mark.parametrize("r", [1, 10, 49])
def test_long_cycles_are_locally_identical(r):
    assert tv_distance(ball_distribution(make_cycle(100), r), ball_distribution(make_cycle(200), r)) == 0


def test_tv_examples():
    c6 = ball_distribution(make_cycle(6), 1)
    k33 = ball_distribution(make_complete_bipartite(3, 3), 1)
    assert tv_distance(c6, k33) == 1
    assert tv_distance(c6, c6) == 0
    with pytest.raises(ValueError):
        tv_distance(c6, ball_distribution(make_cycle(6), 2))


def test_tv_is_a_metric_on_samples():
    rng = random.Random(3)
    dists = [ball_distribution(random_graph(12, 3, rng.uniform(0.2, 0.6), s), 1) for s in range(8)]
    for a in dists:
        for b in dists:
            assert tv_distance(a, b) == tv_distance(b, a)
            assert 0 <= tv_distance(a, b) <= 1
            for c in dists:
                assert tv_distance(a, c) <= tv_distance(a, b) + tv_distance(b, c)


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("r", [1, 2])
def test_edge_switch_respects_locality_bound(seed, r):
    rng = random.Random(seed)
    g = random_regular(30, 3, seed)
    edges = set(g.edges)
    while True:
        (a, b), (c, d) = rng.sample(sorted(edges), 2)
        if len({a, b, c, d}) == 4 and (min(a, c), max(a, c)) not in edges and (min(b, d), max(b, d)) not in edges:
            break
    h = g.remove_edges([(a, b), (c, d)]).add_edges([(a, c), (b, d)])
    bound = locality_bound(g, h, [a, b, c, d], r)
    assert tv_distance(ball_distribution(g, r), ball_distribution(h, r)) <= bound


def test_locality_bound_needs_same_vertex_set():
    with pytest.raises(ValueError):
        locality_bound(make_cycle(4), make_cycle(5), [0], 1)


def test_family_spec_and_graphs():
    with pytest.raises(ValueError):
        FamilySpec("nope")
    assert FamilySpec("cycle").regular_degree == 2
    assert FamilySpec("disjoint_k33").regular_degree == 3
    g = make_family_graph(FamilySpec("disjoint_k33"), 18, 0)
    assert g.num_vertices == 18 and len(g.components()) == 3
    assert girth(make_family_graph(FamilySpec("large_girth_regular", 3, 6), 16, 0)) >= 6
    assert make_family_graph(FamilySpec("random_regular"), 16, 4) == make_family_graph(FamilySpec("random_regular"), 16, 4)
    with pytest.raises(ValueError):
        make_family_graph(FamilySpec("random_bipartite_regular"), 15, 0)
    with pytest.raises(ValueError):
        make_family_graph(FamilySpec("disjoint_k33"), 10, 0)


def test_manifest_sources(tmp_path):
    data = {"family": "cycle", "sizes": [8, 10], "r": 1, "seed": 2}
    path = tmp_path / "m.json"
    path.write_text(json.dumps(data))
    for source in (data, json.dumps(data), str(path)):
        m = load_manifest(source)
        assert m["spec"] == FamilySpec("cycle") and m["sizes"] == [8, 10] and m["r"] == 1 and m["seed"] == 2
    with pytest.raises(ValueError):
        load_manifest({"family": "cycle", "sizes": [8], "extra": 1})


def test_convergence_rows_and_csv():
    rows = run_convergence_experiment(FamilySpec("large_girth_regular", 3, 6), [14, 16], r=2, seed=0)
    lim = theorem_limits(3)
    assert [r.v for r in rows] == [14, 16]
    for r in rows:
        assert r.girth >= 6
        assert r.gap_entropy == pytest.approx(abs(r.lnM_over_v - 0.5 * math.log(16 / 5)))
        assert r.limit_variance == lim["variance_limit"]
        assert r.tree_fraction == 1
        assert r.short_cycles == "3:0;4:0;5:0"
    text = rows_to_csv(rows)
    parsed = list(csv.reader(io.StringIO(text)))
    assert tuple(parsed[0]) == CSV_HEADER and len(parsed) == 3
    assert parsed[1][0] == "large_girth_regular-d3-v14-s0"


def test_convergence_cycles_have_no_limits():
    rows = run_convergence_experiment(FamilySpec("cycle"), [10, 20], r=1)
    assert all(r.limit_entropy is None and r.gap_entropy is None for r in rows)
    assert rows[1].lnM_over_v == pytest.approx(math.log(15127) / 20)
    assert ",," in rows_to_csv(rows)


def test_disjoint_k33_is_constant():
    rows = run_convergence_experiment(FamilySpec("disjoint_k33"), [6, 12, 18], r=1)
    assert len({round(r.lnM_over_v, 15) for r in rows}) == 1
    assert rows[0].lnpm_over_v == pytest.approx(math.log(6) / 6)


def test_convergence_thread_count_does_not_change_rows():
    spec = FamilySpec("random_regular", 3)
    one = run_convergence_experiment(spec, [10, 12, 14], r=1, seed=3, threads=1)
    four = run_convergence_experiment(spec, [10, 12, 14], r=1, seed=3, threads=4)
    assert rows_to_csv(one) == rows_to_csv(four)


def test_divergence_complete_base():
    out = run_divergence_experiment(3, seed=0, r=1)
    assert out["pm_2G"] == 36 and out["pm_tilde"] == 20
    assert out["counted"] and out["identity_holds"]
    assert out["tv"] <= out["locality_bound"]
    assert out["gap"] > 0
    assert out["p_e"] == out["p_f"] == Fraction(1, 3)


def test_divergence_skewed_base():
    out = run_divergence_experiment(3, seed=0, r=1, base="skewed")
    assert out["p_e"] == Fraction(18, 35)
    assert not out["counted"]
    assert out["pm_tilde"] == out["pm_tilde_identity"]
    assert out["tv"] <= out["locality_bound"]
    assert out["gap"] > 0


def test_divergence_base_guard():
    with pytest.raises(ValueError):
        run_divergence_experiment(3, base="other")
