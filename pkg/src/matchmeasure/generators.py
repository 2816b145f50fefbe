"""Deterministic graph families and seeded random regular graphs."""

from __future__ import annotations

import random

from ._errors import GenerationError
from .graph import Graph, count_cycles

__all__ = [
    "make_empty",
    "make_path",
    "make_cycle",
    "make_complete",
    "make_complete_bipartite",
    "make_petersen",
    "moore_bound",
    "random_regular",
    "random_bipartite_regular",
    "large_girth_regular",
    "random_graph",
]

DEFAULT_BUDGET = 10_000


def make_empty(n: int) -> Graph:
    return Graph(n)


def make_path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def make_cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def make_complete(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def make_complete_bipartite(a: int, b: int) -> Graph:
    """K_{a,b} with left class ``0..a-1`` and right class ``a..a+b-1``."""
    if a < 1 or b < 1:
        raise ValueError("both sides need at least one vertex")
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def make_petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def moore_bound(d: int, g: int) -> int:
    """Fewest vertices a d-regular graph of girth ``g`` can have."""
    if d <= 2:
        return max(g, d + 1)
    k = (g - 1) // 2
    if g % 2:
        return 1 + d * sum((d - 1) ** i for i in range(k))
    return 2 * sum((d - 1) ** i for i in range(g // 2))


def _pairing_attempt(n: int, d: int, rng: random.Random):
    stubs = [v for v in range(n) for _ in range(d)]
    rng.shuffle(stubs)
    edges = set()
    for i in range(0, len(stubs), 2):
        u, v = stubs[i], stubs[i + 1]
        if u == v:
            return None
        key = (u, v) if u < v else (v, u)
        if key in edges:
            return None
        edges.add(key)
    return edges


def random_regular(n: int, d: int, seed: int = 0, budget: int = DEFAULT_BUDGET) -> Graph:
    """Pairing-model d-regular simple graph; whole pairings with loops or multi-edges are rejected."""
    if n * d % 2 or not 0 <= d < n:
        raise ValueError(f"no simple {d}-regular graph on {n} vertices")
    rng = random.Random(seed)
    for _ in range(budget):
        edges = _pairing_attempt(n, d, rng)
        if edges is not None:
            return Graph(n, edges)
    raise GenerationError(f"pairing model rejected {budget} times for n={n}, d={d}")


def random_bipartite_regular(n_per_side: int, d: int, seed: int = 0, budget: int = DEFAULT_BUDGET) -> Graph:
    """Union of ``d`` random perfect matchings between the two sides, rejected until simple.

    Left class is ``0..n-1``, right class ``n..2n-1``.
    """
    n = n_per_side
    if not 0 <= d <= n:
        raise ValueError(f"degree {d} impossible with {n} vertices per side")
    rng = random.Random(seed)
    for _ in range(budget):
        edges = set()
        ok = True
        for _ in range(d):
            perm = list(range(n))
            rng.shuffle(perm)
            for i, j in enumerate(perm):
                key = (i, n + j)
                if key in edges:
                    ok = False
                    break
                edges.add(key)
            if not ok:
                break
        if ok:
            return Graph(2 * n, edges)
    raise GenerationError(f"permutation model rejected {budget} times for n={n}, d={d}")


def _short_cycle_count(g: Graph, g_min: int) -> int:
    return sum(count_cycles(g, k) for k in range(3, g_min))


def large_girth_regular(
    n: int,
    d: int,
    g_min: int,
    seed: int = 0,
    restarts: int = 200,
    switches: int = 2_000,
) -> Graph:
    """d-regular graph of girth at least ``g_min``.

    Each restart draws a pairing-model graph and then applies random
    two-edge switches that pick an edge on a short cycle and never increase
    the number of cycles shorter than ``g_min``.
    """
    if n * d % 2 or not 0 <= d < n:
        raise ValueError(f"no simple {d}-regular graph on {n} vertices")
    if g_min <= 3:
        return random_regular(n, d, seed)
    if n < moore_bound(d, g_min):
        raise GenerationError(f"no {d}-regular graph on {n} vertices has girth >= {g_min} (Moore bound)")
    rng = random.Random(seed)
    for _ in range(restarts):
        g = random_regular(n, d, rng.randrange(2**63))
        edges = set(g.edges)
        bad = _short_cycle_count(g, g_min)
        for _ in range(switches):
            if bad == 0:
                return g
            short = _edges_on_short_cycles(g, g_min)
            a, b = rng.choice(sorted(short))
            c, e = rng.choice(sorted(edges))
            if len({a, b, c, e}) < 4:
                continue
            if rng.random() < 0.5:
                c, e = e, c
            new1 = (min(a, c), max(a, c))
            new2 = (min(b, e), max(b, e))
            if new1 in edges or new2 in edges:
                continue
            trial = (edges - {(a, b), (min(c, e), max(c, e))}) | {new1, new2}
            h = Graph(n, trial)
            h_bad = _short_cycle_count(h, g_min)
            if h_bad <= bad:
                g, edges, bad = h, trial, h_bad
        if bad == 0:
            return g
    raise GenerationError(f"no girth-{g_min} {d}-regular graph on {n} vertices found within budget")


def _edges_on_short_cycles(g: Graph, g_min: int) -> set:
    """Edges (u, v) with dist_{G-uv}(u, v) <= g_min - 2."""
    out = set()
    adj = g.adjacency
    limit = g_min - 2
    for u, v in g.edges:
        frontier, seen = {u}, {u}
        for _ in range(limit):
            nxt = set()
            for x in frontier:
                for y in adj[x]:
                    if (x, y) in ((u, v), (v, u)) or y in seen:
                        continue
                    seen.add(y)
                    nxt.add(y)
            if v in nxt:
                out.add((u, v))
                break
            frontier = nxt
    return out


def random_graph(n: int, max_degree: int, p: float, seed: int = 0) -> Graph:
    """Erdos-Renyi style graph, dropping edges that would push a degree past ``max_degree``."""
    rng = random.Random(seed)
    deg = [0] * n
    edges = []
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    rng.shuffle(pairs)
    for i, j in pairs:
        if rng.random() < p and deg[i] < max_degree and deg[j] < max_degree:
            edges.append((i, j))
            deg[i] += 1
            deg[j] += 1
    return Graph(n, edges)
