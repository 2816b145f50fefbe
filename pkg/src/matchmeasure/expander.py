"""Vertex expansion of bipartite graphs, the matched digraph and edge-probability lower bounds.

A bipartite graph with classes U, V is a delta-expander when every S inside
one class with |S| at most half that class has |N(S)| >= (1 + delta)|S|.
Given a perfect matching M, the matched digraph lives on V with an arc
x -> y whenever M(x) is adjacent to y. Directed cycles through x -> y
correspond to alternating cycles through the edge {M(x), y}, of twice the
length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import networkx as nx

from ._errors import ResourceCapError
from .counting import all_matchings_edge_probability, edge_probabilities, edge_probability, pm_count
from .graph import Digraph, Graph, bipartition

__all__ = [
    "ExpanderReport",
    "Theorem19Report",
    "MAX_SIDE",
    "compute_delta",
    "is_delta_expander",
    "perfect_matching",
    "matched_digraph",
    "digraph_expansion",
    "shortest_cycle_through_arc",
    "lemma62_bound",
    "lemma63_bound",
    "shortest_alternating_cycle_through",
    "theorem19_bound",
    "theorem19_check",
    "prop65_check",
]

MAX_SIDE = 20


@dataclass(frozen=True)
class ExpanderReport:
    """``delta`` is None when no subset is small enough to constrain it (sides of size 1)."""

    delta: Optional[Fraction]
    witness_set: tuple
    side: str
    min_ratio: Optional[Fraction]

    def to_json(self) -> dict:
        return {
            "delta": None if self.delta is None else str(self.delta),
            "witness_set": list(self.witness_set),
            "side": self.side,
            "min_ratio": None if self.min_ratio is None else str(self.min_ratio),
        }


@dataclass(frozen=True)
class Theorem19Report:
    applicable: bool
    reason: str
    delta: Optional[Fraction]
    d: int
    n: int
    p_e: Optional[Fraction]
    bound: Optional[float]
    holds: Optional[bool]
    p_min: Optional[Fraction]
    p_max: Optional[Fraction]

    def to_json(self) -> dict:
        def q(x):
            return None if x is None else str(x)

        return {
            "applicable": self.applicable,
            "reason": self.reason,
            "delta": q(self.delta),
            "d": self.d,
            "n": self.n,
            "p_e": q(self.p_e),
            "bound": self.bound,
            "holds": self.holds,
            "p_min": q(self.p_min),
            "p_max": q(self.p_max),
        }


def _sides(g: Graph) -> tuple:
    parts = bipartition(g)
    if parts is None:
        raise ValueError("graph is not bipartite")
    return parts


def _min_expansion(sets_from: Sequence[int], nbr_mask: Sequence[int]) -> tuple:
    """Minimum |N(S)|/|S| over nonempty S, |S| <= len/2, S indexed into ``sets_from``."""
    k = len(sets_from)
    half = k // 2
    if half == 0:
        return None, ()
    best, witness = None, ()
    union = [0] * (1 << k)
    for mask in range(1, 1 << k):
        low = mask & -mask
        union[mask] = union[mask ^ low] | nbr_mask[low.bit_length() - 1]
        size = bin(mask).count("1")
        if size > half:
            continue
        ratio = Fraction(bin(union[mask]).count("1"), size)
        if best is None or ratio < best:
            best = ratio
            witness = tuple(sets_from[i] for i in range(k) if mask >> i & 1)
    return best, witness


def compute_delta(g: Graph, max_side: int = MAX_SIDE) -> ExpanderReport:
    """Exact largest delta by exhausting subsets of both classes."""
    left, right = _sides(g)
    if max(len(left), len(right)) > max_side:
        raise ResourceCapError(f"side size exceeds subset-exhaustion cap {max_side}")
    masks = g.neighbor_masks
    best = None
    for name, side in (("U", left), ("V", right)):
        ratio, witness = _min_expansion(side, [masks[v] for v in side])
        if ratio is not None and (best is None or ratio < best[0]):
            best = (ratio, witness, name)
    if best is None:
        return ExpanderReport(None, (), "", None)
    ratio, witness, name = best
    return ExpanderReport(max(ratio - 1, Fraction(0)), witness, name, ratio)


def is_delta_expander(g: Graph, delta) -> bool:
    rep = compute_delta(g)
    return rep.delta is None or rep.min_ratio >= 1 + Fraction(delta)


def perfect_matching(g: Graph) -> Optional[list]:
    """Some perfect matching as sorted edges, or None."""
    left, _ = _sides(g)
    h = nx.Graph()
    h.add_nodes_from(range(g.num_vertices))
    h.add_edges_from(g.edges)
    mate = nx.bipartite.hopcroft_karp_matching(h, top_nodes=set(left))
    if len(mate) != g.num_vertices:
        return None
    return sorted((u, mate[u]) if u < mate[u] else (mate[u], u) for u in left)


def _partner(g: Graph, matching: Sequence[Sequence[int]]) -> dict:
    mate = {}
    for a, b in matching:
        a, b = int(a), int(b)
        if not g.has_edge(a, b) or a in mate or b in mate:
            raise ValueError("not a matching of the graph")
        mate[a], mate[b] = b, a
    if len(mate) != g.num_vertices:
        raise ValueError("matching is not perfect")
    return mate


def matched_digraph(g: Graph, matching: Sequence[Sequence[int]]) -> tuple:
    """Return ``(digraph, V)``; digraph vertex i stands for ``V[i]``.

    Arc x -> y iff the matched partner of x is adjacent to y. Each x gets a
    self-arc (its own matched edge), stored in ``digraph.self_arcs``.
    """
    _, right = _sides(g)
    mate = _partner(g, matching)
    index = {v: i for i, v in enumerate(right)}
    arcs = [(index[x], index[y]) for x in right for y in g.adjacency[mate[x]]]
    return Digraph(len(right), arcs), right


def digraph_expansion(dg: Digraph, include_self_arcs: bool = True, max_size: int = MAX_SIDE) -> Optional[Fraction]:
    """min over X, |X| <= n/2, of min(|N_out(X)|, |N_in(X)|)/|X| - 1.

    Self-arcs count by default: N_out(X) of the matched digraph is then
    exactly N_G(M(X)), which is what bipartite expansion controls.
    """
    n = dg.num_vertices
    if n > max_size:
        raise ResourceCapError(f"digraph with {n} vertices exceeds cap {max_size}")
    loops = dg.self_arcs if include_self_arcs else frozenset()
    outs = [sum(1 << y for y in dg.out_adjacency[x]) | ((1 << x) if x in loops else 0) for x in range(n)]
    ins = [sum(1 << y for y in dg.in_adjacency[x]) | ((1 << x) if x in loops else 0) for x in range(n)]
    r_out, _ = _min_expansion(tuple(range(n)), outs)
    r_in, _ = _min_expansion(tuple(range(n)), ins)
    if r_out is None:
        return None
    return min(r_out, r_in) - 1


def shortest_cycle_through_arc(dg: Digraph, x: int, y: int) -> Optional[int]:
    """Length of the shortest directed cycle using arc x -> y (self-arcs ignored)."""
    if y not in dg.out_adjacency[x]:
        raise ValueError(f"({x}, {y}) is not an arc")
    back = dg.distance(y, x)
    return None if back is None else back + 1


def lemma62_bound(n: int, delta) -> float:
    return 1 + 2 * math.log(n) / math.log1p(float(delta))


def lemma63_bound(n: int, delta) -> float:
    return 2 + 4 * math.log(n) / math.log1p(float(delta))


def shortest_alternating_cycle_through(g: Graph, matching: Sequence[Sequence[int]], e: Sequence[int]) -> int:
    """Exact length of the shortest M-alternating cycle containing edge ``e``."""
    a, b = int(e[0]), int(e[1])
    if not g.has_edge(a, b):
        raise ValueError(f"({a}, {b}) is not an edge")
    dg, right = matched_digraph(g, matching)
    mate = _partner(g, matching)
    index = {v: i for i, v in enumerate(right)}
    y = a if a in index else b
    u = b if y == a else a
    x = index[mate[u]]
    if mate[u] != y:
        length = shortest_cycle_through_arc(dg, x, index[y])
    else:
        # e is matched: any directed cycle through x
        found = [shortest_cycle_through_arc(dg, x, z) for z in dg.out_adjacency[x]]
        found = [c for c in found if c is not None]
        length = min(found) if found else None
    if length is None:
        raise ValueError(f"no alternating cycle through ({a}, {b})")
    return 2 * length


def theorem19_bound(n: int, d: int, delta) -> float:
    """(1/d) n^(-2 ln(d-1) / ln(1+delta))."""
    return n ** (-2 * math.log(d - 1) / math.log1p(float(delta))) / d


def theorem19_check(g: Graph, e: Optional[Sequence[int]] = None, sweep: bool = True) -> Theorem19Report:
    """Compare p(e) with the expansion lower bound; ``e=None`` checks the least likely edge."""
    left, right = _sides(g)
    n = len(left)
    d = g.max_degree
    if len(right) != n or n < 2:
        return Theorem19Report(False, "sides must be equal with n >= 2", None, d, n, None, None, None, None, None)
    if pm_count(g) == 0:
        return Theorem19Report(False, "no perfect matching", None, d, n, None, None, None, None, None)
    delta = compute_delta(g).delta
    probs = edge_probabilities(g) if sweep or e is None else None
    p_min = min(probs.values()) if probs else None
    p_max = max(probs.values()) if probs else None
    if e is None:
        p_e = p_min
    else:
        key = (min(e), max(e))
        p_e = probs[key] if probs else edge_probability(g, key)
    if delta is None or delta <= 0:
        return Theorem19Report(False, "delta must be positive", delta, d, n, p_e, None, None, p_min, p_max)
    bound = theorem19_bound(n, d, delta)
    # relative slack absorbs rounding in the floating-point power
    holds = float(p_e) >= bound * (1 - 1e-12)
    return Theorem19Report(True, "", delta, d, n, p_e, bound, holds, p_min, p_max)


def prop65_check(g: Graph, e: Sequence[int]) -> dict:
    """Probability that a uniform random matching (any size) contains ``e``, against 1/(d^2+1)."""
    p = all_matchings_edge_probability(g, e)
    d = g.max_degree
    bound = Fraction(1, d * d + 1)
    return {"p": p, "bound": bound, "holds": p >= bound}
