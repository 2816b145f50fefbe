"""n-fold covers and exact edge-probability bookkeeping for regular bipartite graphs.

An n-fold cover at edge ``e = {x, y}`` takes n copies of G, erases every copy
of e and reconnects ``x`` in copy k with ``y`` in copy k + 1 (mod n). Vertex
``u`` of copy ``k`` gets index ``k * v(G) + u``. Perfect matchings of the
cover use all new edges or none, so in odds form ``x = 1/p(e) - 1`` the new
edges have odds ``x^n``. Everything here runs in exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from ._errors import ResourceCapError
from .counting import MAX_PERMANENT_SIDE, edge_probability, pm_count
from .generators import make_complete_bipartite
from .graph import Graph, bipartition, disjoint_union

__all__ = [
    "CoverSpec",
    "SkewedGraph",
    "MAX_COVER_VERTICES",
    "MAX_FOLD",
    "n_fold_cover",
    "cover_edge_probability_formula",
    "apply_T",
    "apply_T_sequence",
    "find_T_sequence",
    "build_theorem52_graph",
    "build_skewed_graph",
    "build_gap_pair",
]

MAX_COVER_VERTICES = 100_000
MAX_FOLD = 256


@dataclass(frozen=True)
class CoverSpec:
    base: Graph
    edge: tuple
    fold: int

    def __post_init__(self):
        x, y = (int(t) for t in self.edge)
        if not self.base.has_edge(x, y):
            raise ValueError(f"({x}, {y}) is not an edge of the base graph")
        if self.fold < 1:
            raise ValueError("fold must be at least 1")
        if not self.base.is_regular() or bipartition(self.base) is None:
            raise ValueError("base graph must be regular and bipartite")
        object.__setattr__(self, "edge", (x, y))


@dataclass(frozen=True)
class SkewedGraph:
    """Outcome of :func:`build_skewed_graph`.

    ``p`` is the exact predicted probability of ``edge``; ``verified`` tells
    whether it was confirmed by a permanent computation. ``c`` solves
    ``1/p - 1 = c ** side`` where ``side`` is half the vertex count.
    """

    graph: Graph
    edge: tuple
    p: Fraction
    verified: bool
    sequence: tuple
    side: int
    c: float


def n_fold_cover(spec: CoverSpec) -> tuple:
    """Return ``(cover, new_edges)``; ``new_edges[k]`` joins x in copy k to y in copy k+1."""
    g, (x, y), n = spec.base, spec.edge, spec.fold
    v = g.num_vertices
    if n * v > MAX_COVER_VERTICES:
        raise ResourceCapError(f"cover with {n * v} vertices exceeds cap {MAX_COVER_VERTICES}")
    key = (min(x, y), max(x, y))
    edges = []
    for k in range(n):
        off = k * v
        edges.extend((a + off, b + off) for a, b in g.edges if (a, b) != key)
    new = [(k * v + x, ((k + 1) % n) * v + y) for k in range(n)]
    return Graph(n * v, edges + new), new


def cover_edge_probability_formula(p, n: int) -> Fraction:
    """p(e') = p^n / (p^n + (1 - p)^n)."""
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    if n < 1:
        raise ValueError("n must be at least 1")
    return p**n / (p**n + (1 - p) ** n)


def apply_T(i: int, n: int, vec: Sequence) -> tuple:
    """Image of ``vec`` under T_i^(n); ``i`` is 1-based as in (p(f_1), ..., p(f_d))."""
    vec = tuple(Fraction(t) for t in vec)
    if not 1 <= i <= len(vec):
        raise IndexError(f"coordinate {i} out of range 1..{len(vec)}")
    if n < 1:
        raise ValueError("n must be at least 1")
    if any(not 0 < t <= 1 for t in vec):
        raise ValueError("entries must lie in (0, 1]")
    if vec[i - 1] == 1:
        raise ValueError("T_i is undefined when the i-th entry is 1")
    x = 1 / vec[i - 1] - 1
    denom = x**n + 1
    factor = x ** (n - 1) * (x + 1) / denom
    return tuple(1 / denom if j == i - 1 else t * factor for j, t in enumerate(vec))


def apply_T_sequence(sequence: Sequence, vec: Sequence) -> tuple:
    """Apply ``(i, n)`` pairs in list order (the first pair acts first)."""
    out = tuple(Fraction(t) for t in vec)
    for i, n in sequence:
        out = apply_T(i, n, out)
    return out


def find_T_sequence(d: int, max_fold: int = MAX_FOLD) -> list:
    """Pairs ``(i, n)`` in application order pushing coordinate 1 of (1/d, ..., 1/d) above 1/2.

    d = 3 searches n_3 then n_2, smallest first; each larger d prepends
    ``(d, n_d)`` with the smallest n_d that keeps the previous tail working.
    """
    if d < 3:
        raise ValueError("d must be at least 3")
    half = Fraction(1, 2)

    def works(seq, dim):
        return apply_T_sequence(seq, [Fraction(1, dim)] * dim)[0] > half

    seq = None
    for n3 in range(1, max_fold + 1):
        for n2 in range(1, max_fold + 1):
            if works([(3, n3), (2, n2)], 3):
                seq = [(3, n3), (2, n2)]
                break
        if seq:
            break
    if seq is None:
        raise ResourceCapError(f"no sequence for d=3 with folds <= {max_fold}")
    for dim in range(4, d + 1):
        for n in range(1, max_fold + 1):
            if works([(dim, n)] + seq, dim):
                seq = [(dim, n)] + seq
                break
        else:
            raise ResourceCapError(f"no fold <= {max_fold} extends the sequence to d={dim}")
    return seq


def build_theorem52_graph(d: int, n: int, simple: bool = True) -> tuple:
    """d-regular bipartite simple graph on 2dn vertices with an edge of probability 1/((d-1)^n + 1).

    Built as the n-fold cover of K_{d,d}; the returned edge is a new cover edge.
    The non-simple variant needs parallel edges, which :class:`Graph` cannot
    hold, and is rejected.
    """
    if not simple:
        raise ValueError("multigraph variant is not representable; use simple=True")
    if d < 1 or n < 1:
        raise ValueError("need d >= 1 and n >= 1")
    base = make_complete_bipartite(d, d)
    g, new = n_fold_cover(CoverSpec(base, (0, d), n))
    return g, new[0]


def _verifiable(g: Graph) -> bool:
    return g.num_vertices // 2 <= MAX_PERMANENT_SIDE


def build_skewed_graph(d: int, verify: bool = True, sequence: Optional[Sequence] = None) -> SkewedGraph:
    """Realize a T-sequence as iterated covers of K_{d,d}.

    The tracked vertex is left vertex 0 of copy 0 and its edges are
    f_1..f_d (initially towards d, ..., 2d - 1); each T_i^(n) is an n-fold
    cover at the current f_i, after which f_i is the new edge leaving copy 0.
    """
    seq = list(sequence) if sequence is not None else find_T_sequence(d)
    g = make_complete_bipartite(d, d)
    a = 0
    f = [(a, d + j) for j in range(d)]
    probs = tuple(Fraction(1, d) for _ in range(d))
    for i, n in seq:
        size = g.num_vertices * n
        if size > MAX_COVER_VERTICES:
            raise ResourceCapError(f"realized graph would have {size} vertices")
        y = f[i - 1][1]
        v = g.num_vertices
        g, _ = n_fold_cover(CoverSpec(g, (a, y), n))
        f[i - 1] = (a, (1 % n) * v + y)
        probs = apply_T(i, n, probs)
    edge = f[0]
    p = probs[0]
    verified = False
    if verify and _verifiable(g):
        exact = edge_probability(g, edge)
        if exact != p:
            raise ArithmeticError(f"realized p(e) = {exact} differs from predicted {p}")
        verified = True
    side = g.num_vertices // 2
    c = float(1 / p - 1) ** (1 / side)
    return SkewedGraph(g, edge, p, verified, tuple(seq), side, c)


def build_gap_pair(g: Graph, e: Sequence[int], f: Sequence[int]) -> tuple:
    """Return ``(2G, G~)`` for adjacent edges e = {a, b}, f = {a, c}.

    G~ is 2G with e erased in copy 0 and f erased in copy 1, plus the cross
    edges a0-c1 and a1-b0. Perfect matchings of G~ use both or neither cross
    edge, so pm(G~) = pm(G)^2 (p(e) p(f) + (1 - p(e))(1 - p(f))).
    """
    e = tuple(int(t) for t in e)
    f = tuple(int(t) for t in f)
    for edge in (e, f):
        if not g.has_edge(*edge):
            raise ValueError(f"{edge} is not an edge")
    shared = set(e) & set(f)
    if len(shared) != 1:
        raise ValueError("e and f must share exactly one endpoint")
    if not g.is_regular() or bipartition(g) is None:
        raise ValueError("graph must be regular and bipartite")
    if pm_count(g) == 0:
        raise ValueError("graph has no perfect matching")
    (a,) = shared
    b = e[0] if e[1] == a else e[1]
    c = f[0] if f[1] == a else f[1]
    v = g.num_vertices
    two = disjoint_union(g, g)
    tilde = two.remove_edges([(a, b), (v + a, v + c)]).add_edges([(a, v + c), (v + a, b)])
    return two, tilde
