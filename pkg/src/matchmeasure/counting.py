"""Exact matching/independence coefficients, perfect-matching counts and edge probabilities."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from ._errors import ResourceCapError
from .graph import Graph, bipartition, line_graph

__all__ = [
    "MAX_VERTICES",
    "MAX_PERMANENT_SIDE",
    "MAX_IDENTITY_VERTICES",
    "CoefficientVector",
    "MatchingStats",
    "matching_coefficients",
    "independence_coefficients",
    "verify_transfer_identity",
    "matching_stats",
    "IndependenceStats",
    "independence_stats",
    "pm_count",
    "permanent_pm_count",
    "ryser_permanent",
    "edge_probability",
    "edge_probabilities",
    "all_matchings_edge_probability",
    "claw_free",
    "characteristic_polynomial",
    "cycle_sum_polynomial",
    "verify_cycle_sum_identity",
    "poly_mul",
    "poly_add",
]

MAX_VERTICES = 40
MAX_PERMANENT_SIDE = 26
MAX_IDENTITY_VERTICES = 12


@dataclass(frozen=True)
class CoefficientVector:
    """``coeffs[k]`` is m_k(G) (matching kind) or i_k(G) (independence kind)."""

    kind: str
    coeffs: tuple
    num_vertices: int

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def total(self) -> int:
        return sum(self.coeffs)

    def to_json(self) -> dict:
        return {"kind": self.kind, "coeffs": [str(c) for c in self.coeffs], "v": self.num_vertices}


@dataclass(frozen=True)
class MatchingStats:
    total_matchings: int
    entropy_per_vertex: float
    expected_size_normalized: float
    variance_normalized: float
    matching_ratio: Fraction
    pm_count: int
    pm_entropy_per_vertex: float  # -inf when pm_count == 0

    def to_json(self) -> dict:
        return {
            "total_matchings": str(self.total_matchings),
            "entropy_per_vertex": self.entropy_per_vertex,
            "expected_size_normalized": self.expected_size_normalized,
            "variance_normalized": self.variance_normalized,
            "matching_ratio": str(self.matching_ratio),
            "pm_count": str(self.pm_count),
            "pm_entropy_per_vertex": None if self.pm_count == 0 else self.pm_entropy_per_vertex,
            "pm_entropy_minus_infinity": self.pm_count == 0,
        }


@dataclass(frozen=True)
class IndependenceStats:
    total_independent_sets: int
    entropy_per_vertex: float
    expected_size_normalized: float
    variance_normalized: float
    independence_ratio: Fraction

    def to_json(self) -> dict:
        return {
            "total_independent_sets": str(self.total_independent_sets),
            "entropy_per_vertex": self.entropy_per_vertex,
            "expected_size_normalized": self.expected_size_normalized,
            "variance_normalized": self.variance_normalized,
            "independence_ratio": str(self.independence_ratio),
        }


# polynomial helpers (ascending coefficient lists of Python ints) ---------------


def poly_add(a: Sequence[int], b: Sequence[int]) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return out


def poly_mul(a: Sequence[int], b: Sequence[int]) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _trim(p: list) -> list:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _mask_components(mask: int, nbr: Sequence[int]) -> list:
    comps = []
    while mask:
        low = mask & -mask
        comp = low
        frontier = low
        while frontier:
            bit = frontier & -frontier
            frontier ^= bit
            new = nbr[bit.bit_length() - 1] & mask & ~comp
            comp |= new
            frontier |= new
        comps.append(comp)
        mask &= ~comp
    return comps


def _iter_bits(mask: int):
    while mask:
        bit = mask & -mask
        yield bit.bit_length() - 1
        mask ^= bit


def _check_cap(g: Graph, cap: int) -> None:
    if g.num_vertices > cap:
        raise ResourceCapError(f"{g.num_vertices} vertices exceeds exact-counting cap {cap}")


def _matching_poly_masked(g: Graph, rank: Sequence[int]) -> list:
    """Matching generating polynomial sum_k m_k t^k by vertex-removal recursion.

    M(G) = M(G - v) + t * sum_{u ~ v} M(G - v - u), split over connected
    components, memoized on the surviving-vertex bitmask. ``rank`` orders the
    pivot choice (lowest rank first).
    """
    nbr = g.neighbor_masks
    memo = {0: [1]}

    def connected(mask):
        hit = memo.get(mask)
        if hit is not None:
            return hit
        if mask & (mask - 1) == 0:
            memo[mask] = [1]
            return memo[mask]
        v = min(_iter_bits(mask), key=rank.__getitem__)
        rest = mask & ~(1 << v)
        out = list(solve(rest))
        shifted = [0]
        for u in _iter_bits(nbr[v] & mask):
            shifted = poly_add(shifted, solve(rest & ~(1 << u)))
        out = poly_add(out, [0] + shifted)
        memo[mask] = _trim(out)
        return memo[mask]

    def solve(mask):
        hit = memo.get(mask)
        if hit is not None:
            return hit
        comps = _mask_components(mask, nbr)
        if len(comps) == 1:
            return connected(mask)
        out = [1]
        for c in comps:
            out = poly_mul(out, connected(c))
        memo[mask] = out
        return out

    return solve((1 << g.num_vertices) - 1)


def _bfs_rank(g: Graph) -> list:
    """Breadth-first order per component, started at a minimum-degree vertex."""
    n = g.num_vertices
    rank = [-1] * n
    r = 0
    for s in sorted(range(n), key=lambda v: (g.degree(v), v)):
        if rank[s] >= 0:
            continue
        rank[s] = r
        r += 1
        queue = [s]
        for u in queue:
            for w in g.adjacency[u]:
                if rank[w] < 0:
                    rank[w] = r
                    r += 1
                    queue.append(w)
    return rank


def matching_coefficients(g: Graph, cap: int = MAX_VERTICES) -> CoefficientVector:
    """m_k(G) for every k, exactly."""
    _check_cap(g, cap)
    coeffs = _matching_poly_masked(g, _bfs_rank(g))
    return CoefficientVector("matching", tuple(coeffs), g.num_vertices)


def independence_coefficients(g: Graph, cap: int = MAX_VERTICES) -> CoefficientVector:
    """i_k(G) for every k via I(G) = I(G - v) + x I(G - N[v]) on a max-degree pivot."""
    _check_cap(g, cap)
    nbr = g.neighbor_masks
    memo = {0: [1]}

    def connected(mask):
        hit = memo.get(mask)
        if hit is not None:
            return hit
        best, bdeg = -1, -1
        for v in _iter_bits(mask):
            d = bin(nbr[v] & mask).count("1")
            if d > bdeg:
                best, bdeg = v, d
        if bdeg == 0:
            memo[mask] = [1, 1]
            return memo[mask]
        v = best
        a = solve(mask & ~(1 << v))
        b = solve(mask & ~(1 << v) & ~nbr[v])
        out = poly_add(a, [0] + list(b))
        memo[mask] = out
        return out

    def solve(mask):
        hit = memo.get(mask)
        if hit is not None:
            return hit
        comps = _mask_components(mask, nbr)
        if len(comps) == 1:
            return connected(mask)
        out = [1]
        for c in comps:
            out = poly_mul(out, connected(c))
        memo[mask] = out
        return out

    coeffs = solve((1 << g.num_vertices) - 1)
    return CoefficientVector("independence", tuple(coeffs), g.num_vertices)


def verify_transfer_identity(g: Graph, cap: int = MAX_VERTICES) -> bool:
    """m_k(G) == i_k(L(G)) for all k."""
    m = matching_coefficients(g, cap).coeffs
    i = independence_coefficients(line_graph(g), cap).coeffs
    return m == i


def matching_stats(g: Graph, cap: int = MAX_VERTICES) -> MatchingStats:
    c = matching_coefficients(g, cap).coeffs
    v = g.num_vertices
    total = sum(c)
    nu = len(c) - 1
    mean = Fraction(sum(k * m for k, m in enumerate(c)), total)
    var = Fraction(sum((k - mean) ** 2 * m for k, m in enumerate(c)), total)
    pm = c[v // 2] if v % 2 == 0 and len(c) > v // 2 else 0
    if v == 0:
        return MatchingStats(total, 0.0, 0.0, 0.0, Fraction(0), pm, 0.0)
    return MatchingStats(
        total_matchings=total,
        entropy_per_vertex=math.log(total) / v,
        expected_size_normalized=float(mean / v),
        variance_normalized=float(var / v),
        matching_ratio=Fraction(nu, v),
        pm_count=pm,
        pm_entropy_per_vertex=math.log(pm) / v if pm else -math.inf,
    )


def independence_stats(g: Graph, cap: int = MAX_VERTICES) -> IndependenceStats:
    """Size statistics of a uniform random independent set, per vertex."""
    v = g.num_vertices
    if v == 0:
        raise ValueError("statistics per vertex need at least one vertex")
    c = independence_coefficients(g, cap).coeffs
    total = sum(c)
    mean = Fraction(sum(k * i for k, i in enumerate(c)), total)
    var = Fraction(sum((k - mean) ** 2 * i for k, i in enumerate(c)), total)
    return IndependenceStats(
        total_independent_sets=total,
        entropy_per_vertex=math.log(total) / v,
        expected_size_normalized=float(mean / v),
        variance_normalized=float(var / v),
        independence_ratio=Fraction(len(c) - 1, v),
    )


# perfect matchings -------------------------------------------------------------


def _biadjacency(g: Graph) -> tuple:
    parts = bipartition(g)
    if parts is None:
        raise ValueError("graph is not bipartite")
    left, right = parts
    if len(left) != len(right):
        raise ValueError(f"unequal sides {len(left)} and {len(right)}")
    col = {v: j for j, v in enumerate(right)}
    rows = [[0] * len(right) for _ in left]
    for i, u in enumerate(left):
        for w in g.adjacency[u]:
            rows[i][col[w]] = 1
    return rows, left, right


def _ryser_gray(rows: Sequence[Sequence[int]]) -> int:
    """Ryser inclusion-exclusion over column subsets visited in Gray-code order."""
    n = len(rows)
    if n == 0:
        return 1
    cols = [[rows[i][j] for i in range(n)] for j in range(n)]
    sums = [0] * n
    total = 0
    subset = 0
    for k in range(1, 1 << n):
        j = (k & -k).bit_length() - 1
        bit = 1 << j
        sign = 1 if not subset & bit else -1
        subset ^= bit
        c = cols[j]
        for i in range(n):
            sums[i] += sign * c[i]
        prod = 1
        for s in sums:
            if not s:
                prod = 0
                break
            prod *= s
        if prod:
            size = bin(subset).count("1")
            total += prod if size % 2 == 0 else -prod
    return total if n % 2 == 0 else -total


def _ryser_numpy(rows: Sequence[Sequence[int]]) -> Optional[int]:
    """Vectorized Ryser in int64; ``None`` when intermediate values could overflow."""
    n = len(rows)
    a = np.asarray(rows, dtype=np.int64)
    row_bound = 1
    for r in a.sum(axis=1):
        row_bound *= int(r)
    if row_bound == 0:
        return 0
    if n > 26 or (row_bound << n) >= 2**62:
        return None
    # subset row sums built by doubling over columns
    total = 0
    low = min(n, 16)
    sums_low = np.zeros((1, n), dtype=np.int64)
    parity_low = np.zeros(1, dtype=np.int64)
    for j in range(low):
        sums_low = np.concatenate([sums_low, sums_low + a[:, j]])
        parity_low = np.concatenate([parity_low, parity_low ^ 1])
    sign_low = 1 - 2 * parity_low
    for hi in range(1 << (n - low)):
        shift = np.zeros(n, dtype=np.int64)
        hbits = 0
        for j in range(n - low):
            if hi >> j & 1:
                shift += a[:, low + j]
                hbits += 1
        prods = np.prod(sums_low + shift, axis=1)
        s = int(np.dot(prods, sign_low))
        total += -s if hbits % 2 else s
    return total if n % 2 == 0 else -total


def ryser_permanent(rows: Sequence[Sequence[int]], method: str = "auto") -> int:
    """Exact permanent of a square 0/1 (or small integer) matrix."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    if method in ("auto", "numpy"):
        val = _ryser_numpy(rows)
        if val is not None:
            return val
        if method == "numpy":
            raise OverflowError("int64 Ryser would overflow; use method='gray'")
    return _ryser_gray(rows)


def permanent_pm_count(g: Graph, cap: int = MAX_PERMANENT_SIDE, method: str = "auto") -> int:
    """pm(G) for a bipartite graph with equal sides, as the permanent of its biadjacency matrix."""
    rows, left, _ = _biadjacency(g)
    if len(left) > cap:
        raise ResourceCapError(f"side size {len(left)} exceeds permanent cap {cap}")
    return ryser_permanent(rows, method)


def pm_count(g: Graph) -> int:
    """Number of perfect matchings, by permanent when bipartite, else from m_{v/2}."""
    v = g.num_vertices
    if v % 2:
        return 0
    if v == 0:
        return 1
    parts = bipartition(g)
    if parts is not None:
        if len(parts[0]) != len(parts[1]):
            return 0
        if len(parts[0]) <= MAX_PERMANENT_SIDE:
            return permanent_pm_count(g)
    c = matching_coefficients(g).coeffs
    return c[v // 2] if len(c) > v // 2 else 0


def _edge_key(g: Graph, e: Sequence[int]) -> tuple:
    u, v = int(e[0]), int(e[1])
    if not g.has_edge(u, v):
        raise ValueError(f"({u}, {v}) is not an edge")
    return (u, v) if u < v else (v, u)


def edge_probability(g: Graph, e: Sequence[int]) -> Fraction:
    """p(e) = pm(G - u - v) / pm(G)."""
    u, v = _edge_key(g, e)
    total = pm_count(g)
    if total == 0:
        raise ZeroDivisionError("graph has no perfect matching; p(e) undefined")
    return Fraction(pm_count(g.remove_vertices([u, v])), total)


def edge_probabilities(g: Graph) -> dict:
    """p(e) for every edge, keyed by the sorted edge pair."""
    total = pm_count(g)
    if total == 0:
        raise ZeroDivisionError("graph has no perfect matching; p(e) undefined")
    return {e: Fraction(pm_count(g.remove_vertices(e)), total) for e in g.edges}


def all_matchings_edge_probability(g: Graph, e: Sequence[int], cap: int = MAX_VERTICES) -> Fraction:
    """Probability that a uniform random matching contains ``e``: M(G - u - v) / M(G)."""
    u, v = _edge_key(g, e)
    total = matching_coefficients(g, cap).total
    return Fraction(matching_coefficients(g.remove_vertices([u, v]), cap).total, total)


def claw_free(g: Graph) -> bool:
    for v in range(g.num_vertices):
        for a, b, c in combinations(g.adjacency[v], 3):
            if not (g.has_edge(a, b) or g.has_edge(a, c) or g.has_edge(b, c)):
                return False
    return True


# adjacency/matching cycle-sum identity ---------------------------------------


def characteristic_polynomial(g: Graph) -> list:
    """det(xI - A) as descending integer coefficients, by Faddeev-LeVerrier."""
    n = g.num_vertices
    a = [[1 if g.has_edge(i, j) else 0 for j in range(n)] for i in range(n)]
    coeffs = [1]
    m = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{k-1} I
        prev = m
        m = [[sum(a[i][t] * prev[t][j] for t in range(n) if a[i][t]) for j in range(n)] for i in range(n)]
        for i in range(n):
            m[i][i] += coeffs[-1]
        am = [[sum(a[i][t] * m[t][j] for t in range(n) if a[i][t]) for j in range(n)] for i in range(n)]
        tr = sum(am[i][i] for i in range(n))
        if tr % k:
            raise ArithmeticError("non-integral Faddeev-LeVerrier step")
        coeffs.append(-tr // k)
    return coeffs


def _matching_poly_descending(g: Graph) -> list:
    """mu(G, x) as descending coefficients of length v + 1."""
    v = g.num_vertices
    m = matching_coefficients(g, cap=max(v, MAX_VERTICES)).coeffs
    out = [0] * (v + 1)
    for k, c in enumerate(m):
        out[2 * k] = (-1) ** k * c
    return out


def _cycles_through_min(g: Graph, allowed: int, s: int):
    """Vertex tuples of cycles whose minimum vertex is ``s``, each once."""
    adj = g.adjacency
    path = [s]
    on = {s}

    def extend(u):
        for w in adj[u]:
            if not allowed >> w & 1 or w < s:
                continue
            if w == s:
                continue
            if w in on:
                continue
            path.append(w)
            on.add(w)
            if len(path) >= 3 and s in adj[w] and path[1] < w:
                yield tuple(path)
            yield from extend(w)
            path.pop()
            on.discard(w)

    yield from extend(s)


def cycle_sum_polynomial(g: Graph, cap: int = MAX_IDENTITY_VERTICES) -> list:
    """sum over 2-regular subgraphs C of (-2)^{k(C)} mu(G - V(C), x), descending coefficients."""
    n = g.num_vertices
    if n > cap:
        raise ResourceCapError(f"{n} vertices exceeds identity-check cap {cap}")
    memo = {}

    def mu_of(mask):
        if mask not in memo:
            keep = [v for v in range(n) if mask >> v & 1]
            sub, _ = g.induced_subgraph(keep)
            poly = _matching_poly_descending(sub)
            memo[mask] = [0] * (n - len(keep)) + poly  # pad to length n + 1
        return memo[mask]

    total = [0] * (n + 1)

    def rec(undecided: int, remaining: int, ncycles: int):
        # undecided: vertices still eligible to join a cycle; remaining: vertices not in any cycle
        if undecided == 0:
            p = mu_of(remaining)
            f = (-2) ** ncycles
            for i, c in enumerate(p):
                total[i] += f * c
            return
        s = (undecided & -undecided).bit_length() - 1
        rest = undecided & ~(1 << s)
        rec(rest, remaining, ncycles)
        for cyc in _cycles_through_min(g, undecided, s):
            cmask = 0
            for x in cyc:
                cmask |= 1 << x
            rec(undecided & ~cmask, remaining & ~cmask, ncycles + 1)

    full = (1 << n) - 1
    rec(full, full, 0)
    return total


def verify_cycle_sum_identity(g: Graph, cap: int = MAX_IDENTITY_VERTICES) -> bool:
    return cycle_sum_polynomial(g, cap) == characteristic_polynomial(g)
