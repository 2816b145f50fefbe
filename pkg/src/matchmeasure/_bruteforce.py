"""Slow enumeration oracles used by the self-test; deliberately share no code with the fast paths."""

from __future__ import annotations

from itertools import permutations

from .graph import Graph


def matching_counts(g: Graph) -> list:
    """m_k by depth-first enumeration of every matching."""
    edges = g.edges
    counts = [0] * (g.num_vertices // 2 + 1)

    def extend(start: int, used: int, size: int) -> None:
        counts[size] += 1
        for i in range(start, len(edges)):
            u, v = edges[i]
            bit = (1 << u) | (1 << v)
            if not used & bit:
                extend(i + 1, used | bit, size + 1)

    extend(0, 0, 0)
    while len(counts) > 1 and counts[-1] == 0:
        counts.pop()
    return counts


def independent_counts(g: Graph) -> list:
    """i_k by testing every vertex subset."""
    n = g.num_vertices
    masks = g.neighbor_masks
    counts = [0] * (n + 1)
    for s in range(1 << n):
        rest = s
        ok = True
        while rest:
            low = rest & -rest
            if masks[low.bit_length() - 1] & s:
                ok = False
                break
            rest ^= low
        if ok:
            counts[bin(s).count("1")] += 1
    while len(counts) > 1 and counts[-1] == 0:
        counts.pop()
    return counts


def perfect_matchings_by_permutation(g: Graph, left, right) -> int:
    """Count bijections left -> right along edges (feasible for sides <= 8)."""
    return sum(1 for perm in permutations(right) if all(g.has_edge(u, w) for u, w in zip(left, perm)))
