"""Canonical forms of rooted graphs via colour refinement and backtracking.

The search individualizes vertices of the first non-singleton cell of an
equitable colouring, refines, and keeps the lexicographically smallest
relabelled edge list over all discrete leaves. Automorphisms found when two
leaves coincide prune sibling branches (orbits under generators fixing the
current prefix) and trigger a jump back to the divergence point.
"""

from __future__ import annotations

import heapq
from typing import Optional, Sequence

from ._errors import ResourceCapError
from .graph import Graph, RootedBall

__all__ = ["MAX_BALL_SIZE", "canonical_labeling", "canonical_signature", "canonical_graph_key"]

MAX_BALL_SIZE = 200


def _rank(keys: Sequence) -> list:
    table = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [table[k] for k in keys]


class _Partition:
    """Ordered partition: ``order`` lists vertices, cells are contiguous slices.

    ``start[v]`` is the first position of v's cell and ``end[s]`` the end of
    the cell starting at ``s``. Every operation depends only on positions and
    adjacency, never on vertex names, which keeps the search label-invariant.
    """

    __slots__ = ("order", "pos", "start", "end", "ncells")

    def copy(self):
        p = _Partition.__new__(_Partition)
        p.order = list(self.order)
        p.pos = list(self.pos)
        p.start = list(self.start)
        p.end = dict(self.end)
        p.ncells = self.ncells
        return p

    @classmethod
    def from_colors(cls, colors: Sequence[int]):
        p = cls.__new__(cls)
        n = len(colors)
        p.order = sorted(range(n), key=lambda v: colors[v])
        p.pos = [0] * n
        p.start = [0] * n
        p.end = {}
        s = 0
        for i, v in enumerate(p.order):
            p.pos[v] = i
            if i > 0 and colors[v] != colors[p.order[i - 1]]:
                p.end[s] = i
                s = i
            p.start[v] = s
        if n:
            p.end[s] = n
        p.ncells = len(p.end)
        return p

    def refine(self, adj, splitters) -> None:
        heap = sorted(set(splitters))
        queued = set(heap)
        heapq.heapify(heap)
        while heap and self.ncells < len(self.order):
            w = heapq.heappop(heap)
            queued.discard(w)
            count = {}
            for x in self.order[w:self.end[w]]:
                for y in adj[x]:
                    count[y] = count.get(y, 0) + 1
            for s in sorted({self.start[y] for y in count}):
                e = self.end[s]
                if e - s == 1:
                    continue
                verts = self.order[s:e]
                keys = [count.get(y, 0) for y in verts]
                if min(keys) == max(keys):
                    continue
                pairs = sorted(zip(keys, verts))
                groups = []
                for i, (k, v) in enumerate(pairs):
                    self.order[s + i] = v
                    self.pos[v] = s + i
                    if i == 0 or k != pairs[i - 1][0]:
                        groups.append([s + i, s + i + 1])
                    else:
                        groups[-1][1] = s + i + 1
                for gs, ge in groups:
                    self.end[gs] = ge
                    for i in range(gs, ge):
                        self.start[self.order[i]] = gs
                self.ncells += len(groups) - 1
                if s in queued:
                    add = groups[1:]
                else:
                    big = max(range(len(groups)), key=lambda i: (groups[i][1] - groups[i][0], -i))
                    add = [g for i, g in enumerate(groups) if i != big]
                for gs, _ in add:
                    if gs not in queued:
                        queued.add(gs)
                        heapq.heappush(heap, gs)

    def individualize(self, v: int) -> int:
        s = self.start[v]
        e = self.end[s]
        other = self.order[s]
        i = self.pos[v]
        self.order[s], self.order[i] = v, other
        self.pos[v], self.pos[other] = s, i
        self.end[s] = s + 1
        self.end[s + 1] = e
        for j in range(s + 1, e):
            self.start[self.order[j]] = s + 1
        self.ncells += 1
        return s


class _Search:
    def __init__(self, g: Graph, initial: Sequence[int]):
        self.g = g
        self.adj = g.adjacency
        self.n = g.num_vertices
        self.initial = _rank(list(initial))
        self.first = None  # (prefix, labeling, certificate)
        self.best = None  # (certificate, labeling)
        self.generators = []

    def certificate(self, lab: Sequence[int]) -> tuple:
        return tuple(sorted((lab[u], lab[v]) if lab[u] < lab[v] else (lab[v], lab[u]) for u, v in self.g.edges))

    def run(self) -> list:
        part = _Partition.from_colors(self.initial)
        part.refine(self.adj, list(part.end))
        self._visit([], part)
        return self.best[1]

    def _add_generator(self, gamma: list) -> None:
        moved = tuple((x, y) for x, y in enumerate(gamma) if x != y)
        if moved:
            self.generators.append((frozenset(x for x, _ in moved), moved))

    def _orbit_rep(self, prefix: list) -> list:
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        fixed = set(prefix)
        for support, moved in self.generators:
            if support.isdisjoint(fixed):
                for x, y in moved:
                    a, b = find(x), find(y)
                    if a != b:
                        parent[max(a, b)] = min(a, b)
        return [find(x) for x in range(self.n)]

    def _visit(self, prefix: list, part: _Partition) -> Optional[int]:
        depth = len(prefix)
        if part.ncells == self.n:
            return self._leaf(prefix, part.pos)
        target = next(s for s in sorted(part.end) if part.end[s] - s > 1)
        cell = sorted(part.order[target:part.end[target]])
        explored = []
        ngen = -1
        rep = None
        for v in cell:
            if explored:
                if ngen != len(self.generators):
                    rep = self._orbit_rep(prefix)
                    ngen = len(self.generators)
                if any(rep[v] == rep[w] for w in explored):
                    continue
            explored.append(v)
            child = part.copy()
            s = child.individualize(v)
            child.refine(self.adj, [s])
            jump = self._visit(prefix + [v], child)
            if jump is not None and jump < depth:
                return jump
        return None

    def _leaf(self, prefix: list, lab: list) -> Optional[int]:
        cert = self.certificate(lab)
        if self.first is None:
            self.first = (list(prefix), lab, cert)
            self.best = (cert, lab)
            return None
        jump = None
        first_prefix, first_lab, first_cert = self.first
        if cert == first_cert:
            # gamma maps a vertex labelled L in the first leaf to the vertex labelled L here
            inv = [0] * self.n
            for v, l in enumerate(lab):
                inv[l] = v
            gamma = [inv[first_lab[v]] for v in range(self.n)]
            self._add_generator(gamma)
            j = 0
            while j < len(prefix) and j < len(first_prefix) and prefix[j] == first_prefix[j]:
                j += 1
            if all(gamma[first_prefix[i]] == prefix[i] for i in range(min(len(prefix), len(first_prefix)))):
                jump = j
        elif cert == self.best[0]:
            inv = [0] * self.n
            for v, l in enumerate(lab):
                inv[l] = v
            best_lab = self.best[1]
            self._add_generator([inv[best_lab[v]] for v in range(self.n)])
        elif cert < self.best[0]:
            self.best = (cert, lab)
        return jump


def canonical_labeling(g: Graph, colors: Optional[Sequence[int]] = None, max_size: int = MAX_BALL_SIZE) -> list:
    """Labeling ``lab`` (vertex -> new index) that is canonical for ``(g, colors)``."""
    if g.num_vertices > max_size:
        raise ResourceCapError(f"graph with {g.num_vertices} vertices exceeds canonical-form cap {max_size}")
    if g.num_vertices == 0:
        return []
    init = list(colors) if colors is not None else [0] * g.num_vertices
    return _Search(g, init).run()


def _encode(n: int, cert: tuple) -> bytes:
    width = max(1, (max(n - 1, 1).bit_length() + 7) // 8)
    out = bytearray(n.to_bytes(4, "big"))
    for u, v in cert:
        out += u.to_bytes(width, "big") + v.to_bytes(width, "big")
    return bytes(out)


def canonical_graph_key(g: Graph, colors: Optional[Sequence[int]] = None, max_size: int = MAX_BALL_SIZE) -> bytes:
    lab = canonical_labeling(g, colors, max_size)
    cert = tuple(sorted((min(lab[u], lab[v]), max(lab[u], lab[v])) for u, v in g.edges))
    prefix = b""
    if colors is not None:
        # colour classes are part of the invariant
        ranked = _rank(list(colors))
        inv = [0] * g.num_vertices
        for v, l in enumerate(lab):
            inv[l] = v
        prefix = ",".join(str(ranked[inv[i]]) for i in range(g.num_vertices)).encode() + b"|"
    return prefix + _encode(g.num_vertices, cert)


def canonical_signature(ball: RootedBall, max_size: int = MAX_BALL_SIZE) -> bytes:
    """Byte string equal for two balls iff they are isomorphic as rooted graphs."""
    g = ball.graph
    if g.num_vertices > max_size:
        raise ResourceCapError(f"ball with {g.num_vertices} vertices exceeds cap {max_size}")
    colors = [0 if v == ball.root else 1 for v in range(g.num_vertices)]
    lab = canonical_labeling(g, colors, max_size)
    cert = tuple(sorted((min(lab[u], lab[v]), max(lab[u], lab[v])) for u, v in g.edges))
    return _encode(g.num_vertices, cert)
