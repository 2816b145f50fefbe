"""Simple undirected graphs, digraphs, structural queries and the text format.

Vertices are dense integers ``0 .. n-1``. Edges are stored as sorted pairs
``(u, v)`` with ``u < v`` and the edge list itself is sorted, so two graphs
with the same edge set compare (and hash) equal.
"""

from __future__ import annotations

import io
import math
import os
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from ._errors import ResourceCapError

__all__ = [
    "Graph",
    "Digraph",
    "RootedBall",
    "MAX_CYCLE_LENGTH",
    "line_graph",
    "disjoint_union",
    "tensor_with_k2",
    "girth",
    "count_cycles",
    "bipartition",
    "extract_ball",
    "vertices_within",
    "parse_graph",
    "format_graph",
    "read_graph",
    "write_graph",
]

MAX_CYCLE_LENGTH = 12


class Graph:
    """Immutable simple undirected graph.

    Parameters
    ----------
    num_vertices : int
        Number of vertices.
    edges : iterable of pairs
        Unordered vertex pairs. Self-loops and repeated pairs are rejected.
    """

    __slots__ = ("num_vertices", "adjacency", "edges", "_masks", "_edge_set")

    def __init__(self, num_vertices: int, edges: Iterable[Sequence[int]] = ()):
        n = int(num_vertices)
        if n < 0:
            raise ValueError("num_vertices must be nonnegative")
        canon = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for {n} vertices")
            key = (u, v) if u < v else (v, u)
            if key in canon:
                raise ValueError(f"duplicate edge {key}")
            canon.add(key)
        adj = [[] for _ in range(n)]
        for u, v in canon:
            adj[u].append(v)
            adj[v].append(u)
        self.num_vertices = n
        self.edges = tuple(sorted(canon))
        self.adjacency = tuple(tuple(sorted(a)) for a in adj)
        self._edge_set = frozenset(canon)
        self._masks = None

    # basic queries ---------------------------------------------------------

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def degrees(self) -> tuple:
        return tuple(len(a) for a in self.adjacency)

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    def is_regular(self, d: Optional[int] = None) -> bool:
        degs = set(self.degrees)
        if not degs:
            return True
        if len(degs) != 1:
            return False
        return d is None or degs.pop() == d

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edge_set

    def neighbors(self, v: int) -> tuple:
        return self.adjacency[v]

    @property
    def neighbor_masks(self) -> tuple:
        """Per-vertex neighbor sets encoded as integer bitmasks."""
        if self._masks is None:
            self._masks = tuple(sum(1 << u for u in a) for a in self.adjacency)
        return self._masks

    # derived graphs --------------------------------------------------------

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple["Graph", tuple]:
        """Induced subgraph on ``vertices``; returns it with the kept vertex order."""
        keep = tuple(sorted(set(vertices)))
        index = {v: i for i, v in enumerate(keep)}
        sub = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Graph(len(keep), sub), keep

    def remove_vertices(self, vertices: Iterable[int]) -> "Graph":
        drop = set(vertices)
        return self.induced_subgraph(v for v in range(self.num_vertices) if v not in drop)[0]

    def remove_edges(self, edges: Iterable[Sequence[int]]) -> "Graph":
        drop = {tuple(sorted(e)) for e in edges}
        missing = drop - self._edge_set
        if missing:
            raise ValueError(f"edges not in graph: {sorted(missing)}")
        return Graph(self.num_vertices, [e for e in self.edges if e not in drop])

    def add_edges(self, edges: Iterable[Sequence[int]]) -> "Graph":
        return Graph(self.num_vertices, list(self.edges) + [tuple(e) for e in edges])

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        if sorted(perm) != list(range(self.num_vertices)):
            raise ValueError("perm must be a permutation of the vertex set")
        return Graph(self.num_vertices, [(perm[u], perm[v]) for u, v in self.edges])

    def components(self) -> list:
        seen = [False] * self.num_vertices
        out = []
        for s in range(self.num_vertices):
            if seen[s]:
                continue
            seen[s] = True
            comp, stack = [s], [s]
            while stack:
                u = stack.pop()
                for w in self.adjacency[u]:
                    if not seen[w]:
                        seen[w] = True
                        comp.append(w)
                        stack.append(w)
            out.append(sorted(comp))
        return out

    # dunder ------------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.num_vertices == other.num_vertices and self.edges == other.edges

    def __hash__(self):
        return hash((self.num_vertices, self.edges))

    def __repr__(self):
        return f"Graph(v={self.num_vertices}, e={self.num_edges})"


class Digraph:
    """Directed graph without self-loops in its adjacency.

    Self-arcs supplied at construction are kept apart in ``self_arcs`` so
    that callers can record them without them entering path searches.
    """

    __slots__ = ("num_vertices", "out_adjacency", "in_adjacency", "self_arcs")

    def __init__(self, num_vertices: int, arcs: Iterable[Sequence[int]] = ()):
        n = int(num_vertices)
        outs = [set() for _ in range(n)]
        ins = [set() for _ in range(n)]
        loops = set()
        for a in arcs:
            x, y = int(a[0]), int(a[1])
            if not (0 <= x < n and 0 <= y < n):
                raise ValueError(f"arc ({x}, {y}) out of range")
            if x == y:
                loops.add(x)
                continue
            outs[x].add(y)
            ins[y].add(x)
        self.num_vertices = n
        self.out_adjacency = tuple(tuple(sorted(s)) for s in outs)
        self.in_adjacency = tuple(tuple(sorted(s)) for s in ins)
        self.self_arcs = frozenset(loops)

    @property
    def arcs(self) -> list:
        return [(x, y) for x in range(self.num_vertices) for y in self.out_adjacency[x]]

    @property
    def num_arcs(self) -> int:
        return sum(len(a) for a in self.out_adjacency)

    def distance(self, source: int, target: int) -> Optional[int]:
        """Directed BFS distance, ``None`` if unreachable."""
        if source == target:
            return 0
        dist = {source: 0}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for w in self.out_adjacency[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    if w == target:
                        return dist[w]
                    queue.append(w)
        return None

    def __repr__(self):
        return f"Digraph(v={self.num_vertices}, arcs={self.num_arcs}, self_arcs={len(self.self_arcs)})"


@dataclass(frozen=True)
class RootedBall:
    """Induced r-ball around ``root``; vertices are relabeled in BFS order.

    ``origin[i]`` is the vertex of the host graph that became ball vertex ``i``.
    The root is always ball vertex 0.
    """

    graph: Graph
    root: int
    radius: int
    origin: tuple = ()

    @property
    def num_vertices(self) -> int:
        return self.graph.num_vertices


# structural operations -------------------------------------------------------


def line_graph(g: Graph) -> Graph:
    """Vertices are the edges of ``g`` (in ``g.edges`` order); adjacency = shared endpoint."""
    incident = [[] for _ in range(g.num_vertices)]
    for i, (u, v) in enumerate(g.edges):
        incident[u].append(i)
        incident[v].append(i)
    pairs = set()
    for inc in incident:
        for a in range(len(inc)):
            for b in range(a + 1, len(inc)):
                pairs.add((inc[a], inc[b]))
    return Graph(g.num_edges, pairs)


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    off = g1.num_vertices
    return Graph(off + g2.num_vertices, list(g1.edges) + [(u + off, v + off) for u, v in g2.edges])


def tensor_with_k2(g: Graph) -> Graph:
    """Bipartite double cover G x K2: vertex ``(v, s)`` is ``v + s*n``."""
    n = g.num_vertices
    return Graph(2 * n, [p for u, v in g.edges for p in ((u, v + n), (v, u + n))])


def girth(g: Graph) -> float:
    """Length of a shortest cycle, ``math.inf`` for forests.

    BFS from every vertex; a non-tree edge ``(u, w)`` met from root ``s``
    closes a closed walk of length ``dist[u] + dist[w] + 1`` and the minimum
    over all roots is attained by a true shortest cycle.
    """
    best = math.inf
    adj = g.adjacency
    for s in range(g.num_vertices):
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] >= best:
                break
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def count_cycles(g: Graph, k: int, max_length: int = MAX_CYCLE_LENGTH) -> int:
    """Number of distinct k-cycles (each cycle counted once)."""
    if k < 3:
        raise ValueError("cycle length must be at least 3")
    if k > max_length:
        raise ResourceCapError(f"cycle length {k} exceeds cap {max_length}")
    adj = g.adjacency
    total = 0
    for s in range(g.num_vertices):
        # paths s -> ... using only vertices > s, closing back to s
        on_path = {s}
        stack = [(s, 1, iter(w for w in adj[s] if w > s))]
        while stack:
            u, length, it = stack[-1]
            w = next(it, None)
            if w is None:
                stack.pop()
                on_path.discard(u)
                continue
            if w in on_path:
                continue
            if length + 1 == k:
                if s in adj[w]:
                    total += 1
                continue
            on_path.add(w)
            stack.append((w, length + 1, iter(x for x in adj[w] if x > s)))
    # each cycle is traversed in both orientations from its smallest vertex
    return total // 2


def bipartition(g: Graph) -> Optional[tuple]:
    """Sorted vertex classes ``(U, V)``; the smallest vertex of each component is in ``U``.

    Returns ``None`` when an odd cycle exists.
    """
    color = [-1] * g.num_vertices
    for s in range(g.num_vertices):
        if color[s] >= 0:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.adjacency[u]:
                if color[w] < 0:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    return None
    left = tuple(v for v in range(g.num_vertices) if color[v] == 0)
    right = tuple(v for v in range(g.num_vertices) if color[v] == 1)
    return left, right


def vertices_within(g: Graph, sources: Iterable[int], r: int) -> dict:
    """Multi-source BFS distances, truncated at ``r``."""
    dist = {}
    queue = deque()
    for s in sources:
        if s not in dist:
            dist[s] = 0
            queue.append(s)
    while queue:
        u = queue.popleft()
        if dist[u] == r:
            continue
        for w in g.adjacency[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def extract_ball(g: Graph, root: int, r: int) -> RootedBall:
    if not 0 <= root < g.num_vertices:
        raise ValueError(f"root {root} out of range")
    if r < 0:
        raise ValueError("radius must be nonnegative")
    dist = vertices_within(g, [root], r)
    order = sorted(dist, key=lambda v: (dist[v], v))
    index = {v: i for i, v in enumerate(order)}
    edges = [(index[u], index[v]) for u in order for v in g.adjacency[u] if v in index and u < v]
    return RootedBall(Graph(len(order), edges), 0, r, tuple(order))


# text format -------------------------------------------------------------------


def parse_graph(text: str) -> Graph:
    """Parse the ``p <n>`` / ``e <u> <v>`` interchange format."""
    n = None
    edges = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "p" and len(parts) == 2:
            if n is not None:
                raise ValueError(f"line {lineno}: repeated header")
            n = int(parts[1])
        elif parts[0] == "e" and len(parts) == 3:
            if n is None:
                raise ValueError(f"line {lineno}: edge before header")
            u, v = int(parts[1]), int(parts[2])
            if not 0 <= u < v < n:
                raise ValueError(f"line {lineno}: edge must satisfy 0 <= u < v < {n}")
            if (u, v) in seen:
                raise ValueError(f"line {lineno}: duplicate edge {u} {v}")
            seen.add((u, v))
            edges.append((u, v))
        else:
            raise ValueError(f"line {lineno}: cannot parse {raw!r}")
    if n is None:
        raise ValueError("missing 'p <num_vertices>' header")
    return Graph(n, edges)


def format_graph(g: Graph, comment: Optional[str] = None) -> str:
    buf = io.StringIO()
    if comment:
        for line in comment.splitlines():
            buf.write(f"# {line}\n")
    buf.write(f"p {g.num_vertices}\n")
    for u, v in g.edges:
        buf.write(f"e {u} {v}\n")
    return buf.getvalue()


def read_graph(path: "str | os.PathLike") -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def write_graph(g: Graph, path: "str | os.PathLike", comment: Optional[str] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_graph(g, comment))
