"""Simple undirected graphs and the constructors used by the case studies."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import FrozenSet, Iterable, List, Sequence, Tuple

import numpy as np

from .linalg import SymMatrix

Edge = Tuple[int, int]

_INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class Graph:
    """Graph on vertices ``0..n-1``; edges are stored as pairs ``(i, j)`` with ``i < j``."""

    n: int
    edges: FrozenSet[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        norm = set()
        for e in self.edges:
            i, j = (int(v) for v in e)
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if i > j:
                i, j = j, i
            if i < 0 or j >= self.n:
                raise ValueError(f"edge {(i, j)} out of range for n={self.n}")
            norm.add((i, j))
        object.__setattr__(self, "edges", frozenset(norm))

    @property
    def m(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def degrees(self) -> List[int]:
        deg = [0] * self.n
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def neighbors(self) -> List[List[int]]:
        adj = [[] for _ in range(self.n)]
        for i, j in self.sorted_edges():
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def adjacency_array(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for i, j in self.edges:
            a[i, j] = a[j, i] = 1
        return a

    def adjacency(self) -> SymMatrix:
        """Adjacency matrix, memoised on the (immutable) graph."""
        try:
            return self.__dict__["_adjacency"]
        except KeyError:
            M = SymMatrix(self.adjacency_array())
            object.__setattr__(self, "_adjacency", M)
            return M

    def induced(self, vertices: Sequence[int]) -> "Graph":
        index = {v: k for k, v in enumerate(vertices)}
        return Graph(
            len(vertices),
            frozenset((index[i], index[j]) for i, j in self.edges if i in index and j in index),
        )

    def is_connected(self) -> bool:
        return self.n > 0 and len(components(self)) == 1


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------


def empty(n: int) -> Graph:
    return Graph(n)


def complete(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete graph needs n >= 1")
    return Graph(n, frozenset(combinations(range(n), 2)))


def complete_bipartite(a: int, b: int) -> Graph:
    """K_{a,b}: parts ``0..a-1`` and ``a..a+b-1``."""
    if a < 1 or b < 1:
        raise ValueError("complete bipartite graph needs a, b >= 1")
    return Graph(a + b, frozenset((i, a + j) for i in range(a) for j in range(b)))


def path(n: int) -> Graph:
    if n < 1:
        raise ValueError("path needs n >= 1")
    return Graph(n, frozenset((i, i + 1) for i in range(n - 1)))


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph(n, frozenset([(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]))


def star(n: int) -> Graph:
    """Star on n vertices (K_{1,n-1}), centre 0."""
    if n < 2:
        raise ValueError("star needs n >= 2")
    return Graph(n, frozenset((0, i) for i in range(1, n)))


def broom(n: int) -> Graph:
    """Star K_{1,n-2} with one edge subdivided: centre 0, leaves 1..n-2, vertex n-1 hangs off n-2."""
    if n < 4:
        raise ValueError("broom needs n >= 4")
    return Graph(n, frozenset([(0, i) for i in range(1, n - 1)] + [(n - 2, n - 1)]))


FAMILIES = {
    "complete": (complete, 1),
    "complete_bipartite": (complete_bipartite, 2),
    "path": (path, 1),
    "cycle": (cycle, 1),
    "star": (star, 1),
    "broom": (broom, 1),
    "empty": (empty, 1),
}


def make_family(family: str, *params: int) -> Graph:
    try:
        ctor, arity = FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown family {family!r}; choose from {', '.join(sorted(FAMILIES))}") from None
    if len(params) != arity:
        raise ValueError(f"family {family!r} takes {arity} parameter(s), got {len(params)}")
    return ctor(*(int(p) for p in params))


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def disjoint_union(graphs: Iterable[Graph]) -> Graph:
    """Union with blocks relabelled consecutively, left to right."""
    offset = 0
    edges = []
    for g in graphs:
        edges.extend((i + offset, j + offset) for i, j in g.edges)
        offset += g.n
    return Graph(offset, frozenset(edges))


def join(G: Graph, H: Graph) -> Graph:
    """G v H: disjoint union plus every edge between V(G) and V(H)."""
    u = disjoint_union([G, H])
    cross = ((i, G.n + j) for i in range(G.n) for j in range(H.n))
    return Graph(u.n, u.edges | frozenset(cross))


def blowup(G: Graph, t: int) -> Graph:
    """G[K̄_t, ..., K̄_t]: vertex v becomes ``v*t .. v*t + t-1``, an independent set."""
    if t < 1:
        raise ValueError("blow-up factor must be >= 1")
    edges = frozenset(
        (i * t + a, j * t + b) for i, j in G.edges for a in range(t) for b in range(t)
    )
    return Graph(G.n * t, edges)


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    """Erdos-Renyi G(n, p)."""
    pairs = list(combinations(range(n), 2))
    keep = rng.random(len(pairs)) < p
    return Graph(n, frozenset(e for e, k in zip(pairs, keep) if k))


def random_connected_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    """Random spanning tree (random attachment) plus G(n, p) extra edges."""
    order = rng.permutation(n)
    edges = set()
    for k in range(1, n):
        u, v = int(order[k]), int(order[rng.integers(0, k)])
        edges.add((min(u, v), max(u, v)))
    return Graph(n, frozenset(edges) | random_graph(n, p, rng).edges)


@dataclass(frozen=True)
class DegreeVector:
    k: int
    values: Tuple[int, ...]


def k_degree(G: Graph, k: int) -> DegreeVector:
    """Number of walks of length k starting at each vertex.

    Exact integer recursion ``d_{k+1}(i) = sum of d_k over neighbours``.
    Raises :class:`OverflowError` once a value leaves the int64 range; use the
    normalised float iteration in :mod:`energybounds.bounds` beyond that.
    """
    if k < 0:
        raise ValueError("walk length must be >= 0")
    nbrs = G.neighbors()
    d = [1] * G.n
    for step in range(1, k + 1):
        d = [sum(d[j] for j in nbrs[i]) for i in range(G.n)]
        if d and max(d) > _INT64_MAX:
            raise OverflowError(f"walk count exceeds int64 at k={step}")
    return DegreeVector(k, tuple(d))


def components(G: Graph) -> List[Tuple[Graph, Tuple[int, ...]]]:
    """Connected components ordered by smallest vertex.

    Each entry is ``(subgraph, mapping)`` with ``mapping[local] = global``.
    """
    nbrs = G.neighbors()
    seen = [False] * G.n
    out = []
    for s in range(G.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in nbrs[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        comp.sort()
        out.append((G.induced(comp), tuple(comp)))
    return out
