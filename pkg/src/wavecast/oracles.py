"""Sequential reference algorithms used as ground truth.

None of these share code with the distributed protocols: distances come from
plain BFS, girth from edge deletion, cuts from a depth-first low-link pass, and
the numbering from a direct execution of the traversal definition.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from ._jit import njit
from .graph import Graph

__all__ = [
    "CubeCheck",
    "OracleReport",
    "TravReference",
    "check_cube_path",
    "girth_by_bfs",
    "oracle_apsp",
    "oracle_cuts",
    "oracle_girth",
    "oracle_report",
    "reference_trav",
]


def _csr(graph: Graph) -> tuple[np.ndarray, np.ndarray]:
    off = np.zeros(graph.n + 1, dtype=np.int64)
    for u in range(graph.n):
        off[u + 1] = off[u] + graph.degree(u)
    adj = np.fromiter(
        (v for u in range(graph.n) for v in graph.neighbors(u)), dtype=np.int64, count=off[-1]
    )
    return off, adj


@njit
def _bfs_rows(off, adj, n):
    dist = np.full((n, n), -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for s in range(n):
        dist[s, s] = 0
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            x = queue[head]
            head += 1
            for j in range(off[x], off[x + 1]):
                y = adj[j]
                if dist[s, y] < 0:
                    dist[s, y] = dist[s, x] + 1
                    queue[tail] = y
                    tail += 1
    return dist


@njit
def _girth_edge_deletion(off, adj, n):
    best = 0
    dist = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for u in range(n):
        for k in range(off[u], off[u + 1]):
            v = adj[k]
            if v < u:
                continue
            # shortest u-v path avoiding the edge (u, v)
            dist[:] = -1
            dist[u] = 0
            queue[0] = u
            head = 0
            tail = 1
            while head < tail and dist[v] < 0:
                x = queue[head]
                head += 1
                for j in range(off[x], off[x + 1]):
                    y = adj[j]
                    if (x == u and y == v) or (x == v and y == u):
                        continue
                    if dist[y] < 0:
                        dist[y] = dist[x] + 1
                        queue[tail] = y
                        tail += 1
            if dist[v] > 0:
                cyc = dist[v] + 1
                if best == 0 or cyc < best:
                    best = cyc
    return best


def oracle_apsp(graph: Graph) -> tuple[np.ndarray, int]:
    """Distance matrix by BFS from every vertex, and its maximum."""
    off, adj = _csr(graph)
    dist = _bfs_rows(off, adj, graph.n)
    return dist, int(dist.max())


def oracle_girth(graph: Graph) -> int:
    """Exact girth; 0 for acyclic graphs."""
    off, adj = _csr(graph)
    return int(_girth_edge_deletion(off, adj, graph.n))


def girth_by_bfs(graph: Graph) -> tuple[int, list[int]]:
    """Girth via BFS-tree non-tree edges from every root, with per-root minima.

    Kept as an independent cross-check of :func:`oracle_girth`.
    """
    n = graph.n
    per_root = []
    for s in range(n):
        dist = [-1] * n
        parent = [-1] * n
        dist[s] = 0
        order = [s]
        best = 0
        for x in order:
            for y in graph.neighbors(x):
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    order.append(y)
                elif parent[x] != y:
                    cyc = dist[x] + dist[y] + 1
                    if best == 0 or cyc < best:
                        best = cyc
        per_root.append(best)
    found = [c for c in per_root if c > 0]
    return (min(found) if found else 0), per_root


def oracle_cuts(graph: Graph) -> tuple[set[tuple[int, int]], set[int], bool]:
    """Bridges (as sorted pairs), articulation points and biconnectivity."""
    n = graph.n
    disc = [-1] * n
    low = [0] * n
    bridges: set[tuple[int, int]] = set()
    arts: set[int] = set()
    timer = 0
    root = 0
    disc[root] = low[root] = timer
    timer += 1
    root_children = 0
    # iterative DFS: (vertex, parent, neighbour iterator position)
    stack = [(root, -1, 0)]
    while stack:
        x, par, i = stack[-1]
        nbrs = graph.neighbors(x)
        if i < len(nbrs):
            stack[-1] = (x, par, i + 1)
            y = nbrs[i]
            if y == par:
                continue
            if disc[y] < 0:
                disc[y] = low[y] = timer
                timer += 1
                if x == root:
                    root_children += 1
                stack.append((y, x, 0))
            else:
                low[x] = min(low[x], disc[y])
            continue
        stack.pop()
        if par >= 0:
            low[par] = min(low[par], low[x])
            if low[x] > disc[par]:
                bridges.add((min(par, x), max(par, x)))
            if par != root and low[x] >= disc[par]:
                arts.add(par)
    if root_children >= 2:
        arts.add(root)
    return bridges, arts, not arts


@dataclass(frozen=True)
class OracleReport:
    distances: np.ndarray
    diameter: int
    girth: int
    bridges: frozenset[tuple[int, int]]
    articulations: frozenset[int]
    biconnected: bool


def oracle_report(graph: Graph) -> OracleReport:
    """All oracle answers at once. None depend on the leader, so the most
    recent graphs are memoised by edge set."""
    return _report(graph.n, graph.edges)


@lru_cache(maxsize=16)
def _report(n: int, edges: tuple[tuple[int, int], ...]) -> OracleReport:
    graph = Graph(n, edges)
    dist, diam = oracle_apsp(graph)
    dist.setflags(write=False)
    bridges, arts, bic = oracle_cuts(graph)
    return OracleReport(dist, diam, oracle_girth(graph), frozenset(bridges), frozenset(arts), bic)


@dataclass(frozen=True)
class TravReference:
    visits: tuple[int, ...]
    nu_first: dict[int, int]
    nu_second: dict[int, int]
    numbers: dict[int, int]


def reference_trav(root: int, children: Mapping[int, Sequence[int]]) -> TravReference:
    """Run the twice-visiting tree walk centrally.

    ``children`` maps every vertex to its ordered child list. A leaf is
    revisited through its loop; the k-th visit preceded by an even number of
    visits names vertex number k.
    """
    parent: dict[int, int] = {}
    for v, cs in children.items():
        for c in cs:
            parent[c] = v
    visits: list[int] = []
    seen: dict[int, int] = {}
    v: int | None = root
    while v is not None:
        visits.append(v)
        seen[v] = seen.get(v, 0) + 1
        kids = children.get(v, ())
        if seen[v] == 1:
            v = kids[0] if kids else v
            continue
        if v == root:
            v = None
            continue
        sibs = children[parent[v]]
        i = sibs.index(v)
        v = sibs[i + 1] if i + 1 < len(sibs) else parent[v]
    nu1: dict[int, int] = {}
    nu2: dict[int, int] = {}
    numbers: dict[int, int] = {}
    for pos, x in enumerate(visits):
        (nu2 if x in nu1 else nu1)[x] = pos
        if pos % 2 == 0:
            numbers[x] = pos // 2 + 1
    return TravReference(tuple(visits), nu1, nu2, numbers)


@dataclass(frozen=True)
class CubeCheck:
    passed: bool
    max_consecutive: int
    closure_distance: int

    @property
    def closes_cycle(self) -> bool:
        return self.closure_distance <= 3


def check_cube_path(graph: Graph, numbering: Sequence[int], dist: np.ndarray | None = None) -> CubeCheck:
    """Check that consecutive numbers sit at distance at most 3.

    ``numbering[v]`` is the number of vertex v (1..n). Also reports the
    distance between the last and first numbered vertices.
    """
    n = graph.n
    if sorted(numbering) != list(range(1, n + 1)):
        raise ValueError("numbering is not a bijection onto 1..n")
    if dist is None:
        dist, _ = oracle_apsp(graph)
    by_number = [0] * n
    for v, k in enumerate(numbering):
        by_number[k - 1] = v
    worst = max((int(dist[by_number[k], by_number[k + 1]]) for k in range(n - 1)), default=0)
    closure = int(dist[by_number[-1], by_number[0]])
    return CubeCheck(worst <= 3, worst, closure)
