"""Anonymous port-numbered networks: graphs, port maps, generators and file IO."""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

import numpy as np

__all__ = [
    "Channels",
    "DisconnectedGraph",
    "DuplicateEdge",
    "Graph",
    "GraphError",
    "InputFormatError",
    "InvalidParams",
    "LeaderOutOfRange",
    "PortMap",
    "SelfLoop",
    "assign_ports",
    "build_graph",
    "channel_arrays",
    "format_edge_list",
    "generate",
    "is_connected",
    "parse_edge_list",
    "parse_generator_spec",
    "parse_port_file",
    "read_graph",
]


class GraphError(ValueError):
    """Base class for rejected graph inputs."""


class DisconnectedGraph(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class LeaderOutOfRange(GraphError):
    pass


class InvalidParams(GraphError):
    pass


class InputFormatError(GraphError):
    pass


def is_connected(n: int, edges: Iterable[tuple[int, int]]) -> bool:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = [False] * n
    seen[0] = True
    queue = deque([0])
    count = 1
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if not seen[y]:
                seen[y] = True
                count += 1
                queue.append(y)
    return count == n


@dataclass(frozen=True)
class Graph:
    """Simple connected undirected graph with a distinguished leader.

    Vertex indices label processes for the harness only; protocols never
    read them.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    leader: int = 0
    _adj: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidParams(f"vertex count must be positive, got {self.n}")
        if not 0 <= self.leader < self.n:
            raise LeaderOutOfRange(f"leader {self.leader} not in 0..{self.n - 1}")
        seen: set[tuple[int, int]] = set()
        norm = []
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidParams(f"edge ({u}, {v}) has an endpoint outside 0..{self.n - 1}")
            if u == v:
                raise SelfLoop(f"self-loop at vertex {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise DuplicateEdge(f"edge {key} appears more than once")
            seen.add(key)
            norm.append(key)
        norm.sort()
        object.__setattr__(self, "edges", tuple(norm))
        if not is_connected(self.n, norm):
            raise DisconnectedGraph(f"graph on {self.n} vertices is not connected")
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in norm:
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self._adj[u]

    def degree(self, u: int) -> int:
        return len(self._adj[u])

    def with_leader(self, leader: int) -> Graph:
        return Graph(self.n, self.edges, leader)


def build_graph(
    edge_list: Iterable[Sequence[int]], leader: int = 0, n: int | None = None
) -> Graph:
    """Validate an edge list into a :class:`Graph`.

    ``n`` defaults to one more than the largest index mentioned, so a single
    vertex graph needs ``n=1`` explicitly.
    """
    edges = [(int(e[0]), int(e[1])) for e in edge_list]
    if n is None:
        n = 1 + max((max(e) for e in edges), default=0)
    if any(min(e) < 0 for e in edges):
        raise InvalidParams("vertex indices must be non-negative")
    return Graph(n, tuple(edges), leader)


@dataclass(frozen=True)
class PortMap:
    """Per-vertex port numbering; ``order[u][p - 1]`` is the neighbour behind port p."""

    order: tuple[tuple[int, ...], ...]

    def neighbor(self, u: int, port: int) -> int:
        return self.order[u][port - 1]

    def port(self, u: int, v: int) -> int:
        return self.order[u].index(v) + 1

    def degree(self, u: int) -> int:
        return len(self.order[u])

    def validate(self, graph: Graph) -> None:
        if len(self.order) != graph.n:
            raise InvalidParams("port map size does not match the graph")
        for u in range(graph.n):
            if sorted(self.order[u]) != list(graph.neighbors(u)):
                raise InvalidParams(f"ports of vertex {u} are not a bijection onto its edges")


def assign_ports(graph: Graph, policy: str = "adjacency_order", seed: int = 0) -> PortMap:
    if policy == "adjacency_order":
        return PortMap(tuple(graph.neighbors(u) for u in range(graph.n)))
    if policy == "random":
        rng = np.random.default_rng(seed)
        order = []
        for u in range(graph.n):
            nb = list(graph.neighbors(u))
            perm = rng.permutation(len(nb))
            order.append(tuple(nb[i] for i in perm))
        return PortMap(tuple(order))
    raise InvalidParams(f"unknown port policy {policy!r}")


class Channels(NamedTuple):
    """Directed channel slots in CSR layout.

    Slot ``off[u] + p - 1`` is port p of u; ``nbr[s]`` is the vertex behind
    it and ``rev[s]`` the slot of the same edge seen from the other end.
    """

    off: np.ndarray
    nbr: np.ndarray
    rev: np.ndarray

    @property
    def n_slots(self) -> int:
        return int(self.off[-1])

    def owner(self) -> np.ndarray:
        return np.repeat(np.arange(len(self.off) - 1), np.diff(self.off))


def channel_arrays(graph: Graph, ports: PortMap) -> Channels:
    deg = np.fromiter((len(o) for o in ports.order), dtype=np.int64, count=graph.n)
    off = np.zeros(graph.n + 1, dtype=np.int64)
    np.cumsum(deg, out=off[1:])
    nbr = np.fromiter((v for o in ports.order for v in o), dtype=np.int64, count=int(off[-1]))
    own = np.repeat(np.arange(graph.n, dtype=np.int64), deg)
    # slot of (v, u) for every slot (u, v): match directed-edge keys
    key = own * graph.n + nbr
    order = np.argsort(key, kind="stable")
    rev = order[np.searchsorted(key[order], nbr * graph.n + own)]
    return Channels(off, nbr, rev)


# -- generators ---------------------------------------------------------------

_KINDS = ("path", "cycle", "complete", "star", "random_tree", "random_connected", "subdivided_claw")


def _prufer_tree(n: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    if n == 1:
        return []
    if n == 2:
        return [(0, 1)]
    seq = [int(x) for x in rng.integers(0, n, size=n - 2)]
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = next(i for i in range(n) if degree[i] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = (i for i in range(n) if degree[i] == 1)
    edges.append((u, v))
    return edges


def _random_connected(n: int, p: float, rng: np.random.Generator) -> list[tuple[int, int]]:
    pairs = list(itertools.combinations(range(n), 2))
    for _ in range(100):
        keep = rng.random(len(pairs)) < p
        edges = [e for e, k in zip(pairs, keep) if k]
        if n == 1 or is_connected(n, edges):
            return edges
    # fall back: overlay a random spanning tree on the last sample
    edges_set = {tuple(sorted(e)) for e in edges}
    edges_set.update(tuple(sorted(e)) for e in _prufer_tree(n, rng))
    return sorted(edges_set)


def generate(
    kind: str,
    n: int | None = None,
    p: float | None = None,
    seed: int = 0,
    leader: int = 0,
) -> Graph:
    """Deterministic test graph of the given kind; ``n`` counts vertices."""
    if kind not in _KINDS:
        raise InvalidParams(f"unknown graph kind {kind!r}")
    if kind == "subdivided_claw":
        edges = [(0, 1), (0, 2), (0, 3), (1, 4), (2, 5), (3, 6)]
        return Graph(7, tuple(edges), leader)
    if n is None or n < 1:
        raise InvalidParams(f"{kind} needs a positive vertex count")
    if kind == "path":
        edges = [(i, i + 1) for i in range(n - 1)]
    elif kind == "cycle":
        if n < 3:
            raise InvalidParams(f"cycle needs n >= 3, got {n}")
        edges = [(i, (i + 1) % n) for i in range(n)]
    elif kind == "complete":
        edges = list(itertools.combinations(range(n), 2))
    elif kind == "star":
        if n < 2:
            raise InvalidParams(f"star needs n >= 2, got {n}")
        edges = [(0, i) for i in range(1, n)]
    elif kind == "random_tree":
        edges = _prufer_tree(n, np.random.default_rng(seed))
    else:
        if p is None or not 0.0 <= p <= 1.0 or math.isnan(p):
            raise InvalidParams(f"random_connected needs 0 <= p <= 1, got {p}")
        edges = _random_connected(n, p, np.random.default_rng(seed))
    if not 0 <= leader < n:
        raise LeaderOutOfRange(f"leader {leader} not in 0..{n - 1}")
    return Graph(n, tuple(edges), leader)


_SPEC_ALIASES = {"tree": "random_tree", "random": "random_connected", "claw": "subdivided_claw"}


def parse_generator_spec(spec: str, leader: int = 0, default_seed: int = 0) -> Graph:
    """Build a graph from a compact ``kind:arg:...`` string.

    ``path:N``, ``cycle:N``, ``complete:N``, ``star:N``, ``tree:N[:SEED]``,
    ``random:N:P[:SEED]`` and ``claw`` are understood.
    """
    parts = spec.strip().split(":")
    kind = _SPEC_ALIASES.get(parts[0], parts[0])
    args = parts[1:]
    try:
        if kind == "subdivided_claw":
            if args:
                raise InvalidParams("claw takes no arguments")
            return generate(kind, leader=leader)
        if kind in ("path", "cycle", "complete", "star"):
            if len(args) != 1:
                raise InvalidParams(f"{kind} takes exactly one argument")
            return generate(kind, n=int(args[0]), leader=leader)
        if kind == "random_tree":
            if len(args) not in (1, 2):
                raise InvalidParams("tree takes N[:SEED]")
            seed = int(args[1]) if len(args) == 2 else default_seed
            return generate(kind, n=int(args[0]), seed=seed, leader=leader)
        if kind == "random_connected":
            if len(args) not in (2, 3):
                raise InvalidParams("random takes N:P[:SEED]")
            seed = int(args[2]) if len(args) == 3 else default_seed
            return generate(kind, n=int(args[0]), p=float(args[1]), seed=seed, leader=leader)
    except ValueError as exc:
        if isinstance(exc, GraphError):
            raise
        raise InvalidParams(f"bad generator spec {spec!r}: {exc}") from exc
    raise InvalidParams(f"unknown generator spec {spec!r}")


# -- text formats ---------------------------------------------------------------


def _content_lines(text: str) -> list[list[str]]:
    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append(line.split())
    return rows


def parse_edge_list(text: str) -> Graph:
    """Parse ``n m leader`` followed by m lines ``u v``."""
    rows = _content_lines(text)
    if not rows:
        raise InputFormatError("empty edge list")
    try:
        header = [int(x) for x in rows[0]]
        if len(header) != 3:
            raise InputFormatError("header must be 'n m leader'")
        n, m, leader = header
        body = rows[1:]
        if len(body) != m:
            raise InputFormatError(f"header announces {m} edges, found {len(body)}")
        edges = []
        for row in body:
            if len(row) != 2:
                raise InputFormatError(f"edge line must be 'u v', got {' '.join(row)!r}")
            edges.append((int(row[0]), int(row[1])))
    except ValueError as exc:
        if isinstance(exc, GraphError):
            raise
        raise InputFormatError(str(exc)) from exc
    return Graph(n, tuple(edges), leader)


def format_edge_list(graph: Graph) -> str:
    lines = [f"{graph.n} {graph.m} {graph.leader}"]
    lines.extend(f"{u} {v}" for u, v in graph.edges)
    return "\n".join(lines) + "\n"


def parse_port_file(text: str, graph: Graph) -> PortMap:
    """Lines ``u port v`` override the adjacency order of the listed vertices."""
    base = [list(graph.neighbors(u)) for u in range(graph.n)]
    listed: dict[int, dict[int, int]] = {}
    try:
        for row in _content_lines(text):
            if len(row) != 3:
                raise InputFormatError(f"port line must be 'u port v', got {' '.join(row)!r}")
            u, port, v = (int(x) for x in row)
            slots = listed.setdefault(u, {})
            if port in slots:
                raise InputFormatError(f"port {port} of vertex {u} assigned twice")
            slots[port] = v
    except ValueError as exc:
        if isinstance(exc, GraphError):
            raise
        raise InputFormatError(str(exc)) from exc
    for u, slots in listed.items():
        if not 0 <= u < graph.n:
            raise InputFormatError(f"vertex {u} out of range")
        deg = graph.degree(u)
        if sorted(slots) != list(range(1, deg + 1)):
            raise InputFormatError(f"ports of vertex {u} must be exactly 1..{deg}")
        base[u] = [slots[p] for p in range(1, deg + 1)]
    pm = PortMap(tuple(tuple(b) for b in base))
    try:
        pm.validate(graph)
    except InvalidParams as exc:
        raise InputFormatError(str(exc)) from exc
    return pm


def read_graph(path: str | Path) -> Graph:
    return parse_edge_list(Path(path).read_text())
