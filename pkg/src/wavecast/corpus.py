"""The standard verification corpus.

Every connected labeled graph up to six vertices, a batch of random connected
graphs and a batch of random trees, each run under several random port
assignments and leaders. Everything derives from one master seed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .graph import Graph, PortMap, assign_ports, generate

__all__ = ["Case", "CorpusSpec", "connected_graphs", "iter_corpus"]


@dataclass(frozen=True)
class Case:
    name: str
    graph: Graph
    ports: PortMap


@dataclass(frozen=True)
class CorpusSpec:
    seed: int = 0
    exhaustive_max_n: int = 6
    random_graphs: int = 500
    random_n: tuple[int, int] = (7, 64)
    random_trees: int = 100
    tree_max_n: int = 128
    port_draws: int = 3

    def size(self) -> int:
        exhaustive = sum(_count_connected(n) for n in range(1, self.exhaustive_max_n + 1))
        return (exhaustive + self.random_graphs + self.random_trees) * self.port_draws


_CONNECTED_COUNTS = {1: 1, 2: 1, 3: 4, 4: 38, 5: 728, 6: 26704, 7: 1866256}


def _count_connected(n: int) -> int:
    return _CONNECTED_COUNTS.get(n) or sum(1 for _ in connected_graphs(n))


def connected_graphs(n: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """Edge sets of all connected labeled graphs on vertices 0..n-1."""
    pairs = list(itertools.combinations(range(n), 2))
    full = (1 << n) - 1
    for mask in range(1 << len(pairs)):
        edges = tuple(e for k, e in enumerate(pairs) if mask >> k & 1)
        if len(edges) < n - 1:
            continue
        adj = [0] * n
        for u, v in edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        seen = frontier = 1
        while frontier:
            nxt = 0
            for v in range(n):
                if frontier >> v & 1:
                    nxt |= adj[v]
            frontier = nxt & ~seen
            seen |= nxt
        if seen == full:
            yield edges


def _draws(base: Graph, name: str, spec: CorpusSpec, rng: np.random.Generator) -> Iterator[Case]:
    for k in range(spec.port_draws):
        leader = int(rng.integers(base.n))
        seed = int(rng.integers(2**31))
        g = base.with_leader(leader)
        yield Case(f"{name}/draw{k}", g, assign_ports(g, "random", seed))


def iter_corpus(spec: CorpusSpec = CorpusSpec()) -> Iterator[Case]:
    rng = np.random.default_rng(spec.seed)
    for n in range(1, spec.exhaustive_max_n + 1):
        for j, edges in enumerate(connected_graphs(n)):
            yield from _draws(Graph(n, edges), f"exhaustive/n{n}/{j}", spec, rng)
    lo, hi = spec.random_n
    for j in range(spec.random_graphs):
        n = int(rng.integers(lo, hi + 1))
        # densities from barely-connected up to fairly dense
        p = float(rng.uniform(1.0 / n, min(1.0, 6.0 * np.log(n) / n)))
        g = generate("random_connected", n=n, p=p, seed=int(rng.integers(2**31)))
        yield from _draws(g, f"random/{j}/n{n}", spec, rng)
    for j in range(spec.random_trees):
        n = int(rng.integers(1, spec.tree_max_n + 1))
        g = generate("random_tree", n=n, seed=int(rng.integers(2**31)))
        yield from _draws(g, f"tree/{j}/n{n}", spec, rng)
