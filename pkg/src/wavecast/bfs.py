"""Leader-rooted BFS spanning tree via the Start/Accept/Reject/OK handshake."""

from __future__ import annotations

from dataclasses import dataclass

from ._kernels import L_BFS, LK_CHILD, LK_NONTREE
from .graph import Graph, PortMap
from .network import Network, Phase, Phases

__all__ = ["TreeView", "run_bfs", "tree_parents", "tree_views"]


@dataclass(frozen=True)
class TreeView:
    """One vertex's local view of the spanning tree, in its own port numbers."""

    parent_port: int | None
    child_ports: tuple[int, ...]
    nontree_ports: tuple[int, ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.child_ports


def tree_views(net: Network) -> list[TreeView]:
    return [
        TreeView(
            net.parent_port(u),
            tuple(net.ports_with_link(u, LK_CHILD)),
            tuple(net.ports_with_link(u, LK_NONTREE)),
        )
        for u in range(net.graph.n)
    ]


def tree_parents(ports: PortMap, views: list[TreeView]) -> list[int]:
    """Harness-side parent vertex per vertex (-1 for the root)."""
    return [-1 if v.parent_port is None else ports.neighbor(u, v.parent_port) for u, v in enumerate(views)]


def run_bfs(
    graph: Graph, ports: PortMap, max_rounds: int | None = None
) -> tuple[list[TreeView], int]:
    """Build the BFS tree; returns the views and the round the leader detected completion."""
    net = Network(graph, ports, Phases(Phase.BFS, Phase.BFS)).run(max_rounds)
    return tree_views(net), net.leader_value(L_BFS)
