"""Vertex numbering by a token train riding the twice-visiting tree walk.

A visited vertex forwards every unit it receives and appends one more before
the terminator, so the j-th visit in the walk receives exactly j units. A
vertex keeps the even one of its two counts and takes number count/2 + 1.
Brother hops are routed through the parent, which relays the train verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from . import _kernels as K
from .bfs import TreeView
from .errors import ParityViolation
from .graph import Graph, PortMap
from .network import Network, Phase, Phases

__all__ = [
    "EnumerationResult",
    "Hop",
    "TravState",
    "number_from_counts",
    "run_enumeration",
    "trav_next",
]


class Hop(Enum):
    FIRST_CHILD = "first_child"
    SELF = "self"
    NEXT_BROTHER = "next_brother_via_parent_relay"
    PARENT = "parent"
    STOP = "stop"


@dataclass
class TravState:
    visits_seen: int = 0
    p_first: int | None = None
    p_second: int | None = None


def trav_next(visits_seen: int, tree: TreeView, has_next_brother: bool = False) -> Hop:
    """Where the walk goes after the ``visits_seen``-th visit to a vertex.

    Only the parent knows whether a next brother exists, hence the flag.
    """
    if visits_seen == 1:
        return Hop.FIRST_CHILD if tree.child_ports else Hop.SELF
    if visits_seen != 2:
        raise ValueError("a vertex is visited exactly twice")
    if tree.parent_port is None:
        return Hop.STOP
    return Hop.NEXT_BROTHER if has_next_brother else Hop.PARENT


def number_from_counts(p1: int, p2: int) -> int:
    k = int(K.number_from_counts(p1, p2))
    if k < 0:
        raise ParityViolation(f"visit counts {p1} and {p2} have the same parity")
    return k


@dataclass(frozen=True)
class EnumerationResult:
    numbers: np.ndarray
    n_known_at_leader: int
    completion_round: int
    p_first: np.ndarray
    p_second: np.ndarray


def run_enumeration(
    graph: Graph,
    ports: PortMap,
    tree: Sequence[TreeView],
    max_rounds: int | None = None,
) -> EnumerationResult:
    net = Network(graph, ports, Phases(Phase.ENUM, Phase.ENUM), tree=tree).run(max_rounds)
    return EnumerationResult(
        net.column(K.E_NUM),
        net.leader_value(K.L_N),
        net.leader_value(K.L_ENUM),
        net.column(K.E_P1),
        net.column(K.E_P2),
    )
