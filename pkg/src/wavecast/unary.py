"""Unary tree toolkit: distance-from-leader broadcast, max convergecast, value broadcast.

Every value travels as opener, a run of unit signals, terminator, so a
constant alphabet carries integers of any size. Zero is an empty run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels as K
from .bfs import TreeView
from .engine import Metrics
from .graph import Graph, PortMap
from .network import Network, Phase, Phases

__all__ = [
    "BroadcastResult",
    "ConvergecastResult",
    "run_dist_cal",
    "unary_broadcast",
    "unary_max_convergecast",
]


def run_dist_cal(
    graph: Graph, ports: PortMap, tree: Sequence[TreeView], max_rounds: int | None = None
) -> tuple[np.ndarray, int]:
    """Levels by unary counting down the tree; completion is the leader's last OK."""
    net = Network(graph, ports, Phases(Phase.DIST, Phase.DIST), tree=tree).run(max_rounds)
    return net.column(K.D_LEVEL), net.leader_value(K.L_DIST)


@dataclass(frozen=True)
class ConvergecastResult:
    maximum: tuple[int, ...]
    subtree_max: np.ndarray
    completion_round: int
    metrics: Metrics


def _frames(values, n: int) -> np.ndarray:
    arr = np.asarray(values, dtype=np.int64)
    return arr.reshape(n, 1) if arr.ndim == 1 else arr


def unary_max_convergecast(
    graph: Graph,
    ports: PortMap,
    tree: Sequence[TreeView],
    values: Sequence[int] | np.ndarray,
    ready: Sequence[int] | None = None,
    max_rounds: int | None = None,
) -> ConvergecastResult:
    """Maximum of per-vertex values at the leader.

    ``values`` is one value per vertex, or an (n, frames) array of several
    values pipelined one frame after another. ``ready[v]`` is the round at
    which v learns its values, allowing staggered starts.
    """
    vals = _frames(values, graph.n)
    net = Network(
        graph, ports, Phases(Phase.AGG, Phase.AGG, vals.shape[1]),
        tree=tree, agg_values=vals, agg_ready=ready,
    ).run(max_rounds)
    top = tuple(int(x) for x in net.ARES[graph.leader])
    return ConvergecastResult(top, net.ARES.copy(), net.leader_value(K.L_AGG), net.metrics())


@dataclass(frozen=True)
class BroadcastResult:
    values: np.ndarray
    done_round: np.ndarray
    metrics: Metrics


def unary_broadcast(
    graph: Graph,
    ports: PortMap,
    tree: Sequence[TreeView],
    value: int | Sequence[int],
    max_rounds: int | None = None,
) -> BroadcastResult:
    """Send the leader's value(s) down the tree; every vertex reads them back."""
    vals = np.atleast_1d(np.asarray(value, dtype=np.int64))
    net = Network(
        graph, ports, Phases(Phase.BCAST, Phase.BCAST, len(vals)), tree=tree, broadcast=vals
    ).run(max_rounds)
    return BroadcastResult(net.BVAL.copy(), net.column(K.DONE_R), net.metrics())
