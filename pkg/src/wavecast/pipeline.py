"""The full protocol stack in one run: BFS, numbering, Dist-Cal, waves,
convergecast of (eccentricity, girth candidate, cut flag), broadcast."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

import numpy as np

from . import _kernels as K
from .bfs import TreeView, tree_views
from .engine import Metrics, Trace
from .graph import Graph, PortMap
from .network import Network, Phases
from .waves import LocalResults, WaveLog, check_endpoint_agreement, local_results, wave_logs

__all__ = ["PipelineResult", "run_pipeline"]


@dataclass
class PipelineResult:
    graph: Graph
    ports: PortMap
    net: Network = field(repr=False)
    trace: Trace | None = None

    @cached_property
    def metrics(self) -> Metrics:
        return self.net.metrics()

    # -- per-vertex state --------------------------------------------------------

    @property
    def n(self) -> int:
        return self.graph.n

    @cached_property
    def tree(self) -> list[TreeView]:
        return tree_views(self.net)

    @cached_property
    def parents(self) -> list[int]:
        """Parent vertex per vertex, -1 at the leader (harness view)."""
        ch = self.net.channels
        par = self.net.V[:, K.PAR]
        return [-1 if s < 0 else int(ch.nbr[s]) for s in par]

    @property
    def numbers(self) -> np.ndarray:
        return self.net.V[:, K.E_NUM]

    @cached_property
    def by_number(self) -> np.ndarray:
        """``by_number[i]`` is the vertex numbered i + 1."""
        order = np.empty(self.n, dtype=np.int64)
        order[self.numbers - 1] = np.arange(self.n)
        return order

    @property
    def visit_counts(self) -> tuple[np.ndarray, np.ndarray]:
        return self.net.V[:, K.E_P1], self.net.V[:, K.E_P2]

    @property
    def levels(self) -> np.ndarray:
        return self.net.V[:, K.D_LEVEL]

    @property
    def n_known(self) -> int:
        return self.net.leader_value(K.L_N)

    @property
    def t1(self) -> np.ndarray:
        return self.net.V[:, K.W_T1]

    @property
    def wave_counts(self) -> np.ndarray:
        return self.net.V[:, K.W_NREC]

    @property
    def taus(self) -> np.ndarray:
        """First-arrival round of wave i (0-based) at every vertex, own wave included."""
        return self.net.TAU

    @cached_property
    def distances(self) -> np.ndarray:
        """Assembled distance matrix indexed by vertex."""
        n = self.n
        by_idx = self.net.TAU - self.t1[:, None] - K.WAVE_GAP * np.arange(n)[None, :]
        dist = np.empty((n, n), dtype=np.int64)
        dist[:, self.by_number] = by_idx
        return dist

    @property
    def eccentricity(self) -> np.ndarray:
        return self.net.V[:, K.R_ECC]

    @property
    def cycle_lengths(self) -> np.ndarray:
        """Per-vertex shortest detected cycle, 0 when none."""
        return self.net.V[:, K.R_CV]

    @property
    def cut_flags(self) -> np.ndarray:
        return self.net.V[:, K.R_CUT].astype(bool)

    @property
    def broadcast(self) -> np.ndarray:
        return self.net.BVAL

    @property
    def diameter(self) -> int:
        return int(self.net.BVAL[self.graph.leader, 0])

    @property
    def girth(self) -> int:
        return int(self.net.BVAL[self.graph.leader, 1])

    @property
    def biconnected(self) -> bool:
        return not self.net.BVAL[self.graph.leader, 2]

    @cached_property
    def bridges(self) -> set[tuple[int, int]]:
        ch = self.net.channels
        owner = ch.owner()
        out = set()
        for s in np.flatnonzero(self.net.P[: ch.n_slots, K.CUTF] == 1):
            u, v = int(owner[s]), int(ch.nbr[s])
            out.add((min(u, v), max(u, v)))
        return out

    @property
    def articulations(self) -> set[int]:
        return {int(v) for v in np.flatnonzero(self.cut_flags)}

    @property
    def completion_rounds(self) -> dict[str, int]:
        L = self.graph.leader
        V = self.net.V
        return {
            "bfs": int(V[L, K.L_BFS]),
            "enumeration": int(V[L, K.L_ENUM]),
            "dist_cal": int(V[L, K.L_DIST]),
            "waves": int(V[:, K.W_QR].max()),
            "convergecast": int(V[L, K.L_AGG]),
            "broadcast": int(V[:, K.DONE_R].max()),
            "total": self.metrics.rounds_total,
        }

    @cached_property
    def wave_logs(self) -> list[WaveLog]:
        return wave_logs(self.net)

    @cached_property
    def local_results(self) -> list[LocalResults]:
        return [local_results(g) for g in self.wave_logs]

    def vertex_table(self) -> list[dict[str, Any]]:
        rows = self.net.vertex_outputs()
        for u, row in enumerate(rows):
            row["dist_vector"] = [int(x) for x in self.distances[u, self.by_number]]
        return rows


def run_pipeline(
    graph: Graph,
    ports: PortMap,
    max_rounds: int | None = None,
    trace: bool = False,
) -> PipelineResult:
    """Run every phase to completion; raises on budget overrun or a protocol violation."""
    net = Network(graph, ports, Phases(), trace=trace).run(max_rounds)
    check_endpoint_agreement(net)
    return PipelineResult(graph, ports, net, net.trace() if trace else None)
