"""Anonymous wave schedule and everything derived from its arrival log.

Vertex number i floods a wave at t_1 + 5(i-1). Waves carry no identity; a
vertex tells them apart by time alone, opening a new record whenever a WAVE
shows up two or more rounds after the current record's first arrival.

The derivations below run the same compiled functions the automaton uses at
quiescence, fed from a :class:`WaveLog` instead of the live arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels as K
from .bfs import TreeView
from .errors import EndpointDisagreement, ScheduleInfeasible
from .graph import Graph, PortMap
from .network import Network, Phase, Phases
from .unary import unary_broadcast, unary_max_convergecast

__all__ = [
    "WAVE_GAP",
    "QUIET_ROUNDS",
    "LocalResults",
    "WaveLog",
    "WaveRecord",
    "check_endpoint_agreement",
    "cut_edge_flags",
    "cut_vertex_partition",
    "detect_cycle_length",
    "finalize_distances",
    "girth_pipeline",
    "local_results",
    "run_waves",
    "start_schedule",
    "wave_handler",
    "wave_logs",
]

WAVE_GAP = K.WAVE_GAP
QUIET_ROUNDS = K.QUIET_ROUNDS

# per-vertex reaction to WAVE arrivals, as run by the automaton
wave_handler = K.wave_inbox


@dataclass(frozen=True)
class WaveRecord:
    tau: int
    arrivals: tuple[tuple[int, int], ...]  # (port, offset)

    def offsets(self) -> list[int]:
        return [o for _, o in self.arrivals]


@dataclass(frozen=True)
class WaveLog:
    degree: int
    records: tuple[WaveRecord, ...]
    t1: int
    own: int
    quiescent_at: int | None = None

    def arrival_matrix(self) -> np.ndarray:
        arr = np.full((self.degree, max(len(self.records), 1)), -1, dtype=np.int8)
        for i, rec in enumerate(self.records):
            for p, o in rec.arrivals:
                arr[p - 1, i] = o
        return arr

    def taus(self) -> np.ndarray:
        return np.array([r.tau for r in self.records], dtype=np.int64)


@dataclass(frozen=True)
class LocalResults:
    dist_vector: tuple[int, ...]
    eccentricity: int
    cycle_length: int | None
    cut_ports: tuple[int, ...]
    port_classes: tuple[int, ...]
    is_cut: bool


def start_schedule(t1: int, number: int, now: int | None = None) -> int:
    """Round at which vertex ``number`` emits its wave."""
    t = t1 + WAVE_GAP * (number - 1)
    if now is not None and t <= now:
        raise ScheduleInfeasible(f"emission round {t} is not after round {now}")
    return t


def finalize_distances(log: WaveLog) -> tuple[tuple[int, ...], int]:
    d = K.wave_distances(log.taus(), len(log.records), log.t1)
    return tuple(int(x) for x in d), int(d.max()) if len(d) else 0


def detect_cycle_length(log: WaveLog) -> int | None:
    c = K.cycle_length(log.taus(), log.arrival_matrix(), 0, log.degree, len(log.records), log.t1, log.own)
    return int(c) or None


def cut_edge_flags(log: WaveLog) -> tuple[bool, ...]:
    flags = K.cut_edge_flags(log.arrival_matrix(), 0, log.degree, len(log.records))
    return tuple(bool(f) for f in flags)


def cut_vertex_partition(log: WaveLog) -> tuple[tuple[int, ...], bool]:
    """Port classes (a label per port) and the resulting cut-vertex verdict."""
    arr = log.arrival_matrix()
    labels = K.port_classes(arr, 0, log.degree, len(log.records))
    return tuple(int(x) for x in labels), bool(K.is_cut_vertex(arr, 0, log.degree, len(log.records)))


def local_results(log: WaveLog) -> LocalResults:
    dist, ecc = finalize_distances(log)
    flags = cut_edge_flags(log)
    classes, cut = cut_vertex_partition(log)
    return LocalResults(
        dist, ecc, detect_cycle_length(log),
        tuple(p + 1 for p, f in enumerate(flags) if f), classes, cut,
    )


def wave_logs(net: Network) -> list[WaveLog]:
    off = net.channels.off
    logs = []
    for u in range(net.graph.n):
        lo, deg = int(off[u]), net.graph.degree(u)
        nrec = int(net.V[u, K.W_NREC])
        recs = []
        for i in range(nrec):
            arr = tuple(
                (p + 1, int(net.ARR[lo + p, i])) for p in range(deg) if net.ARR[lo + p, i] >= 0
            )
            recs.append(WaveRecord(int(net.TAU[u, i]), arr))
        qr = int(net.V[u, K.W_QR])
        logs.append(
            WaveLog(deg, tuple(recs), int(net.V[u, K.W_T1]), int(net.V[u, K.W_OWN]), qr if qr >= 0 else None)
        )
    return logs


def check_endpoint_agreement(net: Network) -> None:
    """Both ends of every edge must reach the same cut-edge verdict."""
    ch = net.channels
    flags = net.P[: ch.n_slots, K.CUTF]
    bad = np.flatnonzero(flags != flags[ch.rev])
    if len(bad):
        s = int(bad[0])
        u, v = int(ch.owner()[s]), int(ch.nbr[s])
        raise EndpointDisagreement(f"edge {u}-{v}: endpoints disagree on the cut-edge flag")


def run_waves(
    graph: Graph,
    ports: PortMap,
    tree: Sequence[TreeView],
    numbers: Sequence[int],
    levels: Sequence[int],
    max_rounds: int | None = None,
) -> tuple[list[WaveLog], list[LocalResults], Network]:
    """Run the wave phase alone, from round 0 with t_1 = 0."""
    net = Network(
        graph, ports, Phases(Phase.WAVE, Phase.WAVE), tree=tree, numbers=numbers, levels=levels
    ).run(max_rounds)
    check_endpoint_agreement(net)
    logs = wave_logs(net)
    return logs, [local_results(g) for g in logs], net


def girth_pipeline(
    graph: Graph,
    ports: PortMap,
    tree: Sequence[TreeView],
    cycle_lengths: Sequence[int | None],
    n: int,
) -> np.ndarray:
    """Girth known at every vertex, from per-vertex cycle candidates.

    A candidate c is submitted as n - c + 1 so that a Hamiltonian shortest
    cycle still differs from "no cycle", which is submitted as 0.
    """
    vals = [n - c + 1 if c else 0 for c in cycle_lengths]
    top = unary_max_convergecast(graph, ports, tree, vals).maximum[0]
    girth = n + 1 - top if top > 0 else 0
    return unary_broadcast(graph, ports, tree, girth).values[:, 0]
