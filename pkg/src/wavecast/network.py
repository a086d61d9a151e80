"""Array-backed network state driving the compiled pipeline automaton."""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Any, Sequence

import numpy as np

from . import _kernels as K
from .engine import Metrics, Trace, _metrics_from, _trace_from, default_max_rounds
from .errors import ERROR_TYPES, RoundBudgetExceeded
from .graph import Graph, InvalidParams, PortMap, channel_arrays
from .signals import NO_SIGNAL

__all__ = ["Network", "Phase", "Phases"]


class Phase(IntEnum):
    BFS = K.PH_BFS
    ENUM = K.PH_ENUM
    DIST = K.PH_DIST
    WAVE = K.PH_WAVE
    AGG = K.PH_AGG
    BCAST = K.PH_BCAST


@dataclass(frozen=True)
class Phases:
    """Which contiguous stretch of the pipeline a run executes.

    Runs starting after BFS need the earlier phases' results as presets.
    """

    start: Phase = Phase.BFS
    stop: Phase = Phase.BCAST
    nframes: int = 3

    def __post_init__(self) -> None:
        if self.stop < self.start:
            raise InvalidParams("stop phase precedes start phase")
        if self.start <= Phase.WAVE and self.stop >= Phase.AGG and self.nframes != 3:
            raise InvalidParams("the wave pipeline aggregates exactly three frames")
        if self.nframes < 1:
            raise InvalidParams("at least one frame is needed")


_NEG = np.array((
    K.PAR, K.B_JOIN, K.E_P1, K.E_P2, K.E_NUMR, K.D_LEVEL, K.D_LEVELR, K.D_ENDR,
    K.W_T1, K.W_TOWN, K.W_CUR, K.W_LAST, K.W_QR, K.W_OWN, K.A_READY, K.A_OPEN,
    K.DONE_R, K.L_BFS, K.L_ENUM, K.L_DIST, K.L_AGG, K.L_NEXT_R, K.L_LAUNCH_R,
))


class Network:
    def __init__(
        self,
        graph: Graph,
        ports: PortMap,
        phases: Phases = Phases(),
        *,
        tree: Sequence[Any] | None = None,
        numbers: Sequence[int] | None = None,
        levels: Sequence[int] | None = None,
        agg_values: Any = None,
        agg_ready: Sequence[int] | None = None,
        broadcast: Sequence[int] | None = None,
        trace: bool = False,
    ) -> None:
        ports.validate(graph)
        self.graph = graph
        self.ports = ports
        self.phases = phases
        self.channels = ch = channel_arrays(graph, ports)
        n, S, F = graph.n, ch.n_slots, phases.nframes
        self.S = S
        self.V = np.zeros((n, K.NV), dtype=np.int64)
        self.V[:, _NEG] = -1
        self.P = np.zeros((S + n, K.NP), dtype=np.int64)
        self.P[:, K.T_ENDR] = -1
        self.TAU = np.zeros((n, n), dtype=np.int64)
        self.ARR = np.full((S, n), -1, dtype=np.int8)
        self.AGS = np.zeros((S, F), dtype=np.int64)
        self.AGC = np.zeros((S, F), dtype=np.int64)
        self.AVAL = np.zeros((n, F), dtype=np.int64)
        self.ARES = np.zeros((n, F), dtype=np.int64)
        self.BVAL = np.zeros((n, F), dtype=np.int64)
        self.inbox = np.full(S, NO_SIGNAL, dtype=np.int8)
        self.outbox = np.full(S, NO_SIGNAL, dtype=np.int8)
        self.self_in = np.full(n, NO_SIGNAL, dtype=np.int8)
        self.self_out = np.full(n, NO_SIGNAL, dtype=np.int8)
        self.sym = np.zeros(S, dtype=np.int64)
        self.meta = np.zeros(K.NMETA, dtype=np.int64)
        self._trace_on = trace
        self._trace = np.empty((256 if trace else 1, 3), dtype=np.int64)
        self.round = 0
        self.decode = 1 if phases.start <= Phase.WAVE else 0

        L = graph.leader
        self.V[L, K.L_NEXT_R] = 0
        self.V[L, K.L_NEXT_PH] = int(phases.start)
        start = phases.start
        if start > Phase.BFS:
            if tree is None:
                raise InvalidParams(f"starting at {start.name} needs a spanning tree")
            self._preset_tree(tree)
            self.V[:, K.PH] = int(start) - 1
        if start == Phase.WAVE and (numbers is None or levels is None):
            raise InvalidParams("starting the waves needs numbers and levels")
        if numbers is not None:
            self.V[:, K.E_NUM] = np.asarray(numbers, dtype=np.int64)
        if levels is not None:
            self.V[:, K.D_LEVEL] = np.asarray(levels, dtype=np.int64)
        if start >= Phase.AGG:
            self.V[:, K.PH] = K.PH_AGG
        if start == Phase.AGG:
            if agg_values is None:
                raise InvalidParams("starting the convergecast needs local values")
            vals = np.asarray(agg_values, dtype=np.int64).reshape(n, F)
            if (vals < 0).any():
                raise InvalidParams("unary values must be non-negative")
            self.AVAL[:] = vals
            ready = np.zeros(n, dtype=np.int64) if agg_ready is None else np.asarray(agg_ready)
            self.V[:, K.A_READY] = ready
        if start == Phase.BCAST:
            if broadcast is None:
                raise InvalidParams("starting the broadcast needs the leader's values")
            vals = np.asarray(broadcast, dtype=np.int64).reshape(F)
            if (vals < 0).any():
                raise InvalidParams("unary values must be non-negative")
            self.BVAL[L] = vals

    def _preset_tree(self, tree: Sequence[Any]) -> None:
        off = self.channels.off
        for u, view in enumerate(tree):
            lo, deg = int(off[u]), self.graph.degree(u)
            self.P[lo : lo + deg, K.LINK] = K.LK_NONTREE
            if view.parent_port is not None:
                s = lo + view.parent_port - 1
                self.V[u, K.PAR] = s
                self.P[s, K.LINK] = K.LK_PARENT
            elif u != self.graph.leader:
                raise InvalidParams(f"vertex {u} has no parent but is not the leader")
            for p in view.child_ports:
                self.P[lo + p - 1, K.LINK] = K.LK_CHILD
            self.V[u, K.NCH] = len(view.child_ports)

    # -- execution ------------------------------------------------------------

    def _run(self, max_rounds: int) -> None:
        self._trace = K.run_rounds(
            self.channels.off, self.channels.rev, self.graph.leader, int(self.phases.stop),
            self.phases.nframes, self.decode, max_rounds, self._trace_on, self.round,
            self.inbox, self.outbox, self.self_in, self.self_out, self.V, self.P, self.TAU,
            self.ARR, self.AGS, self.AGC, self.AVAL, self.ARES, self.BVAL, self.sym,
            self.meta, self._trace,
        )
        self.round = int(self.meta[K.M_ROUNDS])
        code = int(self.meta[K.M_ERR])
        if code:
            raise ERROR_TYPES[code](
                f"vertex {int(self.meta[K.M_ERRV])} at round {int(self.meta[K.M_ERRR])}"
            )

    @property
    def stopped(self) -> bool:
        return bool(self.meta[K.M_STOPPED])

    def advance_round(self) -> None:
        self._run(self.round + 1)

    def run(self, max_rounds: int | None = None) -> Network:
        if max_rounds is None:
            max_rounds = default_max_rounds(self.graph.n)
        if max_rounds <= 0:
            raise ValueError("max_rounds must be positive")
        if not self.stopped:
            self._run(max_rounds)
        if not self.stopped:
            raise RoundBudgetExceeded(
                f"{self.phases.stop.name} not finished within {max_rounds} rounds"
            )
        return self

    # -- metering ------------------------------------------------------------------

    def metrics(self) -> Metrics:
        return _metrics_from(self.round, self.channels, self.sym, int(self.meta[K.M_MASK]))

    def trace(self) -> Trace:
        return _trace_from(self._trace, int(self.meta[K.M_TLEN]), self.channels, self.output_events())

    def output_events(self) -> list[tuple[int, int, str, Any]]:
        V = self.V
        ev = []
        for u in range(self.graph.n):
            if V[u, K.B_JOIN] >= 0:
                pp = self.parent_port(u)
                ev.append((int(V[u, K.B_JOIN]), u, "parent_port", pp if pp else "-"))
            if V[u, K.E_NUMR] >= 0:
                ev.append((int(V[u, K.E_NUMR]), u, "number", int(V[u, K.E_NUM])))
            if V[u, K.D_LEVELR] >= 0:
                ev.append((int(V[u, K.D_LEVELR]), u, "level", int(V[u, K.D_LEVEL])))
            if V[u, K.W_QR] >= 0:
                ev.append((int(V[u, K.W_QR]), u, "eccentricity", int(V[u, K.R_ECC])))
            if V[u, K.DONE_R] >= 0:
                vals = ",".join(str(int(x)) for x in self.BVAL[u])
                ev.append((int(V[u, K.DONE_R]), u, "broadcast", vals))
        ev.sort(key=lambda e: (e[0], e[1]))
        return ev

    # -- raw per-vertex readouts ---------------------------------------------------------

    def _slot_port(self, u: int, s: int) -> int:
        return int(s - self.channels.off[u] + 1)

    def parent_port(self, u: int) -> int | None:
        s = int(self.V[u, K.PAR])
        return None if s < 0 else self._slot_port(u, s)

    def ports_with_link(self, u: int, kind: int) -> list[int]:
        lo, hi = int(self.channels.off[u]), int(self.channels.off[u + 1])
        return [s - lo + 1 for s in range(lo, hi) if self.P[s, K.LINK] == kind]

    def column(self, col: int) -> np.ndarray:
        return self.V[:, col].copy()

    def leader_value(self, col: int) -> int:
        return int(self.V[self.graph.leader, col])

    def arrivals(self, u: int, record: int) -> list[tuple[int, int]]:
        lo, hi = int(self.channels.off[u]), int(self.channels.off[u + 1])
        return [(s - lo + 1, int(self.ARR[s, record])) for s in range(lo, hi) if self.ARR[s, record] >= 0]

    def cut_ports(self, u: int) -> list[int]:
        lo, hi = int(self.channels.off[u]), int(self.channels.off[u + 1])
        return [s - lo + 1 for s in range(lo, hi) if self.P[s, K.CUTF] == 1]

    def vertex_outputs(self) -> list[dict[str, Any]]:
        V = self.V
        res = []
        for u in range(self.graph.n):
            row: dict[str, Any] = {
                "parent_port": self.parent_port(u),
                "child_ports": self.ports_with_link(u, K.LK_CHILD),
            }
            if V[u, K.E_NUMR] >= 0:
                row["number"] = int(V[u, K.E_NUM])
            if V[u, K.D_LEVEL] >= 0:
                row["level"] = int(V[u, K.D_LEVEL])
            if V[u, K.W_QR] >= 0:
                row["eccentricity"] = int(V[u, K.R_ECC])
                row["cycle_length"] = int(V[u, K.R_CV]) or None
                row["cut_ports"] = self.cut_ports(u)
                row["is_cut"] = bool(V[u, K.R_CUT])
            if V[u, K.DONE_R] >= 0:
                row["broadcast"] = [int(x) for x in self.BVAL[u]]
            res.append(row)
        return res
