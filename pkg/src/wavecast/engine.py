"""Barrier-synchronised round engine, metering and traces.

Signals emitted in round r land in the recipient's inbox of round r + 1.
Self-scheduled signals behave the same way but never touch a channel or the
meters. Two engines share the delivery kernel:

* :class:`RoundEngine` runs arbitrary Python :class:`Protocol` handlers and is
  meant for small experiments and contract tests.
* :class:`wavecast.network.Network` runs the compiled pipeline automaton.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Any, Iterable

import numpy as np

from ._kernels import M_MASK, M_TLEN, NMETA, deliver
from .errors import ChannelOverflow, RoundBudgetExceeded
from .graph import Channels, Graph, PortMap, channel_arrays
from .signals import NO_SIGNAL, Signal

__all__ = [
    "Metrics",
    "Outbox",
    "Protocol",
    "RoundEngine",
    "RunResult",
    "Trace",
    "default_max_rounds",
    "run_protocol",
]


def default_max_rounds(n: int) -> int:
    return 64 * n + 64


@dataclass(frozen=True)
class Metrics:
    rounds_total: int
    symbols_per_channel: dict[tuple[int, int], int]
    alphabet_used: int
    signals_used: tuple[Signal, ...] = ()

    @property
    def bits_per_signal(self) -> int:
        return max(1, math.ceil(math.log2(max(self.alphabet_used, 1))))

    @property
    def bit_rounds(self) -> int:
        """Upper bound on bit rounds: every round widened to one symbol's bits."""
        return self.rounds_total * self.bits_per_signal

    @property
    def symbols_total(self) -> int:
        return sum(self.symbols_per_channel.values())

    def to_text(self) -> str:
        lines = [
            f"rounds_total {self.rounds_total}",
            f"alphabet_used {self.alphabet_used}",
            f"bits_per_signal {self.bits_per_signal}",
            f"bit_rounds {self.bit_rounds}",
            f"symbols_total {self.symbols_total}",
            f"symbols_max_channel {max(self.symbols_per_channel.values(), default=0)}",
            "signals_used " + ",".join(s.name for s in self.signals_used),
        ]
        for (u, v), c in sorted(self.symbols_per_channel.items()):
            lines.append(f"channel {u}>{v} {c}")
        return "\n".join(lines) + "\n"


def _metrics_from(rounds: int, ch: Channels, sym: np.ndarray, mask: int) -> Metrics:
    owner = ch.owner()
    per = {(int(owner[s]), int(ch.nbr[s])): int(sym[s]) for s in range(ch.n_slots)}
    used = tuple(s for s in Signal if mask >> int(s) & 1)
    return Metrics(rounds, per, len(used), used)


@dataclass(frozen=True)
class Trace:
    """Delivery events ``(round, sender, receiver, signal)`` plus per-vertex outputs."""

    deliveries: tuple[tuple[int, int, int, Signal], ...]
    outputs: tuple[tuple[int, int, str, Any], ...] = ()

    def lines(self) -> list[str]:
        out = []
        for rnd, a, b, sig in self.deliveries:
            u, v = (a, b) if a < b else (b, a)
            direction = ">" if a == u else "<"
            out.append(f"{rnd} {u} {v} {direction} {sig.name}")
        for rnd, v, key, value in self.outputs:
            out.append(f"{rnd} {v} out {key} {value}")
        return out

    def to_text(self) -> str:
        return "\n".join(self.lines()) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()


def _trace_from(buf: np.ndarray, length: int, ch: Channels, outputs=()) -> Trace:
    owner = ch.owner()
    events = tuple(
        (int(buf[i, 0]), int(owner[buf[i, 1]]), int(ch.nbr[buf[i, 1]]), Signal(int(buf[i, 2])))
        for i in range(length)
    )
    return Trace(events, tuple(outputs))


@dataclass
class RunResult:
    outputs: list[Any]
    trace: Trace
    metrics: Metrics
    extra: dict[str, Any] = field(default_factory=dict)


# -- generic Python-handler engine -------------------------------------------------


class Outbox:
    """Per-vertex emission buffer for one round; one signal per port."""

    def __init__(self, out: np.ndarray, self_out: np.ndarray, lo: int, deg: int, u: int) -> None:
        self._out = out
        self._self_out = self_out
        self._lo = lo
        self._deg = deg
        self._u = u

    def send(self, port: int, sig: Signal) -> None:
        if not 1 <= port <= self._deg:
            raise ValueError(f"port {port} outside 1..{self._deg}")
        s = self._lo + port - 1
        if self._out[s] != NO_SIGNAL:
            raise ChannelOverflow(f"two signals on port {port} in one round")
        self._out[s] = int(sig)

    def send_all(self, sig: Signal, skip: Iterable[int] = ()) -> None:
        skip = set(skip)
        for p in range(1, self._deg + 1):
            if p not in skip:
                self.send(p, sig)

    def send_self(self, sig: Signal) -> None:
        if self._self_out[self._u] != NO_SIGNAL:
            raise ChannelOverflow("two self-scheduled signals in one round")
        self._self_out[self._u] = int(sig)


class Protocol:
    """Base class for handler protocols run by :class:`RoundEngine`.

    Handlers see only their own state, the round number, their degree and
    leader bit, and the inbox keyed by port.
    """

    def init_state(self, degree: int, is_leader: bool) -> Any:
        return {}

    def handle(
        self,
        state: Any,
        rnd: int,
        inbox: dict[int, Signal],
        self_signal: Signal | None,
        out: Outbox,
    ) -> None:
        raise NotImplementedError

    def finished(self, states: list[Any]) -> bool:
        """Global termination predicate, evaluated once the network is quiet."""
        return True

    def output(self, state: Any) -> Any:
        return state


class RoundEngine:
    def __init__(self, graph: Graph, ports: PortMap, protocol: Protocol, trace: bool = True) -> None:
        ports.validate(graph)
        self.graph = graph
        self.ports = ports
        self.protocol = protocol
        self.channels = channel_arrays(graph, ports)
        S = self.channels.n_slots
        self.inbox = np.full(S, NO_SIGNAL, dtype=np.int8)
        self.outbox = np.full(S, NO_SIGNAL, dtype=np.int8)
        self.self_in = np.full(graph.n, NO_SIGNAL, dtype=np.int8)
        self.self_out = np.full(graph.n, NO_SIGNAL, dtype=np.int8)
        self.sym = np.zeros(S, dtype=np.int64)
        self.meta = np.zeros(NMETA, dtype=np.int64)
        self._trace_on = trace
        self._trace = np.empty((64, 3), dtype=np.int64)
        self.states = [protocol.init_state(graph.degree(u), u == graph.leader) for u in range(graph.n)]
        self.round = 0
        self.in_flight = False

    def inbox_of(self, u: int) -> dict[int, Signal]:
        lo = int(self.channels.off[u])
        return {
            p: Signal(int(self.inbox[lo + p - 1]))
            for p in range(1, self.graph.degree(u) + 1)
            if self.inbox[lo + p - 1] != NO_SIGNAL
        }

    def advance_round(self) -> None:
        off = self.channels.off
        for u in range(self.graph.n):
            sx = int(self.self_in[u])
            out = Outbox(self.outbox, self.self_out, int(off[u]), self.graph.degree(u), u)
            self.protocol.handle(
                self.states[u],
                self.round,
                self.inbox_of(u),
                Signal(sx) if sx != NO_SIGNAL else None,
                out,
            )
        self._trace, self.in_flight = deliver(
            self.round, self.channels.rev, self.channels.n_slots, self.outbox, self.inbox,
            self.self_out, self.self_in, self.sym, self.meta, self._trace, self._trace_on,
        )
        self.round += 1

    def metrics(self) -> Metrics:
        return _metrics_from(self.round, self.channels, self.sym, int(self.meta[M_MASK]))

    def trace(self) -> Trace:
        return _trace_from(self._trace, int(self.meta[M_TLEN]), self.channels)

    def run(self, max_rounds: int) -> RunResult:
        if max_rounds <= 0:
            raise ValueError("max_rounds must be positive")
        while True:
            if self.round > 0 and not self.in_flight and self.protocol.finished(self.states):
                break
            if self.round >= max_rounds:
                raise RoundBudgetExceeded(f"no termination within {max_rounds} rounds")
            self.advance_round()
        outputs = [self.protocol.output(s) for s in self.states]
        return RunResult(outputs, self.trace(), self.metrics())


def run_protocol(
    graph: Graph,
    ports: PortMap,
    protocol: Any,
    max_rounds: int | None = None,
    trace: bool = True,
) -> RunResult:
    """Run ``protocol`` to global termination.

    ``protocol`` is either a :class:`Protocol` instance or a
    :class:`wavecast.network.Phases` selection of the compiled pipeline.
    """
    if max_rounds is None:
        max_rounds = default_max_rounds(graph.n)
    from .network import Network, Phases

    if isinstance(protocol, Phases):
        net = Network(graph, ports, protocol, trace=trace)
        net.run(max_rounds)
        return RunResult(net.vertex_outputs(), net.trace(), net.metrics(), {"network": net})
    return RoundEngine(graph, ports, protocol, trace=trace).run(max_rounds)
