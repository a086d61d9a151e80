import pytest

from wavecast import (
    ChannelOverflow,
    Phases,
    Protocol,
    RoundBudgetExceeded,
    RoundEngine,
    Signal,
    generate,
    run_pipeline,
    run_protocol,
)
from wavecast.engine import default_max_rounds

from helpers import P3, STAR3, graph, ports, single_vertex


class Silent(Protocol):
    def handle(self, state, rnd, inbox, self_signal, out):
        state.setdefault("seen", []).append(dict(inbox))


class LeaderStarts(Protocol):
    """The leader floods START in round 0; everyone logs what arrives."""

    def init_state(self, degree, is_leader):
        return {"leader": is_leader, "log": []}

    def handle(self, state, rnd, inbox, self_signal, out):
        if inbox:
            state["log"].append((rnd, dict(inbox)))
        if self_signal is not None:
            state["log"].append((rnd, {"self": self_signal}))
        if state["leader"] and rnd == 0:
            out.send_all(Signal.START)
            out.send_self(Signal.OK_BFS)


class DoubleWave(Protocol):
    def handle(self, state, rnd, inbox, self_signal, out):
        out.send(1, Signal.WAVE)
        out.send(1, Signal.WAVE)


def test_empty_outboxes_leave_inboxes_empty():
    g = graph(P3)
    eng = RoundEngine(g, ports(g), Silent())
    for _ in range(3):
        eng.advance_round()
    assert all(seen == [{}, {}, {}] for seen in (s["seen"] for s in eng.states))
    assert eng.metrics().symbols_total == 0


def test_start_arrives_next_round():
    g = graph(STAR3)
    res = run_protocol(g, ports(g), LeaderStarts(), max_rounds=5)
    for leaf in (1, 2, 3):
        assert res.outputs[leaf]["log"] == [(1, {1: Signal.START})]
    assert res.outputs[0]["log"] == [(1, {"self": Signal.OK_BFS})]


def test_self_delivery_is_free():
    g = graph(STAR3)
    res = run_protocol(g, ports(g), LeaderStarts(), max_rounds=5)
    assert res.metrics.symbols_total == 3
    assert all(d[3] == Signal.START for d in res.trace.deliveries)


def test_two_signals_on_one_port_overflow():
    g = graph(P3)
    with pytest.raises(ChannelOverflow):
        run_protocol(g, ports(g), DoubleWave(), max_rounds=3)


def test_single_vertex_pipeline():
    res = run_pipeline(single_vertex(), ports(single_vertex()))
    assert res.numbers.tolist() == [1]
    assert res.metrics.rounds_total <= 20
    assert res.metrics.symbols_total == 0


def test_budget_exceeded():
    g = graph(P3)
    with pytest.raises(RoundBudgetExceeded):
        run_pipeline(g, ports(g), max_rounds=5)


def test_default_budget():
    assert default_max_rounds(10) == 704


def test_trace_is_deterministic():
    g = generate("random_connected", n=12, p=0.3, seed=4)
    pm = ports(g, "random", 9)
    a = run_protocol(g, pm, Phases())
    b = run_protocol(g, pm, Phases())
    assert a.trace.to_text() == b.trace.to_text()
    assert a.trace.digest() == b.trace.digest()


def test_symbols_per_channel_bounded_by_rounds():
    g = generate("random_connected", n=15, p=0.3, seed=2)
    res = run_pipeline(g, ports(g, "random", 1))
    m = res.metrics
    assert max(m.symbols_per_channel.values()) <= m.rounds_total
    assert len(m.symbols_per_channel) == 2 * g.m


def test_trace_line_format():
    g = graph([(0, 1)])
    res = run_pipeline(g, ports(g), trace=True)
    first = res.trace.lines()[0].split()
    assert first[0] == "1" and first[1:3] == ["0", "1"] and first[3] == ">" and first[4] == "START"
    assert any(line.split()[3] == "<" for line in res.trace.lines() if line.split()[3] in "<>")


def test_metrics_text_block():
    g = generate("cycle", n=6)
    m = run_pipeline(g, ports(g)).metrics
    kv = dict(line.split(" ", 1) for line in m.to_text().splitlines())
    assert int(kv["rounds_total"]) == m.rounds_total
    assert int(kv["bit_rounds"]) <= 4 * m.rounds_total
    assert m.alphabet_used <= 16 and m.bits_per_signal <= 4
