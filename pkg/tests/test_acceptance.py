"""Acceptance criteria, one printed pass/fail line each.

The corpus sweep runs once per module and feeds criteria 1-5 and 7.
"""

import io
import time

import numpy as np
import pytest

from wavecast import assign_ports, generate, run_pipeline
from wavecast.cli import main
from wavecast.corpus import CorpusSpec, iter_corpus
from wavecast.verify import CorpusSummary, verify_case

from conftest import ACCEPTANCE_LINES

CORPUS_SECONDS = 120.0
SIZES = (16, 32, 64, 128, 256)


def report(criterion, ok, detail):
    line = f"criterion {criterion} {'pass' if ok else 'FAIL'} {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


@pytest.fixture(scope="module")
def corpus():
    warm = generate("cycle", n=5)
    run_pipeline(warm, assign_ports(warm))  # load compiled kernels outside the timer
    spec = CorpusSpec()
    summary = CorpusSummary()
    t0 = time.perf_counter()
    for case in iter_corpus(spec):
        summary.add(verify_case(case.graph, case.ports, case.name))
    elapsed = time.perf_counter() - t0
    assert summary.cases == spec.size()
    return summary, elapsed


def _all(summary, names):
    bad = [f"{n}:{summary.failed.get(n, 0)}" for n in names if not summary.check_ok(n)]
    return not bad, bad


def _criterion(corpus, k, names, extra_ok=True, extra=""):
    summary, _ = corpus
    ok, bad = _all(summary, names)
    detail = f"{summary.cases} cases, aborted {summary.errors}, checks {','.join(names)}"
    if bad:
        detail += f" failing {' '.join(bad)}"
    assert report(k, ok and extra_ok, detail + extra), "\n".join(
        line for rep in summary.examples for line in rep.lines()
    )


def test_1_enumeration(corpus):
    _, elapsed = corpus
    fast = elapsed < CORPUS_SECONDS
    _criterion(
        corpus, 1,
        ["numbering.bijection", "numbering.reference_trav", "numbering.cube_path", "numbering.n_known"],
        fast, f"; sweep {elapsed:.1f}s (target < {CORPUS_SECONDS:.0f}s)",
    )


def test_2_parity(corpus):
    _criterion(corpus, 2, ["parity.first_visit_level", "parity.one_even"])


def test_3_apsp(corpus):
    _criterion(corpus, 3, ["apsp.matrix", "apsp.timing"])


def test_4_wave_invariants(corpus):
    _criterion(corpus, 4, ["waves.offsets", "waves.gaps", "waves.count"])


def test_5_global_outputs(corpus):
    _criterion(
        corpus, 5,
        ["diameter", "girth", "bridges", "cut_edges.endpoints", "articulations", "biconnected"],
    )


def test_supporting_checks(corpus):
    # everything else the verifier looks at, not tied to one criterion
    summary, _ = corpus
    assert summary.ok, "\n".join(summary.lines())


def _sweep():
    rows = []
    for kind in ("random_connected", "path"):
        for seed in range(3):
            series = []
            for n in SIZES:
                if kind == "path":
                    g = generate("path", n=n).with_leader((seed * 7) % n)
                else:
                    g = generate(kind, n=n, p=3.0 / n, seed=1000 * seed + n)
                pm = assign_ports(g, "random", seed)
                t0 = time.perf_counter()
                m = run_pipeline(g, pm).metrics
                series.append((n, m.rounds_total, m.alphabet_used, m.bit_rounds, time.perf_counter() - t0))
            rows.append((kind, seed, series))
    return rows


def test_6_linear_rounds():
    problems = []
    worst_ratio = worst_growth = 0.0
    worst_alpha = 0
    slowest = 0.0
    for kind, seed, series in _sweep():
        ratios = [r / n for n, r, *_ in series]
        for n, rounds, alpha, bits, secs in series:
            if rounds > 40 * n + 50:
                problems.append(f"{kind}/{seed} n={n} rounds {rounds} > {40 * n + 50}")
            if alpha > 16 or bits > 4 * rounds:
                problems.append(f"{kind}/{seed} n={n} alphabet {alpha} bit_rounds {bits}")
            if n == 256:
                slowest = max(slowest, secs)
            worst_alpha = max(worst_alpha, alpha)
        for a, b in zip(ratios, ratios[1:]):
            worst_growth = max(worst_growth, b / a)
            if b > 1.2 * a:
                problems.append(f"{kind}/{seed} rounds/n grew {a:.2f} -> {b:.2f}")
        worst_ratio = max(worst_ratio, max(ratios))
    if slowest >= 30.0:
        problems.append(f"n=256 took {slowest:.1f}s")
    detail = (
        f"max rounds/n {worst_ratio:.2f} (bound 40 + 50/n), worst doubling growth {worst_growth:.3f} "
        f"(limit 1.2), alphabet {worst_alpha} <= 16, n=256 in {slowest:.2f}s"
    )
    assert report(6, not problems, detail), "; ".join(problems)


def test_7_cube_path(corpus):
    summary, _ = corpus
    closes = sum(c for d, c in summary.closure.items() if d <= 3)
    total = sum(summary.closure.values())
    hist = " ".join(f"d={d}:{c}" for d, c in sorted(summary.closure.items()))
    ok = summary.check_ok("numbering.cube_path")
    # the closure statistic is a finding, not a pass/fail condition
    assert report(7, ok, f"cube path on all numberings; closure dist(v_n, v_1) <= 3 in {closes}/{total} ({hist})")


def _cli_bytes(argv):
    buf = io.StringIO()
    code = main(argv, out=buf)
    return code, buf.getvalue()


def test_8_determinism(tmp_path):
    problems = []
    for kind, n, seed in [("random_connected", 40, 5), ("random_tree", 60, 6), ("complete", 9, 7)]:
        g = generate(kind, n=n, p=0.1, seed=seed) if kind == "random_connected" else generate(kind, n=n, seed=seed)
        g = g.with_leader(seed % n)
        a = run_pipeline(g, assign_ports(g, "random", seed), trace=True)
        b = run_pipeline(g, assign_ports(g, "random", seed), trace=True)
        if a.trace.to_text() != b.trace.to_text() or a.metrics.to_text() != b.metrics.to_text():
            problems.append(f"{kind} trace differs")
        if not np.array_equal(a.distances, b.distances):
            problems.append(f"{kind} outputs differ")
    outs = []
    for k in range(2):
        trace = tmp_path / f"t{k}"
        outs.append((_cli_bytes(["run", "--gen", "random:30:0.2:3", "--port-policy", "random", "--seed", "9",
                                 "--trace", str(trace), "--verify"]), trace.read_bytes()))
    if outs[0] != outs[1]:
        problems.append("cli output differs")
    assert report(8, not problems, "repeat runs give byte-identical traces, metrics and CLI output"), problems
