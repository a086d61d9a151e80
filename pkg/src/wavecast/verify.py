"""Compare a pipeline run against the oracles and the protocol invariants.

Each property becomes one named :class:`Check`. Informational statistics that
are not pass/fail (the cycle-closure distance, per-vertex cycle detections
that exceed the shortest cycle through the vertex) go into ``info``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import _kernels as K
from ._jit import njit
from .errors import ProtocolViolation, RoundBudgetExceeded
from .graph import Graph, PortMap
from .oracles import OracleReport, check_cube_path, oracle_report, reference_trav
from .pipeline import PipelineResult, run_pipeline

__all__ = ["Check", "CorpusSummary", "VerifyReport", "shortest_cycle_through", "verify_case", "verify_result"]


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class VerifyReport:
    name: str
    n: int
    checks: list[Check] = field(default_factory=list)
    info: dict[str, Any] = field(default_factory=dict)
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def lines(self) -> list[str]:
        out = [f"case {self.name} n={self.n}"]
        if self.error:
            out.append(f"  error {self.error}")
        for c in self.checks:
            tail = f" ({c.detail})" if c.detail and not c.passed else ""
            out.append(f"  {'pass' if c.passed else 'FAIL'} {c.name}{tail}")
        for k, v in self.info.items():
            out.append(f"  info {k} {v}")
        return out


def shortest_cycle_through(graph: Graph) -> list[int]:
    """Length of the shortest cycle through each vertex, 0 if it is on none."""
    best = [0] * graph.n
    for u, v in graph.edges:
        # BFS from u to v without the edge u-v
        dist = {u: 0}
        frontier = [u]
        while frontier and v not in dist:
            nxt = []
            for x in frontier:
                for y in graph.neighbors(x):
                    if {x, y} == {u, v} or y in dist:
                        continue
                    dist[y] = dist[x] + 1
                    nxt.append(y)
            frontier = nxt
        if v not in dist:
            continue
        # a shortest cycle through w uses some edge at w, so minimising over
        # incident edges is exact
        c = dist[v] + 1
        for w in (u, v):
            if best[w] == 0 or c < best[w]:
                best[w] = c
    return best


_SCAN = (
    "bfs.levels",
    "bfs.tree",
    "numbering.bijection",
    "parity.first_visit_level",
    "parity.one_even",
    "waves.count",
    "waves.offsets",
    "waves.gaps",
    "apsp.timing",
    "apsp.matrix",
    "eccentricity",
    "diameter",
    "girth",
    "girth.min_candidate",
    "cut_edges.endpoints",
    "bridges",
    "articulations",
    "biconnected",
)


@njit
def _scan(leader, off, nbr, rev, V, TAU, ARR, P, BVAL, D, diam, girth, bic, want_cut, want_art):
    """Bitmask of failed checks, bit k for ``_SCAN[k]``."""
    n = V.shape[0]
    S = off[n]
    bad = 0
    for v in range(n):
        if V[v, K.D_LEVEL] != D[leader, v]:
            bad |= 1 << 0
        par = V[v, K.PAR]
        if v == leader:
            if par >= 0:
                bad |= 1 << 1
        elif par < 0 or D[leader, nbr[par]] != D[leader, v] - 1:
            bad |= 1 << 1
    seen = np.zeros(n + 1, dtype=np.int64)
    by_number = np.zeros(n, dtype=np.int64)
    for v in range(n):
        k = V[v, K.E_NUM]
        if k < 1 or k > n or seen[k]:
            bad |= 1 << 2
        else:
            seen[k] = 1
            by_number[k - 1] = v
    for v in range(n):
        p1 = V[v, K.E_P1]
        p2 = V[v, K.E_P2]
        if p1 % 2 != V[v, K.D_LEVEL] % 2:
            bad |= 1 << 3
        if p1 % 2 == p2 % 2:
            bad |= 1 << 4
        if V[v, K.W_NREC] != n:
            bad |= 1 << 5
    for s in range(S):
        for i in range(n):
            if ARR[s, i] < -1 or ARR[s, i] > 1:
                bad |= 1 << 6
    t1 = V[leader, K.W_T1]
    for v in range(n):
        if V[v, K.W_T1] != t1:
            bad |= 1 << 8
        ecc = 0
        for i in range(n):
            if i > 0 and TAU[v, i] - TAU[v, i - 1] < 2:
                bad |= 1 << 7
            w = by_number[i]
            if TAU[v, i] != t1 + K.WAVE_GAP * i + D[v, w]:
                bad |= 1 << 8
            if TAU[v, i] - V[v, K.W_T1] - K.WAVE_GAP * i != D[v, w]:
                bad |= 1 << 9
            if D[v, i] > ecc:
                ecc = D[v, i]
        if V[v, K.R_ECC] != ecc:
            bad |= 1 << 10
    if bad & (1 << 2):
        bad |= (1 << 8) | (1 << 9)
    best = 0
    for v in range(n):
        if BVAL[v, 0] != diam:
            bad |= 1 << 11
        if BVAL[v, 1] != girth:
            bad |= 1 << 12
        c = V[v, K.R_CV]
        if c > 0 and (best == 0 or c < best):
            best = c
        if (BVAL[v, 2] == 0) != bic:
            bad |= 1 << 17
        if V[v, K.R_CUT] != want_art[v]:
            bad |= 1 << 16
    if best != girth:
        bad |= 1 << 13
    for s in range(S):
        if P[s, K.CUTF] != P[rev[s], K.CUTF]:
            bad |= 1 << 14
        if P[s, K.CUTF] != want_cut[s]:
            bad |= 1 << 15
    return bad


def verify_result(res: PipelineResult, oracle: OracleReport | None = None) -> VerifyReport:
    g, net = res.graph, res.net
    n, L = g.n, g.leader
    oracle = oracle or oracle_report(g)
    rep = VerifyReport("", n)
    ck = rep.checks
    ch = net.channels
    owner = ch.owner()
    want_cut = np.array(
        [(min(u, v), max(u, v)) in oracle.bridges for u, v in zip(owner.tolist(), ch.nbr.tolist())],
        dtype=np.int64,
    )
    want_art = np.zeros(n, dtype=np.int64)
    want_art[list(oracle.articulations)] = 1
    bad = int(_scan(
        L, ch.off, ch.nbr, ch.rev, net.V, net.TAU, net.ARR, net.P, net.BVAL, oracle.distances,
        oracle.diameter, oracle.girth, oracle.biconnected, want_cut, want_art,
    ))
    for k, name in enumerate(_SCAN):
        ck.append(Check(name, not bad >> k & 1))

    numbers = res.numbers
    ck.append(Check("numbering.n_known", res.n_known == n, f"leader learned {res.n_known}"))
    children: dict[int, list[int]] = {v: [] for v in range(n)}
    for s in np.flatnonzero(net.P[: ch.n_slots, K.LINK] == K.LK_CHILD).tolist():
        children[int(owner[s])].append(int(ch.nbr[s]))
    ref = reference_trav(L, children)
    p1, p2 = res.visit_counts
    ref_ok = (
        all(int(numbers[v]) == ref.numbers.get(v) for v in range(n))
        and all(int(p1[v]) == ref.nu_first[v] and int(p2[v]) == ref.nu_second[v] for v in range(n))
    )
    ck.append(Check("numbering.reference_trav", ref_ok, "" if ref_ok else f"visits {ref.visits}"))
    if not bad & 0b100:
        cube = check_cube_path(g, numbers.tolist(), oracle.distances)
        ck.append(Check("numbering.cube_path", cube.passed, f"max consecutive {cube.max_consecutive}"))
        rep.info["closure_distance"] = cube.closure_distance
    else:
        ck.append(Check("numbering.cube_path", False, "numbering not a bijection"))

    mask = int(net.meta[K.M_MASK])
    alphabet = bin(mask).count("1")
    ck.append(Check("alphabet", alphabet <= 16, f"{alphabet} signals"))
    if bad:
        _explain(rep, res, oracle)
    rep.info["rounds"] = net.round
    return rep


def _explain(rep: VerifyReport, res: PipelineResult, oracle: OracleReport) -> None:
    """Attach readable details to failed scan checks."""
    detail = {
        "bfs.levels": f"levels {res.levels.tolist()} want {oracle.distances[res.graph.leader].tolist()}",
        "numbering.bijection": f"numbers {res.numbers.tolist()}",
        "waves.count": f"counts {res.wave_counts.tolist()}",
        "diameter": f"got {sorted(set(res.broadcast[:, 0].tolist()))} want {oracle.diameter}",
        "girth": f"got {sorted(set(res.broadcast[:, 1].tolist()))} want {oracle.girth}",
        "bridges": f"got {sorted(res.bridges)} want {sorted(oracle.bridges)}",
        "articulations": f"got {sorted(res.articulations)} want {sorted(oracle.articulations)}",
    }
    rep.checks[:] = [
        Check(c.name, c.passed, detail.get(c.name, c.detail)) if not c.passed else c for c in rep.checks
    ]


def verify_case(
    graph: Graph,
    ports: PortMap,
    name: str = "",
    max_rounds: int | None = None,
    cycle_detail: bool = False,
) -> VerifyReport:
    """Run the pipeline and verify it; runtime failures become a report error."""
    try:
        res = run_pipeline(graph, ports, max_rounds)
    except (ProtocolViolation, RoundBudgetExceeded) as exc:
        return VerifyReport(name, graph.n, error=f"{type(exc).__name__}: {exc}")
    rep = verify_result(res)
    rep.name = name
    if cycle_detail:
        through = shortest_cycle_through(graph)
        cv = res.cycle_lengths
        rep.info["cycle_candidate_mismatches"] = sum(
            1 for v in range(graph.n) if int(cv[v]) != through[v]
        )
    return rep


@dataclass
class CorpusSummary:
    cases: int = 0
    passed: dict[str, int] = field(default_factory=dict)
    failed: dict[str, int] = field(default_factory=dict)
    errors: int = 0
    closure: dict[int, int] = field(default_factory=dict)
    examples: list[VerifyReport] = field(default_factory=list)

    def add(self, rep: VerifyReport, keep: int = 5) -> None:
        self.cases += 1
        if rep.error:
            self.errors += 1
        for c in rep.checks:
            book = self.passed if c.passed else self.failed
            book[c.name] = book.get(c.name, 0) + 1
        d = rep.info.get("closure_distance")
        if d is not None:
            self.closure[d] = self.closure.get(d, 0) + 1
        if not rep.passed and len(self.examples) < keep:
            self.examples.append(rep)

    @property
    def ok(self) -> bool:
        return self.cases > 0 and self.errors == 0 and not self.failed

    def check_ok(self, name: str) -> bool:
        """True when ``name`` passed in every case and no case aborted."""
        return self.errors == 0 and self.failed.get(name, 0) == 0 and self.passed.get(name, 0) == self.cases

    def lines(self) -> list[str]:
        out = [f"cases {self.cases}", f"aborted {self.errors}"]
        for name in sorted(set(self.passed) | set(self.failed)):
            good = self.passed.get(name, 0)
            tag = "pass" if self.check_ok(name) else "FAIL"
            out.append(f"{tag} {name} {good}/{self.cases}")
        closes = sum(c for d, c in self.closure.items() if d <= 3)
        out.append(f"info closure_distance_le_3 {closes}/{sum(self.closure.values())}")
        for d in sorted(self.closure):
            out.append(f"info closure_distance {d} {self.closure[d]}")
        for rep in self.examples:
            out.extend(rep.lines())
        return out
