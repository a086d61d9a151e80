"""Command-line front end: ``run``, ``verify`` and ``generate``.

Exit codes: 0 success, 1 verification mismatch, 2 bad input, 3 round budget
exceeded, 4 a live protocol invariant failed.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, TextIO

from .corpus import CorpusSpec, iter_corpus
from .errors import ProtocolViolation, RoundBudgetExceeded
from .graph import (
    Graph,
    GraphError,
    assign_ports,
    format_edge_list,
    parse_generator_spec,
    parse_port_file,
    read_graph,
)
from .pipeline import PipelineResult, run_pipeline
from .verify import CorpusSummary, verify_case, verify_result

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_INVARIANT = 4

TASKS = ("enumerate", "apsp", "diameter", "girth", "cut-edges", "cut-vertices", "biconnected")


@dataclass(frozen=True)
class RunConfig:
    graph: Graph
    ports_path: str | None
    port_policy: str
    seed: int
    tasks: tuple[str, ...]
    trace_path: str | None
    metrics_path: str | None
    verify: bool
    max_rounds: int | None
    fmt: str


def _default_seed() -> int:
    raw = os.environ.get("WAVECAST_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise GraphError(f"WAVECAST_SEED must be an integer, got {raw!r}") from None


def _parse_tasks(values: Sequence[str] | None) -> tuple[str, ...]:
    names = [t.strip() for v in (values or ["all"]) for t in v.split(",") if t.strip()]
    if not names:
        raise GraphError("task set is empty")
    out: list[str] = []
    for name in names:
        if name == "all":
            out.extend(TASKS)
        elif name in TASKS:
            out.append(name)
        else:
            raise GraphError(f"unknown task {name!r}; choose from {', '.join(TASKS + ('all',))}")
    return tuple(dict.fromkeys(out))


def _load_graph(args: argparse.Namespace, seed: int) -> Graph:
    if bool(args.graph) == bool(args.gen):
        raise GraphError("give exactly one of --graph or --gen")
    if args.graph:
        g = read_graph(args.graph)
        return g if args.leader is None else g.with_leader(args.leader)
    return parse_generator_spec(args.gen, leader=args.leader or 0, default_seed=seed)


def _ports(graph: Graph, path: str | None, policy: str, seed: int):
    if path:
        return parse_port_file(Path(path).read_text(), graph)
    return assign_ports(graph, policy, seed)


# -- output -------------------------------------------------------------------------


def _emit_tasks(res: PipelineResult, tasks: tuple[str, ...], fmt: str, out: TextIO) -> None:
    n = res.n
    for task in tasks:
        if task == "enumerate":
            sep = "\t" if fmt == "tsv" else " "
            print(sep.join(("vertex", "number")), file=out)
            for v in range(n):
                print(f"{v}{sep}{int(res.numbers[v])}", file=out)
        elif task == "apsp":
            _emit_matrix(res, fmt, out)
        elif task == "diameter":
            print(f"diameter {res.diameter}", file=out)
        elif task == "girth":
            print(f"girth {res.girth}", file=out)
        elif task == "cut-edges":
            bridges = sorted(res.bridges)
            print(f"cut-edges {len(bridges)}", file=out)
            for u, v in bridges:
                print(f"cut-edge {u} {v}", file=out)
        elif task == "cut-vertices":
            arts = sorted(res.articulations)
            print(f"cut-vertices {len(arts)}", file=out)
            for v in arts:
                print(f"cut-vertex {v}", file=out)
        elif task == "biconnected":
            print(f"biconnected {'yes' if res.biconnected else 'no'}", file=out)


def _emit_matrix(res: PipelineResult, fmt: str, out: TextIO) -> None:
    dist = res.distances
    n = res.n
    if fmt == "tsv":
        # one row per vertex number k: the distances vertex v_k measured to v_1..v_n
        order = res.by_number
        print("\t".join(["number", "vertex"] + [f"d{k}" for k in range(1, n + 1)]), file=out)
        for k in range(n):
            v = int(order[k])
            row = [str(int(dist[v, w])) for w in order]
            print("\t".join([str(k + 1), str(v)] + row), file=out)
        return
    width = max(len(str(n - 1)), len(str(int(dist.max()) if n else 0))) + 1
    print("apsp", file=out)
    print(" " * width + "".join(f"{w:>{width}}" for w in range(n)), file=out)
    for v in range(n):
        print(f"{v:>{width}}" + "".join(f"{int(x):>{width}}" for x in dist[v]), file=out)


def _emit_metrics(res: PipelineResult, out: TextIO) -> None:
    m = res.metrics
    print(f"rounds {m.rounds_total}", file=out)
    print(f"bit_rounds {m.bit_rounds}", file=out)
    print(f"rounds_per_n {m.rounds_total / res.n:.3f}", file=out)


# -- commands -----------------------------------------------------------------------


def cmd_run(cfg: RunConfig, ports, out: TextIO) -> int:
    res = run_pipeline(cfg.graph, ports, cfg.max_rounds, trace=cfg.trace_path is not None)
    _emit_tasks(res, cfg.tasks, cfg.fmt, out)
    _emit_metrics(res, out)
    if cfg.trace_path:
        Path(cfg.trace_path).write_text(res.trace.to_text())
    if cfg.metrics_path:
        Path(cfg.metrics_path).write_text(res.metrics.to_text())
    if cfg.verify:
        rep = verify_result(res)
        for c in rep.checks:
            tail = f" ({c.detail})" if c.detail and not c.passed else ""
            print(f"verify {'pass' if c.passed else 'FAIL'} {c.name}{tail}", file=out)
        if not rep.passed:
            return EXIT_MISMATCH
    return EXIT_OK


def cmd_verify_one(graph: Graph, ports, max_rounds: int | None, out: TextIO) -> int:
    res = run_pipeline(graph, ports, max_rounds)
    rep = verify_result(res)
    rep.name = f"n={graph.n} m={graph.m} leader={graph.leader}"
    for line in rep.lines()[1:]:
        print(line.strip(), file=out)
    print(f"result {'pass' if rep.passed else 'FAIL'}", file=out)
    return EXIT_OK if rep.passed else EXIT_MISMATCH


def cmd_verify_corpus(spec: CorpusSpec, max_rounds: int | None, out: TextIO) -> int:
    summary = CorpusSummary()
    for case in iter_corpus(spec):
        summary.add(verify_case(case.graph, case.ports, case.name, max_rounds))
    for line in summary.lines():
        print(line, file=out)
    print(f"result {'pass' if summary.ok else 'FAIL'}", file=out)
    return EXIT_OK if summary.ok else EXIT_MISMATCH


def cmd_generate(spec: str, leader: int, seed: int, path: str | None, out: TextIO) -> int:
    text = format_edge_list(parse_generator_spec(spec, leader=leader, default_seed=seed))
    if path:
        Path(path).write_text(text)
    else:
        out.write(text)
    return EXIT_OK


# -- argument parsing ------------------------------------------------------------------


def _graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", help="edge-list file: header 'n m leader', then 'u v' lines")
    p.add_argument("--gen", help="generator spec, e.g. cycle:5, random:20:0.2:7, tree:30, claw")
    p.add_argument("--leader", type=int, help="leader vertex (overrides the file header)")
    p.add_argument("--ports", help="port file with 'u port v' lines")
    p.add_argument("--port-policy", choices=("adjacency_order", "random"), default="adjacency_order")
    p.add_argument("--seed", type=int, help="seed for generators and random ports (default $WAVECAST_SEED or 0)")
    p.add_argument("--max-rounds", type=int, help="round budget (default 64n + 64)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wavecast", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the protocol pipeline on one graph")
    _graph_args(run)
    run.add_argument("--task", action="append", help=f"one or more of {', '.join(TASKS)}, all (default all)")
    run.add_argument("--trace", help="write the delivery trace here")
    run.add_argument("--metrics", help="write per-channel metrics here")
    run.add_argument("--verify", action="store_true", help="compare every output with the oracles")
    run.add_argument("--format", choices=("table", "tsv"), default="table")

    ver = sub.add_parser("verify", help="compare the pipeline with the oracles")
    _graph_args(ver)
    ver.add_argument("--corpus", action="store_true", help="sweep the standard corpus")
    ver.add_argument("--quick", action="store_true", help="small corpus: n <= 5, 50 random graphs, 20 trees")

    gen = sub.add_parser("generate", help="write a generated graph as an edge list")
    gen.add_argument("spec")
    gen.add_argument("-o", "--output", help="output path (default stdout)")
    gen.add_argument("--leader", type=int, default=0)
    gen.add_argument("--seed", type=int)
    return parser


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        seed = args.seed if args.seed is not None else _default_seed()
        if getattr(args, "max_rounds", None) is not None and args.max_rounds <= 0:
            raise GraphError("--max-rounds must be positive")
        if args.command == "generate":
            return cmd_generate(args.spec, args.leader, seed, args.output, out)
        if args.command == "verify" and args.corpus:
            spec = CorpusSpec(seed=seed)
            if args.quick:
                spec = CorpusSpec(seed=seed, exhaustive_max_n=5, random_graphs=50, random_trees=20)
            return cmd_verify_corpus(spec, args.max_rounds, out)
        graph = _load_graph(args, seed)
        ports = _ports(graph, args.ports, args.port_policy, seed)
        if args.command == "verify":
            return cmd_verify_one(graph, ports, args.max_rounds, out)
        cfg = RunConfig(
            graph, args.ports, args.port_policy, seed, _parse_tasks(args.task), args.trace,
            args.metrics, args.verify, args.max_rounds, args.format,
        )
        return cmd_run(cfg, ports, out)
    except (GraphError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except RoundBudgetExceeded as exc:
        print(f"error: round budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ProtocolViolation as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
