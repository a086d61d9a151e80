"""Compiled vs pure-Python round loop on the full pipeline.

Each mode runs in its own interpreter because the JIT switch is read at
import time. Usage: python3 benchmarks/bench_jit.py [--sizes 16 32 64] [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
from wavecast import JIT_ENABLED, assign_ports, generate, run_pipeline

sizes, repeat = json.loads(sys.argv[1]), int(sys.argv[2])
warm = generate("cycle", n=5)
run_pipeline(warm, assign_ports(warm))  # compile or load the cache
rows = []
for n in sizes:
    g = generate("random_connected", n=n, p=min(1.0, 3.0 / n), seed=n)
    ports = assign_ports(g, "random", seed=n)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        res = run_pipeline(g, ports)
        best = min(best, time.perf_counter() - t0)
    rows.append({"n": n, "m": g.m, "rounds": res.metrics.rounds_total, "seconds": best,
                 "diameter": res.diameter, "girth": res.girth})
print(json.dumps({"jit": JIT_ENABLED, "rows": rows}))
"""


def run_mode(disable_jit, sizes, repeat):
    env = dict(os.environ)
    env["WAVECAST_DISABLE_JIT"] = "1" if disable_jit else "0"
    proc = subprocess.run(
        [sys.executable, "-c", WORKER, json.dumps(sizes), str(repeat)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[16, 32, 64])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    fast = run_mode(False, args.sizes, args.repeat)
    slow = run_mode(True, args.sizes, max(1, args.repeat // 3))
    if not fast["jit"]:
        print("numba not importable; both columns use the fallback")

    print(f"{'n':>5} {'m':>6} {'rounds':>7} {'numba s':>10} {'python s':>10} {'speedup':>8}")
    for a, b in zip(fast["rows"], slow["rows"]):
        # both paths must agree on what they computed
        assert (a["rounds"], a["diameter"], a["girth"]) == (b["rounds"], b["diameter"], b["girth"])
        print(f"{a['n']:>5} {a['m']:>6} {a['rounds']:>7} {a['seconds']:>10.4f} "
              f"{b['seconds']:>10.4f} {b['seconds'] / a['seconds']:>7.1f}x")


if __name__ == "__main__":
    main()
