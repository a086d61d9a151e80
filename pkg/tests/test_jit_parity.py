"""The compiled kernels and the pure-Python fallback must agree bit for bit."""

import json
import os
import subprocess
import sys

WORKER = r"""
import json
from wavecast import JIT_ENABLED, assign_ports, generate, run_pipeline
out = {"jit": JIT_ENABLED, "runs": []}
for kind, n, seed in [("random_connected", 10, 1), ("random_tree", 12, 2), ("cycle", 7, 0), ("complete", 5, 3)]:
    g = generate(kind, n=n, p=0.3, seed=seed) if kind == "random_connected" else generate(kind, n=n, seed=seed)
    res = run_pipeline(g, assign_ports(g, "random", seed), trace=True)
    out["runs"].append([res.trace.digest(), res.distances.tolist(), res.girth, sorted(res.bridges)])
print(json.dumps(out))
"""


def _run(disable):
    env = dict(os.environ, WAVECAST_DISABLE_JIT="1" if disable else "0")
    proc = subprocess.run([sys.executable, "-c", WORKER], env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def test_fallback_matches_compiled():
    slow, fast = _run(True), _run(False)
    assert slow["jit"] is False
    assert slow["runs"] == fast["runs"]
