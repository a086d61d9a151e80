import io
import subprocess
import sys

import pytest

from wavecast.cli import EXIT_BUDGET, EXIT_INPUT, EXIT_OK, main


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def test_cycle_girth():
    code, out = run("run", "--gen", "cycle:5", "--task", "girth")
    assert code == EXIT_OK and "girth 5\n" in out


def test_p2_file_diameter(tmp_path):
    p = tmp_path / "p2.txt"
    p.write_text("2 1 0\n0 1\n")
    code, out = run("run", "--graph", str(p), "--task", "diameter")
    assert code == EXIT_OK and out.startswith("diameter 1\n")


def test_verify_output_is_deterministic():
    a = run("run", "--gen", "cycle:5", "--task", "all", "--verify")
    b = run("run", "--gen", "cycle:5", "--task", "all", "--verify")
    assert a == b and a[0] == EXIT_OK and "FAIL" not in a[1]


def test_bowtie_verify(tmp_path):
    p = tmp_path / "bowtie.txt"
    p.write_text("5 6 0\n0 1\n1 2\n2 0\n2 3\n3 4\n4 2\n")
    code, out = run("run", "--graph", str(p), "--task", "diameter,girth,cut-edges,cut-vertices", "--verify")
    assert code == EXIT_OK
    assert "diameter 2\ngirth 3\ncut-edges 0\ncut-vertices 1\ncut-vertex 2\n" in out


def test_claw_verify():
    code, out = run("run", "--gen", "claw", "--task", "cut-edges", "--task", "girth", "--verify")
    assert code == EXIT_OK and "cut-edges 6\n" in out and "girth 0\n" in out
    code, out = run("verify", "--gen", "claw")
    assert code == EXIT_OK and out.rstrip().endswith("result pass")


def test_quick_corpus():
    code, out = run("verify", "--corpus", "--quick")
    assert code == EXIT_OK and "result pass" in out


def test_tsv_matrix():
    code, out = run("run", "--gen", "path:3", "--task", "apsp", "--format", "tsv")
    rows = [line.split("\t") for line in out.splitlines()[:4]]
    assert rows[0] == ["number", "vertex", "d1", "d2", "d3"]
    # path 0-1-2 from 0 numbers 0, 2, 1
    assert rows[1] == ["1", "0", "0", "2", "1"]
    assert rows[2] == ["2", "2", "2", "0", "1"]


def test_generate(tmp_path):
    code, out = run("generate", "path:4")
    assert code == EXIT_OK and out.splitlines() == ["4 3 0", "0 1", "1 2", "2 3"]
    a, b = tmp_path / "a", tmp_path / "b"
    run("generate", "random:20:0.2:7", "-o", str(a))
    run("generate", "random:20:0.2:7", "-o", str(b))
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize(
    "argv, code",
    [
        (("generate", "cycle:2"), EXIT_INPUT),
        (("run", "--gen", "path:3", "--leader", "5"), EXIT_INPUT),
        (("run", "--graph", "/nonexistent/g.txt"), EXIT_INPUT),
        (("run", "--gen", "path:3", "--task", "colour"), EXIT_INPUT),
        (("run", "--gen", "path:3", "--max-rounds", "5"), EXIT_BUDGET),
        (("run", "--gen", "path:3", "--max-rounds", "0"), EXIT_INPUT),
        (("run",), EXIT_INPUT),
    ],
)
def test_exit_codes(argv, code):
    assert run(*argv)[0] == code


def test_trace_and_metrics_files(tmp_path):
    t, m = tmp_path / "t.txt", tmp_path / "m.txt"
    code, out = run("run", "--gen", "cycle:4", "--trace", str(t), "--metrics", str(m))
    assert code == EXIT_OK
    assert t.read_text().splitlines()[0] == "1 0 1 > START"
    assert "alphabet_used" in m.read_text()
    bits = int(out.split("bit_rounds ")[1].split()[0])
    rounds = int(out.split("\nrounds ")[1].split()[0])
    assert bits <= 4 * rounds


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("WAVECAST_SEED", "3")
    a = run("generate", "tree:12")
    monkeypatch.setenv("WAVECAST_SEED", "4")
    assert a != run("generate", "tree:12")
    monkeypatch.setenv("WAVECAST_SEED", "x")
    assert run("generate", "tree:12")[0] == EXIT_INPUT


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "wavecast", "run", "--gen", "cycle:5", "--task", "girth"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and proc.stdout.startswith("girth 5\n")
