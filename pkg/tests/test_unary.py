import numpy as np
import pytest

from wavecast import generate, oracle_apsp, run_bfs, run_dist_cal, unary_broadcast, unary_max_convergecast

from helpers import P3, STAR3, graph, ports


def _tree(g, pm):
    return run_bfs(g, pm)[0]


def test_star_levels():
    g = graph(STAR3)
    pm = ports(g)
    levels, _ = run_dist_cal(g, pm, _tree(g, pm))
    assert levels.tolist() == [0, 1, 1, 1]


def test_path_levels():
    g = generate("path", n=5)
    pm = ports(g)
    levels, _ = run_dist_cal(g, pm, _tree(g, pm))
    assert levels.tolist() == [0, 1, 2, 3, 4]


def test_levels_match_oracle():
    g = generate("random_connected", n=40, p=0.08, seed=11).with_leader(17)
    pm = ports(g, "random", 2)
    levels, _ = run_dist_cal(g, pm, _tree(g, pm))
    assert levels.tolist() == oracle_apsp(g)[0][17].tolist()


@pytest.mark.parametrize(
    "edges, values, want",
    [(P3, [0, 0, 0], 0), (P3, [0, 1, 2], 2), (P3, [5, 1, 2], 5), (STAR3, [0, 0, 9, 0], 9)],
)
def test_convergecast_max(edges, values, want):
    g = graph(edges)
    pm = ports(g)
    assert unary_max_convergecast(g, pm, _tree(g, pm), values).maximum == (want,)


def test_convergecast_c6_eccentricities():
    g = generate("cycle", n=6)
    pm = ports(g)
    ecc = oracle_apsp(g)[0].max(axis=1)
    assert unary_max_convergecast(g, pm, _tree(g, pm), ecc).maximum == (3,)


def test_convergecast_frames_and_staggered_start():
    g = generate("random_tree", n=20, seed=6)
    pm = ports(g, "random", 6)
    rng = np.random.default_rng(0)
    vals = rng.integers(0, 12, size=(20, 3))
    res = unary_max_convergecast(g, pm, _tree(g, pm), vals, ready=rng.integers(0, 30, size=20))
    assert res.maximum == tuple(int(x) for x in vals.max(axis=0))


def test_broadcast_zero():
    g = generate("random_tree", n=15, seed=1)
    pm = ports(g)
    assert not unary_broadcast(g, pm, _tree(g, pm), 0).values.any()


def test_broadcast_three_on_p4():
    g = generate("path", n=4)
    pm = ports(g)
    res = unary_broadcast(g, pm, _tree(g, pm), 3)
    assert res.values[:, 0].tolist() == [3, 3, 3, 3]
    depth = 3
    assert res.done_round.max() <= 3 + depth + 1


def test_round_trip():
    g = generate("random_connected", n=25, p=0.15, seed=8)
    pm = ports(g, "random", 8)
    tree = _tree(g, pm)
    vals = np.arange(25) % 7
    top = unary_max_convergecast(g, pm, tree, vals).maximum[0]
    assert (unary_broadcast(g, pm, tree, top).values[:, 0] == top).all()
