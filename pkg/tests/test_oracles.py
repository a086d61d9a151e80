import pytest

from wavecast import check_cube_path, generate, oracle_apsp, oracle_cuts, oracle_girth, reference_trav
from wavecast.corpus import connected_graphs
from wavecast.graph import Graph
from wavecast.oracles import girth_by_bfs, oracle_report

from helpers import BOWTIE, C4, graph


def test_apsp():
    dist, diam = oracle_apsp(generate("path", n=4))
    assert diam == 3 and dist[0].tolist() == [0, 1, 2, 3]
    dist, diam = oracle_apsp(generate("complete", n=5))
    assert diam == 1 and (dist + (dist == 0) * 1).min() == 1
    assert oracle_apsp(generate("cycle", n=6))[1] == 3


def test_girth():
    assert oracle_girth(generate("random_tree", n=20, seed=1)) == 0
    assert oracle_girth(generate("cycle", n=5)) == 5
    assert oracle_girth(generate("complete", n=4)) == 3


def test_cuts_tree():
    g = generate("random_tree", n=15, seed=3)
    bridges, arts, bic = oracle_cuts(g)
    assert bridges == {tuple(sorted(e)) for e in g.edges}
    assert arts == {v for v in range(g.n) if g.degree(v) > 1}
    assert not bic


def test_cuts_c4_and_bowtie():
    assert oracle_cuts(graph(C4)) == (set(), set(), True)
    assert oracle_cuts(graph(BOWTIE)) == (set(), {2}, False)


def test_report_is_cached_and_readonly():
    g = generate("cycle", n=8)
    rep = oracle_report(g)
    assert oracle_report(g) is rep
    with pytest.raises(ValueError):
        rep.distances[0, 0] = 5


def test_reference_trav_p3():
    ref = reference_trav(0, {0: [1], 1: [2], 2: []})
    assert ref.visits == (0, 1, 2, 2, 1, 0)
    assert ref.numbers == {0: 1, 2: 2, 1: 3}
    assert ref.nu_first == {0: 0, 1: 1, 2: 2} and ref.nu_second == {2: 3, 1: 4, 0: 5}


def test_reference_trav_star():
    ref = reference_trav(0, {0: [1, 2, 3]})
    assert ref.numbers == {0: 1, 1: 2, 2: 3, 3: 4}


def test_cube_path():
    g = generate("path", n=10)
    ok = check_cube_path(g, list(range(1, 11)))
    assert ok.passed and ok.max_consecutive == 1 and ok.closure_distance == 9
    swapped = list(range(1, 11))
    swapped[0], swapped[9] = swapped[9], swapped[0]
    assert not check_cube_path(g, swapped).passed
    with pytest.raises(ValueError):
        check_cube_path(g, [1] * 10)


@pytest.mark.parametrize("n", range(1, 7))
def test_girth_cross_check(n):
    for edges in connected_graphs(n):
        g = Graph(n, edges)
        girth, per_root = girth_by_bfs(g)
        assert girth == oracle_girth(g)


def test_connected_graph_counts():
    assert [sum(1 for _ in connected_graphs(n)) for n in range(1, 6)] == [1, 1, 4, 38, 728]
