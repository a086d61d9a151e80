import pytest

from wavecast import generate, parse_edge_list, parse_generator_spec
from wavecast.graph import (
    DisconnectedGraph,
    DuplicateEdge,
    InputFormatError,
    InvalidParams,
    LeaderOutOfRange,
    SelfLoop,
    assign_ports,
    build_graph,
    channel_arrays,
    format_edge_list,
    is_connected,
    parse_port_file,
)

from helpers import P3, STAR3, TRIANGLE


def test_build_path_rooted_at_end():
    g = build_graph(P3, leader=0)
    assert (g.n, g.m, g.leader) == (3, 2, 0)
    assert g.neighbors(1) == (0, 2)


def test_build_triangle():
    g = build_graph(TRIANGLE)
    assert g.m == 3 and all(g.degree(u) == 2 for u in range(3))


@pytest.mark.parametrize(
    "edges, leader, err",
    [
        ([(0, 1), (2, 3)], 0, DisconnectedGraph),
        ([(0, 1), (1, 0)], 0, DuplicateEdge),
        ([(0, 1), (1, 1)], 0, SelfLoop),
        (P3, 3, LeaderOutOfRange),
        (P3, -1, LeaderOutOfRange),
    ],
)
def test_build_rejects(edges, leader, err):
    with pytest.raises(err):
        build_graph(edges, leader=leader)


def test_generate_cycle():
    g = generate("cycle", n=5, seed=0)
    assert g.n == 5 and g.m == 5 and all(g.degree(u) == 2 for u in range(5))


def test_generate_subdivided_claw():
    g = generate("subdivided_claw")
    degs = sorted(g.degree(u) for u in range(g.n))
    assert g.n == 7 and degs == [1, 1, 1, 2, 2, 2, 3]


def test_generate_random_connected_is_deterministic():
    a = generate("random_connected", n=20, p=0.2, seed=7)
    b = generate("random_connected", n=20, p=0.2, seed=7)
    assert a == b and is_connected(a.n, a.edges)


def test_generate_sparse_random_falls_back_to_spanning_tree():
    g = generate("random_connected", n=30, p=0.0, seed=1)
    assert g.m == 29 and is_connected(g.n, g.edges)


@pytest.mark.parametrize("kind, n", [("cycle", 2), ("star", 1), ("path", 0)])
def test_generate_invalid(kind, n):
    with pytest.raises(InvalidParams):
        generate(kind, n=n)


def test_generate_unknown_kind():
    with pytest.raises(InvalidParams):
        generate("hypercube", n=4)


def test_star_ports_adjacency_order():
    g = build_graph(STAR3)
    pm = assign_ports(g)
    assert [pm.neighbor(0, p) for p in (1, 2, 3)] == [1, 2, 3]


def test_random_ports_are_bijections_and_deterministic():
    g = generate("random_connected", n=15, p=0.4, seed=3)
    a = assign_ports(g, "random", 11)
    assert a == assign_ports(g, "random", 11)
    for u in range(g.n):
        assert sorted(a.port(u, v) for v in g.neighbors(u)) == list(range(1, g.degree(u) + 1))


def test_channel_arrays_reverse_slots():
    g = generate("complete", n=5)
    ch = channel_arrays(g, assign_ports(g, "random", 2))
    owner = ch.owner()
    for s in range(ch.n_slots):
        t = ch.rev[s]
        assert owner[t] == ch.nbr[s] and ch.nbr[t] == owner[s] and ch.rev[t] == s


def test_edge_list_roundtrip():
    text = "# a path\n3 2 1\n0 1\n\n1 2\n"
    g = parse_edge_list(text)
    assert g.leader == 1 and g.edges == ((0, 1), (1, 2))
    assert parse_edge_list(format_edge_list(g)) == g


@pytest.mark.parametrize("text", ["", "3 2\n0 1\n1 2\n", "3 2 0\n0 1\n", "3 1 0\n0 x\n", "3 2 0\n0 1 2\n1 2\n"])
def test_edge_list_malformed(text):
    with pytest.raises(InputFormatError):
        parse_edge_list(text)


def test_port_file_overrides_listed_vertices():
    g = build_graph(STAR3)
    pm = parse_port_file("0 1 3\n0 2 1\n0 3 2\n", g)
    assert pm.order[0] == (3, 1, 2) and pm.order[1] == (0,)


@pytest.mark.parametrize("text", ["0 1 3\n", "0 1 3\n0 1 2\n0 3 1\n", "0 1 3\n0 2 1\n0 3 9\n"])
def test_port_file_rejects_partial_or_wrong(text):
    with pytest.raises(InputFormatError):
        parse_port_file(text, build_graph(STAR3))


@pytest.mark.parametrize(
    "spec, n, m",
    [("path:4", 4, 3), ("cycle:6", 6, 6), ("complete:4", 4, 6), ("star:5", 5, 4), ("claw", 7, 6), ("tree:9:3", 9, 8)],
)
def test_generator_specs(spec, n, m):
    g = parse_generator_spec(spec)
    assert (g.n, g.m) == (n, m)


def test_generator_spec_random_uses_seed():
    assert parse_generator_spec("random:20:0.2:7") == generate("random_connected", n=20, p=0.2, seed=7)


@pytest.mark.parametrize("spec", ["cycle:2", "path", "random:5", "random:5:1.5", "claw:3", "blob:3", "path:x"])
def test_generator_spec_invalid(spec):
    with pytest.raises((InvalidParams, InputFormatError, ValueError)):
        parse_generator_spec(spec)
