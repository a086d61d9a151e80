"""Small graph fixtures shared by the test modules."""

from wavecast import Graph, assign_ports, build_graph


def graph(edges, leader=0, n=None):
    return build_graph(edges, leader=leader, n=n)


def ports(g, policy="adjacency_order", seed=0):
    return assign_ports(g, policy, seed)


P2 = [(0, 1)]
P3 = [(0, 1), (1, 2)]
TRIANGLE = [(0, 1), (1, 2), (0, 2)]
C4 = [(0, 1), (1, 2), (2, 3), (3, 0)]
C4_CHORD = C4 + [(0, 2)]
BOWTIE = [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]
TRIANGLE_PENDANT = TRIANGLE + [(2, 3)]
STAR3 = [(0, 1), (0, 2), (0, 3)]


def single_vertex():
    return Graph(1, ())
