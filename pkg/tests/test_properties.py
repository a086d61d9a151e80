from hypothesis import given, strategies as st

from wavecast import assign_ports, generate, run_pipeline
from wavecast.verify import verify_case


@st.composite
def cases(draw, max_n=24):
    n = draw(st.integers(1, max_n))
    kind = draw(st.sampled_from(["random_connected", "random_tree", "path", "cycle", "star", "complete"]))
    if (kind == "cycle" and n < 3) or (kind == "star" and n < 2):
        kind = "path"
    seed = draw(st.integers(0, 2**20))
    params = {"p": draw(st.floats(0.0, 1.0))} if kind == "random_connected" else {}
    g = generate(kind, n=n, seed=seed, **params).with_leader(draw(st.integers(0, n - 1)))
    return g, draw(st.integers(0, 2**20))


@given(cases())
def test_pipeline_matches_oracles(case):
    g, seed = case
    rep = verify_case(g, assign_ports(g, "random", seed))
    assert rep.passed, "\n".join(rep.lines())


@given(cases(max_n=16), st.integers(0, 2**20))
def test_outputs_do_not_depend_on_ports(case, other):
    g, seed = case
    a = run_pipeline(g, assign_ports(g, "random", seed))
    b = run_pipeline(g, assign_ports(g, "random", other))
    assert (a.distances == b.distances).all()
    assert (a.diameter, a.girth, a.biconnected) == (b.diameter, b.girth, b.biconnected)
    assert a.bridges == b.bridges and a.articulations == b.articulations
    assert (a.levels == b.levels).all()
