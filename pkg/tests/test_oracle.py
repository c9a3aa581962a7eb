import pytest
from hypothesis import given
from hypothesis import strategies as st

from dmgsep.equivalence import independence_model, maximal_dmg
from dmgsep.graph import Edge, make_dmg, remove_edge
from dmgsep.oracle import (GuardExceededError, count_routes, enumerate_routes, model_diff,
                           mu_separated_bruteforce, random_dg, random_dmg, selfcheck)

from conftest import dmgs


def routes(g, a, b):
    return sorted(w.format(g.labels) for w in enumerate_routes(g, a, b))


def test_single_edge_route():
    g = make_dmg(["alpha", "beta"], [("alpha", "beta")])
    assert routes(g, "alpha", "beta") == ["alpha -> beta"]


def test_route_may_revisit_target():
    g = make_dmg(["alpha", "beta", "gamma"], [("beta", "alpha"), ("gamma", "beta")])
    assert routes(g, "alpha", "beta") == ["alpha <- beta", "alpha <- beta <- gamma -> beta"]


def test_no_routes_without_edges():
    assert routes(make_dmg(["a", "b"]), "a", "b") == []


@given(dmgs(max_n=4), st.data())
def test_route_enumeration_consistency(g, data):
    a = data.draw(st.integers(0, g.n - 1))
    b = data.draw(st.integers(0, g.n - 1))
    found = list(enumerate_routes(g, a, b))
    assert len(found) == count_routes(g, a, b)
    assert len(set(found)) == len(found)
    for w in found:
        assert w.is_route() and w.start == a and w.end == b and len(w) >= 1


def test_guard():
    g = random_dmg(9, seed=1)
    with pytest.raises(GuardExceededError):
        list(enumerate_routes(g, 0, 1))
    with pytest.raises(GuardExceededError):
        mu_separated_bruteforce(g, [0], [1])


def test_model_diff(fx):
    n = fx("class_1")
    m = independence_model(n)
    assert model_diff(m, m) == []
    g, d, b = n.index("gamma"), n.index("delta"), n.index("beta")
    h = remove_edge(remove_edge(n, Edge.directed(g, b)), Edge.directed(d, b))
    diff = model_diff(m, independence_model(h))
    assert diff
    for _, _, _, in1, in2 in diff:
        assert in1 != in2
    other = fx("class_4")
    assert model_diff(independence_model(other), independence_model(maximal_dmg(other))) == []


def test_random_generators_are_seeded():
    assert random_dmg(5, seed=3) == random_dmg(5, seed=3)
    d = random_dg(6, 0.5, max_edges=4, seed=2)
    assert not d.bidirected and len(d.directed) <= 4


def test_selfcheck_passes():
    rep = selfcheck(seed=7, density=0.35, count=15, max_vertices=4)
    assert rep.ok, rep.failures
    assert rep.graphs == 15 and rep.queries > 0
