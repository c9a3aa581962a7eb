import pytest
from hypothesis import given
from hypothesis import strategies as st

from dmgsep.graph import Edge, GraphError, add_edge, make_dmg, satisfies_self_sibling_property
from dmgsep.oracle import collider_connected_bruteforce, m_separated_bruteforce
from dmgsep.separation import (augmented_graph, augmented_neighbour_masks, bereaved_graph,
                               delta_separated, find_mu_connecting_route, history_version,
                               is_mu_connecting, m_separated, mu_separated,
                               mu_separated_sets_decomposes, mu_separated_via_augmentation)

from conftest import dgs, dmgs

BACK_AND_UP = make_dmg(["alpha", "beta", "gamma"], [("beta", "alpha"), ("gamma", "beta")])
SELF_SEP = make_dmg(["alpha", "gamma"], [("gamma", "alpha")])


def subsets(n):
    for mask in range(1 << n):
        yield frozenset(v for v in range(n) if mask >> v & 1)


def test_connecting_walk_without_connecting_path():
    assert not mu_separated(BACK_AND_UP, "alpha", "beta")
    route = find_mu_connecting_route(BACK_AND_UP, "alpha", "beta")
    assert route.format(BACK_AND_UP.labels) == "alpha <- beta <- gamma -> beta"
    assert route.is_route() and is_mu_connecting(BACK_AND_UP, route)


def test_source_inside_conditioning_set_is_separated(fx):
    g = fx("gateway")
    assert mu_separated(g, ["A", "T"], ["H", "M"], ["A", "T", "I"])
    assert mu_separated(g, [], ["H"]) and mu_separated(g, ["A"], [])


def test_self_separation():
    assert mu_separated(SELF_SEP, "alpha", "alpha", "gamma")
    assert not mu_separated(SELF_SEP, "alpha", "alpha")


def test_single_edge_route():
    g = make_dmg(["alpha", "beta"], [("alpha", "beta")])
    assert find_mu_connecting_route(g, "alpha", "beta").format(g.labels) == "alpha -> beta"
    assert find_mu_connecting_route(g, "beta", "alpha") is None


def test_set_decomposition_examples(fx):
    g = fx("nonclosed_dg")
    assert not mu_separated_sets_decomposes(g, ["alpha", "epsilon"], ["beta"])
    assert mu_separated_sets_decomposes(g, [], ["beta"])


def test_gateway_local_independence_of_h(fx):
    g = fx("gateway")
    rest = ["T", "M", "H", "L", "I"]
    assert mu_separated(g, "A", "H", rest)
    assert mu_separated(g, "T", "H", ["A", "M", "H", "L", "I"])
    # without H in the conditioning set the self-loop at H opens A -> L <- H -> H
    route = find_mu_connecting_route(g, "A", "H", ["T", "M", "L", "I"])
    assert route.format(g.labels) == "A -> L <- H -> H"


def test_bereaved_graph():
    g = make_dmg(["alpha", "beta", "gamma"], [("alpha", "beta"), ("beta", "gamma"),
                                              ("beta", "beta")])
    h = bereaved_graph(g, "beta")
    assert h == make_dmg(g.labels, [("alpha", "beta"), ("beta", "beta")])
    assert bereaved_graph(g, []) == g
    loops = make_dmg(["a", "b"], [("a", "a"), ("b", "b")])
    assert bereaved_graph(loops, ["a", "b"]) == loops
    with pytest.raises(GraphError):
        bereaved_graph(make_dmg(["a", "b"], [], [("a", "b")]), [])


def test_delta_separation(fx):
    assert delta_separated(fx("gateway"), "A", "H", ["M", "L"])
    g = make_dmg(["alpha", "beta"], [("alpha", "beta")])
    assert not delta_separated(g, "alpha", "beta", [])
    with pytest.raises(GraphError):
        delta_separated(g, "alpha", "alpha", [])
    with pytest.raises(GraphError):
        delta_separated(g, [], "alpha", [])


def test_m_separation_canon():
    col = make_dmg(["alpha", "beta", "gamma"], [("alpha", "gamma"), ("beta", "gamma")])
    assert m_separated(col, "alpha", "beta", [])
    assert not m_separated(col, "alpha", "beta", ["gamma"])
    chain = make_dmg(["alpha", "beta", "gamma"], [("alpha", "gamma"), ("gamma", "beta")])
    assert m_separated(chain, "alpha", "beta", ["gamma"])
    assert not m_separated(chain, "alpha", "beta", [])
    with pytest.raises(GraphError):
        m_separated(chain, "alpha", "alpha", [])


def test_history_version():
    g = make_dmg(["alpha", "beta"], [("alpha", "beta")])
    hv = history_version(g, ["beta"])
    assert hv.graph.labels == ("alpha", "beta", "beta^p")
    assert hv.graph.directed == {(0, 1), (0, 2)} and hv.past_of == {1: 2}
    assert history_version(g, []).graph == g
    loop = make_dmg(["beta"], [("beta", "beta")])
    assert (0, 1) in history_version(loop, ["beta"]).graph.directed


def test_augmented_graph_canon():
    g = make_dmg(["alpha", "beta", "gamma"], [("alpha", "gamma"), ("beta", "gamma")])
    assert augmented_graph(g).edges == {(0, 2), (1, 2), (0, 1)}
    assert augmented_graph(make_dmg(["a", "b"])).edges == frozenset()


def test_augmentation_examples():
    assert mu_separated_via_augmentation(SELF_SEP, "alpha", "alpha", "gamma")
    g = make_dmg(["alpha", "beta"], [("alpha", "beta")])
    assert not mu_separated_via_augmentation(g, "alpha", "beta", [])


@given(dmgs(max_n=5), st.data())
def test_witness_is_valid_route(g, data):
    c = data.draw(st.sets(st.integers(0, g.n - 1)))
    a = data.draw(st.integers(0, g.n - 1))
    b = data.draw(st.integers(0, g.n - 1))
    route = find_mu_connecting_route(g, {a}, {b}, c)
    assert (route is None) == mu_separated(g, {a}, {b}, c)
    if route is not None:
        assert route.is_route() and len(route) <= g.n
        assert route.start == a and route.end == b
        assert is_mu_connecting(g, route, c)


@given(dmgs(max_n=5), st.data())
def test_colliders_can_be_pushed_into_c(g, data):
    c = data.draw(st.sets(st.integers(0, g.n - 1)))
    a = data.draw(st.integers(0, g.n - 1))
    b = data.draw(st.integers(0, g.n - 1))
    walk = find_mu_connecting_route(g, {a}, {b}, c, colliders_in_c=True)
    if walk is not None:
        assert is_mu_connecting(g, walk, c)
        assert all(v in c for v, col in walk.colliders() if col)


@given(dmgs(max_n=5), st.data())
def test_augmentation_agrees(g, data):
    c = data.draw(st.sets(st.integers(0, g.n - 1)))
    a = data.draw(st.sets(st.integers(0, g.n - 1)))
    b = data.draw(st.sets(st.integers(0, g.n - 1)))
    assert mu_separated_via_augmentation(g, a, b, c) == mu_separated(g, a, b, c)


@given(dmgs(max_n=5), st.data())
def test_set_queries_decompose(g, data):
    c = data.draw(st.sets(st.integers(0, g.n - 1)))
    a = data.draw(st.sets(st.integers(0, g.n - 1)))
    b = data.draw(st.sets(st.integers(0, g.n - 1)))
    assert mu_separated_sets_decomposes(g, a, b, c) == mu_separated(g, a, b, c)


@given(dmgs(max_n=5))
def test_augmented_graph_matches_collider_walk_search(g):
    ug = augmented_graph(g)
    masks = augmented_neighbour_masks(g, (1 << g.n) - 1)
    for v in range(g.n):
        cc = collider_connected_bruteforce(g, v, directed=False)
        for u in range(g.n):
            if u == v:
                continue
            joined = (min(u, v), max(u, v)) in ug.edges
            assert joined == (u in cc)
            assert joined == bool(masks[u] >> v & 1)


@given(dgs(max_n=5), st.data())
def test_delta_mu_bridge(g, data):
    a = data.draw(st.integers(0, g.n - 1))
    b = data.draw(st.integers(0, g.n - 1))
    c = data.draw(st.sets(st.integers(0, g.n - 1))) - {a, b}
    if a == b:
        return
    assert delta_separated(g, {a}, {b}, c) == mu_separated(g, {a}, {b}, c | {b})


@given(dgs(max_n=5, min_n=2))
def test_m_separation_matches_path_oracle(g):
    n = g.n
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            for c in subsets(n):
                if a in c or b in c:
                    continue
                assert m_separated(g, {a}, {b}, c) == m_separated_bruteforce(g, {a}, {b}, c)


@given(dmgs(max_n=5, min_n=2))
def test_m_separation_matches_path_oracle_mixed(g):
    n = g.n
    for a in range(n):
        for b in range(a + 1, n):
            for c in subsets(n):
                if a in c or b in c:
                    continue
                assert m_separated(g, {a}, {b}, c) == m_separated_bruteforce(g, {a}, {b}, c)


@given(dgs(max_n=5))
def test_dg_separability_iff_no_edge(g):
    n = g.n
    for a in range(n):
        for b in range(n):
            separable = any(mu_separated(g, {a}, {b}, c) for c in subsets(n) if a not in c)
            assert separable == ((a, b) not in g.directed)


@given(dmgs(max_n=5))
def test_self_separation_iff_no_loops(g):
    loops = {(u, u) for e in g.bidirected for u in e}
    g = type(g)(g.labels, g.directed, g.bidirected | loops)
    assert satisfies_self_sibling_property(g)
    for a in range(g.n):
        rest = set(range(g.n)) - {a}
        no_loops = (a, a) not in g.directed and (a, a) not in g.bidirected
        assert no_loops == mu_separated(g, {a}, {a}, rest)


def test_adding_an_edge_never_separates(fx):
    g = fx("walk_with_loop")
    h = add_edge(g, Edge.bidirected(0, 3))
    for a in range(g.n):
        for b in range(g.n):
            for c in subsets(g.n):
                if not mu_separated(g, {a}, {b}, c):
                    assert not mu_separated(h, {a}, {b}, c)
