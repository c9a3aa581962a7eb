import itertools
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dmgsep.equivalence import (InducingPathKind, NotMaximalError, d_set, dmeg,
                                equivalence_class, independence_model, inducing_path_exists,
                                is_maximal, least_element, markov_equivalent, maximal_dmg,
                                potential_matrices, potential_parent, potential_sibling,
                                separable)
from dmgsep.graph import (CapExceededError, Dmg, Edge, GraphError, add_edge, is_supergraph,
                          make_dmg, parents, remove_edge)
from dmgsep.marginalize import latent_projection
from dmgsep.oracle import (collider_connected_bruteforce, inducing_path_kinds,
                           inducing_paths_bruteforce, potential_parent_graphical,
                           potential_sibling_graphical)
from dmgsep.separation import mu_separated

from conftest import dgs, dmgs

K = InducingPathKind
SELF_SEP = make_dmg(["alpha", "gamma"], [("gamma", "alpha")])
EDGE = make_dmg(["alpha", "beta"], [("alpha", "beta")])
EMPTY2 = make_dmg(["alpha", "beta"])


def complete_dg(n):
    return Dmg([f"v{i}" for i in range(n)], itertools.product(range(n), repeat=2), ())


def complete_dmg(n):
    return Dmg([f"v{i}" for i in range(n)], itertools.product(range(n), repeat=2),
               [(u, v) for u in range(n) for v in range(u, n)])


def edge_names(g, edges):
    return {(g.labels[e.u], g.labels[e.v], e.kind) for e in edges}


# -- inducing paths and separability ----------------------------------------


def test_inducing_path_kinds_on_example(fx):
    g = fx("inducing_paths")
    assert inducing_path_exists(g, "delta", "beta", K.DIRECTED)
    assert not inducing_path_exists(g, "alpha", "gamma", K.DIRECTED)
    assert inducing_path_exists(g, "alpha", "gamma", K.UNIDIRECTED)


def test_adding_sibling_creates_inducing_cycle():
    assert not inducing_path_exists(SELF_SEP, "alpha", "alpha")
    h = add_edge(SELF_SEP, Edge.bidirected(0, 1))
    assert inducing_path_exists(h, "alpha", "alpha")
    assert separable(h, "alpha", "alpha") is None


def test_kind_implications():
    assert K.DIRECTED.implies(K.UNIDIRECTED) and K.UNIDIRECTED.implies(K.ANY)
    assert K.BIDIRECTED.implies(K.ANY)
    assert not K.BIDIRECTED.implies(K.UNIDIRECTED)
    assert not K.UNIDIRECTED.implies(K.BIDIRECTED)
    assert not K.ANY.implies(K.DIRECTED)


def test_d_set_examples():
    assert d_set(SELF_SEP, "alpha", "alpha") == {1}
    assert d_set(make_dmg(["a", "b", "c"]), "a", "b") == frozenset()


def test_separable_examples(fx):
    g = fx("inseparable_nonadjacent")
    b, d = g.index("beta"), g.index("delta")
    assert separable(g, b, d) is None
    assert not g.has_edge(Edge.directed(b, d)) and not g.has_edge(Edge.bidirected(b, d))
    assert not g.has_edge(Edge.directed(d, b))
    assert separable(SELF_SEP, "alpha", "alpha") == {1}
    assert separable(EDGE, "alpha", "beta") is None


@given(dmgs(max_n=5), st.data())
def test_inducing_path_search_matches_enumeration(g, data):
    a = data.draw(st.integers(0, g.n - 1))
    b = data.draw(st.integers(0, g.n - 1))
    found = set()
    for route in inducing_paths_bruteforce(g, a, b):
        found |= inducing_path_kinds(g, route, b)
    for kind in K:
        assert inducing_path_exists(g, a, b, kind) == (kind.value in found), kind


@given(dmgs(max_n=5), st.data())
def test_kind_existence_implications(g, data):
    a = data.draw(st.integers(0, g.n - 1))
    b = data.draw(st.integers(0, g.n - 1))
    has = {k: inducing_path_exists(g, a, b, k) for k in K}
    assert not has[K.DIRECTED] or has[K.UNIDIRECTED]
    assert not has[K.UNIDIRECTED] or has[K.ANY]
    assert not has[K.BIDIRECTED] or has[K.ANY]
    assert has[K.ANY] == (has[K.UNIDIRECTED] or has[K.BIDIRECTED])


@given(dmgs(max_n=5), st.data())
def test_d_set_matches_collider_oracle(g, data):
    a = data.draw(st.integers(0, g.n - 1))
    b = data.draw(st.integers(0, g.n - 1))
    from dmgsep.graph import ancestors
    expected = (ancestors(g, {a, b}) & collider_connected_bruteforce(g, b)) - {a}
    assert d_set(g, a, b) == expected
    if (a, b) not in g.directed:
        assert parents(g, b) - {a} <= d_set(g, a, b) | {a}


@given(dgs(max_n=5), st.data())
def test_d_set_in_dg_is_parent_set(g, data):
    a = data.draw(st.integers(0, g.n - 1))
    b = data.draw(st.integers(0, g.n - 1))
    if (a, b) not in g.directed:
        assert d_set(g, a, b) == parents(g, b)


@given(dmgs(max_n=5))
def test_inseparable_iff_inducing_path(g):
    for a in range(g.n):
        for b in range(g.n):
            sep = separable(g, a, b)
            brute = any(mu_separated(g, {a}, {b}, c)
                        for c in itertools.chain.from_iterable(
                            itertools.combinations(set(range(g.n)) - {a}, k)
                            for k in range(g.n)))
            assert (sep is not None) == brute
            if sep is not None:
                assert a not in sep and mu_separated(g, {a}, {b}, sep)


@given(dmgs(max_n=5), st.data())
def test_edge_along_inducing_path_changes_nothing(g, data):
    a = data.draw(st.integers(0, g.n - 1))
    b = data.draw(st.integers(0, g.n - 1))
    if inducing_path_exists(g, a, b, K.BIDIRECTED) and not g.has_edge(Edge.bidirected(a, b)):
        assert markov_equivalent(g, add_edge(g, Edge.bidirected(a, b)))
    if inducing_path_exists(g, a, b, K.DIRECTED) and not g.has_edge(Edge.directed(a, b)):
        assert markov_equivalent(g, add_edge(g, Edge.directed(a, b)))


# -- independence models ---------------------------------------------------


def test_single_edge_model():
    m = independence_model(EDGE)
    assert not any(m.separated("alpha", "beta", c) for c in ([], ["beta"]))
    assert m.separated("beta", "alpha", [])
    assert m.separated("alpha", "beta", ["alpha"])


def test_edgeless_model_separates_everything():
    m = independence_model(make_dmg(["a", "b", "c"]))
    assert (m.sep == m.full).all()


def test_model_contains_source_in_conditioning(fx):
    m = independence_model(fx("gateway"))
    cm = np.arange(1 << m.n)
    for a in range(m.n):
        assert (m.sep[a, (cm >> a) & 1 == 1] == m.full).all()


def test_restriction_equals_projection_model(fx):
    g = fx("nonclosed_dg")
    keep = ["alpha", "beta", "gamma", "delta"]
    assert independence_model(g).restrict(keep) == independence_model(latent_projection(g, keep))


def test_model_cap(monkeypatch, fx):
    with pytest.raises(CapExceededError) as err:
        independence_model(fx("gateway"), cap=5)
    assert err.value.required == 6
    monkeypatch.setenv("DMGSEP_CAP", "4")
    with pytest.raises(CapExceededError):
        independence_model(fx("gateway"))
    monkeypatch.setenv("DMGSEP_CAP", "many")
    with pytest.raises(GraphError):
        independence_model(fx("gateway"))


def test_markov_equivalence_examples(fx):
    for n in (1, 2, 3):
        assert markov_equivalent(complete_dg(n), complete_dmg(n))
    assert markov_equivalent(fx("class_1"), fx("class_6"))
    assert not markov_equivalent(fx("class_1"), fx("inseparable_nonadjacent"))
    with pytest.raises(GraphError):
        markov_equivalent(EDGE, SELF_SEP)


def test_markov_equivalence_ignores_vertex_order():
    g = make_dmg(["a", "b"], [("a", "b")])
    h = make_dmg(["b", "a"], [("a", "b")])
    assert markov_equivalent(g, h)


@given(dgs(max_n=4), dgs(max_n=4))
def test_distinct_dgs_are_not_equivalent(g1, g2):
    if g1.labels == g2.labels:
        assert markov_equivalent(g1, g2) == (g1 == g2)


@given(st.integers(1, 3), st.integers(0, 2 ** 20))
def test_full_loop_restriction(n, seed):
    rng = random.Random(seed)
    loops_d = [(v, v) for v in range(n)]
    loops_b = [(v, v) for v in range(n)]
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    half = [(u, v) for u, v in pairs if u < v]
    def draw():
        return Dmg([f"v{i}" for i in range(n)],
                   loops_d + [p for p in pairs if rng.random() < 0.4],
                   loops_b + [p for p in half if rng.random() < 0.3])
    g1, g2 = draw(), draw()
    m1, m2 = independence_model(g1), independence_model(g2)
    same_restricted = np.array_equal(m1.conditioned_targets(), m2.conditioned_targets())
    assert same_restricted == (m1 == m2)


# -- potential parents and siblings ----------------------------------------


def test_potential_sibling_examples(fx):
    m1 = independence_model(fx("class_1"))
    assert potential_sibling(m1, "alpha", "beta")
    assert not potential_sibling(independence_model(EMPTY2), "alpha", "beta")
    assert potential_sibling(independence_model(fx("class_6")), "alpha", "beta")


def test_potential_parent_examples(fx):
    assert potential_parent(independence_model(fx("class_6")), "alpha", "beta")
    assert potential_parent(independence_model(EDGE), "alpha", "beta")
    assert not potential_parent(independence_model(EMPTY2), "alpha", "beta")


@given(dmgs(max_n=4))
def test_matrix_form_matches_pairwise_definitions(g):
    m = independence_model(g)
    par, sib = potential_matrices(m)
    for a in range(g.n):
        for b in range(g.n):
            assert par[a, b] == potential_parent(m, a, b)
            assert sib[a, b] == potential_sibling(m, a, b)


@given(dmgs(max_n=3))
def test_abstract_and_graphical_conditions_agree(g):
    m = independence_model(g)
    par, sib = potential_matrices(m)
    for a in range(g.n):
        for b in range(g.n):
            assert par[a, b] == potential_parent_graphical(g, a, b)
            assert sib[a, b] == potential_sibling_graphical(g, a, b)


@given(dmgs(max_n=5))
def test_actual_edges_are_potential_edges(g):
    par, sib = potential_matrices(independence_model(g))
    for u, v in g.directed:
        assert par[u, v]
    for u, v in g.bidirected:
        assert sib[u, v] and sib[v, u]


# -- maximal DMGs ----------------------------------------------------------


def test_maximal_of_class_members(fx):
    n = fx("class_1")
    for k in range(1, 7):
        assert maximal_dmg(fx(f"class_{k}")) == n


def test_maximal_of_complete_dg():
    assert maximal_dmg(complete_dg(2)) == complete_dmg(2)


def test_is_maximal_examples(fx):
    assert is_maximal(fx("inseparable_nonadjacent"))
    assert not is_maximal(fx("class_6"))
    assert is_maximal(complete_dmg(3))


def test_maximal_validation_mode(fx):
    g = fx("class_5")
    assert maximal_dmg(g, validate=True) == fx("class_1")


@given(dmgs(max_n=4))
def test_maximal_laws(g):
    n = maximal_dmg(g, validate=True)
    assert markov_equivalent(g, n)
    assert is_supergraph(n, g)
    assert maximal_dmg(n) == n
    for v in range(g.n):
        assert ((v, v) in n.directed) == ((v, v) in n.bidirected)


@given(dmgs(max_n=4), st.integers(0, 2 ** 20))
def test_monotone_chain_to_maximal(g, seed):
    n = maximal_dmg(g)
    missing = sorted(n.edge_set() - g.edge_set())
    random.Random(seed).shuffle(missing)
    cur = g
    for e in missing:
        cur = add_edge(cur, e)
        assert markov_equivalent(g, cur)
    assert cur == n


def test_maximal_is_greatest_on_two_vertices():
    labels = ["a", "b"]
    d_all = list(itertools.product(range(2), repeat=2))
    b_all = [(0, 0), (0, 1), (1, 1)]
    classes = {}
    for dk in itertools.product((0, 1), repeat=4):
        for bk in itertools.product((0, 1), repeat=3):
            g = Dmg(labels, [e for e, k in zip(d_all, dk) if k], [e for e, k in zip(b_all, bk) if k])
            classes.setdefault(independence_model(g), []).append(g)
    for members in classes.values():
        n = maximal_dmg(members[0])
        assert n in members
        assert all(is_supergraph(n, h) for h in members)


@given(dmgs(max_n=4))
def test_directed_inducing_path_survives_edge_removal(g):
    n = maximal_dmg(g)
    for a, b in n.directed:
        if a == b:
            continue
        if inducing_path_exists(n, a, b, K.UNIDIRECTED, min_length=2):
            assert inducing_path_exists(remove_edge(n, Edge.directed(a, b)), a, b, K.DIRECTED)


# -- DMEG and equivalence classes ------------------------------------------


def test_dmeg_of_class(fx):
    n = fx("class_1")
    m = dmeg(n)
    assert edge_names(n, m.dashed) == {("alpha", "beta", "directed"),
                                       ("gamma", "beta", "directed"),
                                       ("delta", "beta", "directed")}
    solid = {e for e in m.solid if not e.is_loop}
    assert edge_names(n, solid) == {("alpha", "beta", "bidirected"),
                                    ("gamma", "delta", "directed"),
                                    ("beta", "delta", "bidirected")}
    assert m.status(Edge.directed(0, 1)) == "dashed"


def test_dmeg_trivial_and_errors(fx):
    assert not [e for e in dmeg(complete_dmg(1)).dashed if not e.is_loop]
    with pytest.raises(NotMaximalError):
        dmeg(fx("class_6"))


def test_gateway_dmegs(fx):
    from dmgsep.fixtures import load_dmeg_fixture
    g = fx("gateway")
    for keep, name in (("ATMH", "gateway_dmeg_keep_ATMH"), ("ATMHI", "gateway_dmeg_keep_ATMHI")):
        m = dmeg(maximal_dmg(latent_projection(g, list(keep))))
        assert m == load_dmeg_fixture(name)


def test_class_enumeration(fx):
    n = fx("class_1")
    members = equivalence_class(n)
    assert members == {fx(f"class_{k}") for k in range(1, 7)}
    assert least_element(members) is None
    assert len(equivalence_class(complete_dmg(1))) == 1
    with pytest.raises(CapExceededError):
        equivalence_class(n, edge_cap=3)
    with pytest.raises(NotMaximalError):
        equivalence_class(fx("class_2"))


def test_class_without_both_edges_into_beta(fx):
    n = fx("class_1")
    g, d, b = n.index("gamma"), n.index("delta"), n.index("beta")
    stripped = remove_edge(remove_edge(n, Edge.directed(g, b)), Edge.directed(d, b))
    assert not markov_equivalent(n, stripped)
    for h in equivalence_class(n):
        assert h.has_edge(Edge.directed(g, b)) or h.has_edge(Edge.directed(d, b))


@given(dmgs(max_n=3))
def test_dmeg_marks_match_class(g):
    n = maximal_dmg(g)
    free = [e for e in n.edges() if not e.is_loop]
    if len(free) > 10:
        return
    members = equivalence_class(n)
    m = dmeg(n)
    for e in free:
        in_all = all(h.has_edge(e) for h in members)
        assert (e not in m.dashed) == in_all, e
