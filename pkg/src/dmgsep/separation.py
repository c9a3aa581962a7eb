"""μ-separation and the criteria equivalent to it.

The decision procedure is a reachability search over (vertex, arrival mark)
states; see :mod:`dmgsep.kernels`.  Witness extraction reruns the same search
in Python with predecessor links and then cuts the walk down to a route.
"""

from __future__ import annotations

import functools
from collections import deque
from typing import Iterable, NamedTuple

import numpy as np

from . import kernels
from .graph import (DIRECTED, Dmg, Edge, GraphError, Mark, Step, UndirectedGraph, Walk,
                    ancestors, traversals)

VertexSet = Iterable[int | str] | int | str | None


class SeparationQuery(NamedTuple):
    a: VertexSet
    b: VertexSet
    c: VertexSet = ()


def _mask(n: int, vs: Iterable[int]) -> np.ndarray:
    m = np.zeros(n, dtype=np.bool_)
    for v in vs:
        m[v] = True
    return m


def mu_reach(g: Dmg, a: Iterable[int], c: frozenset[int]) -> np.ndarray:
    """Boolean mask of β such that some α in ``a`` μ-connects to β given ``c``."""
    sources = [v for v in a if v not in c]
    if not sources:
        return np.zeros(g.n, dtype=np.bool_)
    d, b = g.dense()
    head, _ = kernels.walk_reach(d, b, _mask(g.n, sources), _mask(g.n, c),
                                 _mask(g.n, ancestors(g, c)))
    return head


def mu_separated(g: Dmg, a: VertexSet, b: VertexSet, c: VertexSet = ()) -> bool:
    """True iff ``b`` is μ-separated from ``a`` given ``c`` in ``g``."""
    a, b, c = g.vset(a), g.vset(b), g.vset(c)
    if not b:
        return True
    head = mu_reach(g, a, c)
    return not any(head[v] for v in b)


def mu_separated_sets_decomposes(g: Dmg, a: VertexSet, b: VertexSet,
                                 c: VertexSet = ()) -> bool:
    """Conjunction of the singleton queries ``<{α}, {β} | c>``."""
    a, b, c = g.vset(a), g.vset(b), g.vset(c)
    return all(mu_separated(g, {x}, {y}, c) for x in a for y in b)


# -- witnesses --------------------------------------------------------------


def _gate_ok(v: int, arrival: Mark, departure: Mark, c, anc_c) -> bool:
    if arrival == Mark.HEAD and departure == Mark.HEAD:
        return v in anc_c
    return v not in c


def _search_walk(g: Dmg, sources, targets, c, anc_c) -> Walk | None:
    """Breadth-first state search; returns the walk reaching a target with a head."""
    pred: dict[tuple[int, Mark], tuple[tuple[int, Mark] | int, Step]] = {}
    queue: deque[tuple[int, Mark]] = deque()

    def visit(state, origin, step):
        if state in pred:
            return None
        pred[state] = (origin, step)
        if state[1] == Mark.HEAD and state[0] in targets:
            return state
        queue.append(state)
        return None

    def unwind(state) -> Walk:
        steps = []
        cur = state
        while True:
            origin, step = pred[cur]
            steps.append(step)
            if isinstance(origin, int):
                return Walk(origin, tuple(reversed(steps)))
            cur = origin

    for s in sorted(sources):
        for e in g.incident(s):
            for st in traversals(e, s):
                hit = visit((st.next, st.arrival), s, st)
                if hit:
                    return unwind(hit)
    while queue:
        v, arrival = queue.popleft()
        for e in g.incident(v):
            for st in traversals(e, v):
                if not _gate_ok(v, arrival, st.departure, c, anc_c):
                    continue
                hit = visit((st.next, st.arrival), (v, arrival), st)
                if hit:
                    return unwind(hit)
    return None


def shorten_to_route(walk: Walk) -> Walk:
    """Excise cycles at repeated non-final vertices, then extra final visits.

    Each excision keeps a μ-connecting walk μ-connecting: a new collider was
    either a collider before or an ancestor of a later collider.
    """
    verts = walk.vertices
    steps = list(walk.steps)
    final = verts[-1]
    while True:
        first: dict[int, int] = {}
        cut = None
        for j, v in enumerate(verts):
            if v != final and v in first:
                cut = (first[v], j)
                break
            first.setdefault(v, j)
        if cut is None:
            break
        i, j = cut
        verts = verts[:i + 1] + verts[j + 1:]
        steps = steps[:i] + steps[j:]
    positions = [k for k, v in enumerate(verts) if v == final]
    if len(positions) > 2:
        i, j = positions[0], positions[-2]
        verts = verts[:i + 1] + verts[j + 1:]
        steps = steps[:i] + steps[j:]
    return Walk(verts[0], tuple(steps))


def strengthen_colliders(g: Dmg, walk: Walk, c: frozenset[int]) -> Walk:
    """Reroute every collider in An(C) \\ C through a directed path into C."""
    steps = list(walk.steps)
    out: list[Step] = []
    for k, st in enumerate(steps):
        out.append(st)
        if k + 1 == len(steps):
            break
        v = st.next
        if st.arrival == Mark.HEAD and steps[k + 1].departure == Mark.HEAD and v not in c:
            path = _directed_path_into(g, v, c)
            out.extend(Step(Edge(DIRECTED, x, y), Mark.TAIL, Mark.HEAD, y)
                       for x, y in zip(path, path[1:]))
            out.extend(Step(Edge(DIRECTED, x, y), Mark.HEAD, Mark.TAIL, x)
                       for x, y in reversed(list(zip(path, path[1:]))))
    return Walk(walk.start, tuple(out))


def _directed_path_into(g: Dmg, v: int, c: frozenset[int]) -> list[int]:
    prev = {v: None}
    queue = deque([v])
    while queue:
        x = queue.popleft()
        if x in c:
            path = [x]
            while prev[path[-1]] is not None:
                path.append(prev[path[-1]])
            return path[::-1]
        for y in sorted(g.children_of(x)):
            if y not in prev:
                prev[y] = x
                queue.append(y)
    raise GraphError(f"vertex {g.labels[v]} is not an ancestor of the conditioning set")


def find_mu_connecting_route(g: Dmg, a: VertexSet, b: VertexSet, c: VertexSet = (), *,
                             colliders_in_c: bool = False) -> Walk | None:
    """A μ-connecting route from ``a`` to ``b`` given ``c``, or None if separated.

    With ``colliders_in_c`` the route is rerouted so every collider lies in
    ``c``; the result is then a walk, not necessarily a route.
    """
    a, b, c = g.vset(a), g.vset(b), g.vset(c)
    sources = a - c
    if not sources or not b:
        return None
    anc_c = ancestors(g, c)
    walk = _search_walk(g, sources, b, c, anc_c)
    if walk is None:
        return None
    route = shorten_to_route(walk)
    if colliders_in_c:
        return strengthen_colliders(g, route, c)
    return route


def is_mu_connecting(g: Dmg, walk: Walk, c: VertexSet = ()) -> bool:
    """Check the definition directly on an explicit walk."""
    c = g.vset(c)
    if not walk.steps or walk.start in c or walk.steps[-1].arrival != Mark.HEAD:
        return False
    anc_c = ancestors(g, c)
    for v, collider in walk.colliders():
        if collider and v not in anc_c:
            return False
        if not collider and v in c:
            return False
    return True


# -- δ-separation --------------------------------------------------------


def _require_dg(g: Dmg) -> None:
    if g.bidirected:
        raise GraphError("operation defined for directed graphs only")


def _require_disjoint(*sets: frozenset[int]) -> None:
    for i, x in enumerate(sets):
        for y in sets[i + 1:]:
            if x & y:
                raise GraphError("vertex sets must be pairwise disjoint")


def bereaved_graph(g: Dmg, b: VertexSet) -> Dmg:
    """Drop every non-loop directed edge with its tail in ``b``."""
    _require_dg(g)
    b = g.vset(b)
    return Dmg(g.labels, [(u, v) for u, v in g.directed if u not in b or u == v], ())


def delta_separated(g: Dmg, a: VertexSet, b: VertexSet, c: VertexSet = ()) -> bool:
    _require_dg(g)
    a, b, c = g.vset(a), g.vset(b), g.vset(c)
    _require_disjoint(a, b, c)
    if not a or not b:
        raise GraphError("δ-separation needs non-empty source and target sets")
    return mu_separated(bereaved_graph(g, b), a, b, c)


# -- m-separation ----------------------------------------------------------


def m_separated(g: Dmg, a: VertexSet, b: VertexSet, c: VertexSet = ()) -> bool:
    """m-separation of ``a`` and ``b`` by ``c`` (paths only, so loops are ignored)."""
    a, b, c = g.vset(a), g.vset(b), g.vset(c)
    _require_disjoint(a, b, c)
    if not a or not b:
        return True
    head, tail = m_reach(g, a, c)
    return not any(head[v] or tail[v] for v in b)


def m_reach(g: Dmg, a: Iterable[int], c: frozenset[int]):
    d, bi = g.dense()
    d = d.copy()
    bi = bi.copy()
    np.fill_diagonal(d, False)
    np.fill_diagonal(bi, False)
    return kernels.walk_reach(d, bi, _mask(g.n, a), _mask(g.n, c),
                              _mask(g.n, ancestors(g, c)))


# -- history versions and augmentation --------------------------------------


class HistoryVersion(NamedTuple):
    graph: Dmg
    past_of: dict[int, int]


def history_version(g: Dmg, b: VertexSet) -> HistoryVersion:
    """Add a past copy β^p for each β in ``b`` receiving every edge with a head at β."""
    b = sorted(g.vset(b))
    labels = list(g.labels)
    taken = set(labels)
    d = set(g.directed)
    bi = set(g.bidirected)
    past_of = {}
    for beta in b:
        name = f"{g.labels[beta]}^p"
        while name in taken:
            name += "'"
        taken.add(name)
        labels.append(name)
        p = len(labels) - 1
        past_of[beta] = p
        for u in g.parents_of(beta):
            d.add((u, p))
        for u in g.siblings_of(beta):
            bi.add((u, p))
    return HistoryVersion(Dmg(labels, d, bi), past_of)


def augmented_graph(g: Dmg) -> UndirectedGraph:
    """Join distinct vertices that are collider-connected in ``g``.

    Collider connection is an edge ``u ~ v`` or ``u *-> w1 <-> ... <-> wk <-* v``.
    """
    n = g.n
    edges = set()
    into = [set() for _ in range(n)]  # into[w]: vertices with an edge having a head at w
    for u, v in g.directed:
        into[v].add(u)
        if u != v:
            edges.add((min(u, v), max(u, v)))
    for u, v in g.bidirected:
        into[u].add(v)
        into[v].add(u)
        if u != v:
            edges.add((u, v))
    comp = [-1] * n
    for s in range(n):
        if comp[s] >= 0:
            continue
        comp[s] = s
        stack = [s]
        while stack:
            x = stack.pop()
            for y in g.siblings_of(x):
                if comp[y] < 0:
                    comp[y] = s
                    stack.append(y)
    reach_into: dict[int, set[int]] = {}
    for w in range(n):
        reach_into.setdefault(comp[w], set()).update(into[w])
    for members in reach_into.values():
        ms = sorted(members)
        for i, u in enumerate(ms):
            for v in ms[i + 1:]:
                edges.add((u, v))
    return UndirectedGraph(g.labels, frozenset(edges))


def undirected_separated(ug: UndirectedGraph, a: Iterable[int], b: Iterable[int],
                         c: Iterable[int]) -> bool:
    c = set(c)
    b = set(b)
    nb = ug.neighbours()
    seen = set(v for v in a if v not in c)
    stack = list(seen)
    while stack:
        x = stack.pop()
        if x in b:
            return False
        for y in nb[x]:
            if y not in seen and y not in c:
                seen.add(y)
                stack.append(y)
    return True


@functools.lru_cache(maxsize=512)
def _history_cached(g: Dmg, b: frozenset[int]) -> HistoryVersion:
    return history_version(g, b)


def augmented_neighbour_masks(g: Dmg, keep: int) -> dict[int, int]:
    """Bitmask adjacency of the augmented graph of ``g`` induced on the mask ``keep``."""
    ch, pa, sib = (m.tolist() for m in g.masks())
    verts = [v for v in range(g.n) if keep >> v & 1]
    nbr = {u: (ch[u] | pa[u] | sib[u]) & keep & ~(1 << u) for u in verts}
    seen = 0
    for s in verts:
        if seen >> s & 1:
            continue
        comp = frontier = 1 << s
        while frontier:
            nxt = 0
            for v in verts:
                if frontier >> v & 1:
                    nxt |= sib[v] & keep
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        into = 0
        for w in verts:
            if comp >> w & 1:
                into |= (pa[w] | sib[w]) & keep
        for u in verts:
            if into >> u & 1:
                nbr[u] |= into & ~(1 << u)
    return nbr


def mu_separated_via_augmentation(g: Dmg, a: VertexSet, b: VertexSet,
                                  c: VertexSet = ()) -> bool:
    """Separation of ``a \\ c`` from the past copies of ``b`` by ``c`` in the
    augmented graph of the history version, restricted to the relevant ancestors."""
    a, b, c = g.vset(a), g.vset(b), g.vset(c)
    src = a - c
    if not src or not b:
        return True
    hv = _history_cached(g, frozenset(b))
    anc = hv.graph.ancestor_masks().tolist()
    keep = 0
    for v in src | c | set(hv.past_of.values()):
        keep |= anc[v]
    nbr = augmented_neighbour_masks(hv.graph, keep)
    cmask = sum(1 << v for v in c)
    target = sum(1 << hv.past_of[beta] for beta in b)
    seen = frontier = sum(1 << v for v in src)
    while frontier:
        if frontier & target:
            return False
        nxt = 0
        for v, m in nbr.items():
            if frontier >> v & 1:
                nxt |= m
        frontier = nxt & ~cmask & ~seen
        seen |= frontier
    return True


__all__ = [
    "SeparationQuery", "mu_separated", "mu_separated_sets_decomposes",
    "find_mu_connecting_route", "is_mu_connecting", "shorten_to_route",
    "strengthen_colliders", "bereaved_graph", "delta_separated", "m_separated",
    "HistoryVersion", "history_version", "augmented_graph", "undirected_separated",
    "mu_separated_via_augmentation", "mu_reach", "augmented_neighbour_masks",
]
