"""Slow, definition-level reference implementations.

Everything here enumerates routes, paths or walks explicitly.  These
functions exist to cross-check the fast procedures and are guarded against
graphs large enough to make enumeration hopeless.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .equivalence import IndependenceModel, separation_table
from .graph import (BIDIRECTED, Dmg, GraphError, Mark, Step, Walk, ancestors, make_dmg,
                    traversals)
from .marginalize import latent_projection
from .separation import mu_reach, mu_separated, mu_separated_via_augmentation

ROUTE_GUARD = 8


class GuardExceededError(GraphError):
    pass


def _guard(g: Dmg, limit: int) -> None:
    if g.n > limit:
        raise GuardExceededError(f"brute-force enumeration limited to {limit} vertices, "
                                 f"graph has {g.n}")


# -- routes ----------------------------------------------------------------


class RouteIterator:
    """Depth-first enumeration of every route from ``source`` to ``target``.

    A route visits each vertex other than ``target`` at most once and
    ``target`` at most twice.  Directed loops contribute one step per
    orientation.
    """

    def __init__(self, g: Dmg, source: int | str, target: int | str, limit: int = ROUTE_GUARD):
        _guard(g, limit)
        self.graph = g
        self.source = g.index(source)
        self.target = g.index(target)

    def __iter__(self) -> Iterator[Walk]:
        g, t = self.graph, self.target
        counts = [0] * g.n
        counts[self.source] = 1
        steps: list[Step] = []

        def extend(v: int) -> Iterator[Walk]:
            for e in g.incident(v):
                for st in traversals(e, v):
                    w = st.next
                    cap = 2 if w == t else 1
                    if counts[w] >= cap:
                        continue
                    counts[w] += 1
                    steps.append(st)
                    if w == t:
                        yield Walk(self.source, tuple(steps))
                    # a second visit to the target must be the last vertex
                    if not (w == t and counts[w] == 2):
                        yield from extend(w)
                    steps.pop()
                    counts[w] -= 1

        yield from extend(self.source)


def enumerate_routes(g: Dmg, alpha: int | str, beta: int | str,
                     limit: int = ROUTE_GUARD) -> RouteIterator:
    return RouteIterator(g, alpha, beta, limit)


def count_routes(g: Dmg, alpha: int | str, beta: int | str) -> int:
    """Independent recursive count of routes, without building them."""
    a, b = g.index(alpha), g.index(beta)

    def rec(v: int, counts: tuple[int, ...]) -> int:
        total = 0
        for e in g.incident(v):
            for st in traversals(e, v):
                w = st.next
                if counts[w] >= (2 if w == b else 1):
                    continue
                nxt = counts[:w] + (counts[w] + 1,) + counts[w + 1:]
                if w == b:
                    total += 1
                    if nxt[w] == 2:
                        continue
                total += rec(w, nxt)
        return total

    start = tuple(1 if v == a else 0 for v in range(g.n))
    return rec(a, start)


def _connecting(walk: Walk, c: frozenset[int], anc_c: frozenset[int]) -> bool:
    if walk.start in c or walk.steps[-1].arrival != Mark.HEAD:
        return False
    for v, collider in walk.colliders():
        if collider and v not in anc_c:
            return False
        if not collider and v in c:
            return False
    return True


def mu_separated_bruteforce(g: Dmg, a, b, c=(), limit: int = ROUTE_GUARD) -> bool:
    """Scan every route from ``a \\ c`` to ``b`` for a μ-connecting one."""
    _guard(g, limit)
    a, b, c = g.vset(a), g.vset(b), g.vset(c)
    anc_c = ancestors(g, c)
    for alpha in a - c:
        for beta in b:
            for route in enumerate_routes(g, alpha, beta, limit):
                if _connecting(route, c, anc_c):
                    return False
    return True


def route_signatures(g: Dmg, alpha: int, limit: int = ROUTE_GUARD
                     ) -> set[tuple[int, int, int]]:
    """``(collider_mask, noncollider_mask, end)`` of every head-ending route from ``alpha``."""
    sigs = set()
    for beta in range(g.n):
        for route in enumerate_routes(g, alpha, beta, limit):
            if route.steps[-1].arrival != Mark.HEAD:
                continue
            col = non = 0
            for v, collider in route.colliders():
                if collider:
                    col |= 1 << v
                else:
                    non |= 1 << v
            sigs.add((col, non, beta))
    return sigs


def bruteforce_separation_table(g: Dmg, limit: int = ROUTE_GUARD) -> np.ndarray:
    """Route-enumeration version of :func:`separation_table`."""
    _guard(g, limit)
    n = g.n
    cm = np.arange(1 << n, dtype=np.int64)
    anc = g.ancestor_masks()
    anc_c = np.zeros_like(cm)
    for v in range(n):
        anc_c[(cm >> v) & 1 == 1] |= anc[v]
    full = np.int64((1 << n) - 1)
    out = np.zeros((n, 1 << n), dtype=np.int64)
    for alpha in range(n):
        reach = np.zeros_like(cm)
        for col, non, beta in route_signatures(g, alpha, limit):
            ok = ((col & ~anc_c) == 0) & ((non & cm) == 0)
            reach[ok] |= np.int64(1) << beta
        reach[(cm >> alpha) & 1 == 1] = 0
        out[alpha] = ~reach & full
    return out


# -- latent projection by definition --------------------------------------


def _collider_free_walks(g: Dmg, x: int, latent: frozenset[int]) -> Iterator[Walk]:
    """Nontrivial collider-free walks from ``x`` whose interior is latent and repeat-free."""
    steps: list[Step] = []
    used: set[int] = set()

    def extend(v: int, arrival: Mark | None) -> Iterator[Walk]:
        for e in g.incident(v):
            for st in traversals(e, v):
                if arrival == Mark.HEAD and st.departure == Mark.HEAD:
                    continue
                steps.append(st)
                w = st.next
                if w not in latent:
                    yield Walk(x, tuple(steps))
                elif w not in used:
                    used.add(w)
                    yield from extend(w, st.arrival)
                    used.discard(w)
                steps.pop()

    yield from extend(x, None)


def latent_projection_bruteforce(g: Dmg, o, limit: int = ROUTE_GUARD) -> Dmg:
    """Edges on ``o`` read off endpoint marks of collider-free walks through latents."""
    _guard(g, limit)
    keep = sorted(g.vset(o))
    latent = frozenset(range(g.n)) - set(keep)
    pos = {v: i for i, v in enumerate(keep)}
    d, b = set(), set()
    for x in keep:
        for walk in _collider_free_walks(g, x, latent):
            y = walk.end
            first, last = walk.steps[0].departure, walk.steps[-1].arrival
            if first == Mark.HEAD and last == Mark.HEAD:
                b.add((min(pos[x], pos[y]), max(pos[x], pos[y])))
            elif first == Mark.TAIL and last == Mark.HEAD:
                d.add((pos[x], pos[y]))
            elif first == Mark.HEAD and last == Mark.TAIL:
                d.add((pos[y], pos[x]))
            else:  # pragma: no cover - collider-free walks never have two tails
                raise AssertionError("collider-free walk with tails at both ends")
    return Dmg([g.labels[v] for v in keep], d, b)


# -- model comparison ------------------------------------------------------


def model_diff(m1: IndependenceModel, m2: IndependenceModel
               ) -> list[tuple[str, str, tuple[str, ...], bool, bool]]:
    """Triples ``(a, b, C, in m1, in m2)`` on which the two models disagree."""
    if m1.n != m2.n:
        raise GraphError(f"models over {m1.n} and {m2.n} vertices cannot be compared")
    out = []
    diff = m1.sep ^ m2.sep
    for a, c in zip(*np.nonzero(diff)):
        row = int(diff[a, c])
        cset = tuple(m1.labels[v] for v in range(m1.n) if c >> v & 1)
        for b in range(m1.n):
            if row >> b & 1:
                out.append((m1.labels[a], m1.labels[b], cset,
                            bool(int(m1.sep[a, c]) >> b & 1), bool(int(m2.sep[a, c]) >> b & 1)))
    return out


# -- m-separation and collider connection by enumeration -------------------


def _simple_paths(g: Dmg, a: int, b: int) -> Iterator[list[Step]]:
    steps: list[Step] = []
    used = {a}

    def extend(v: int) -> Iterator[list[Step]]:
        for e in g.incident(v):
            if e.is_loop:
                continue
            for st in traversals(e, v):
                w = st.next
                if w in used:
                    continue
                steps.append(st)
                if w == b:
                    yield list(steps)
                else:
                    used.add(w)
                    yield from extend(w)
                    used.discard(w)
                steps.pop()

    yield from extend(a)


def m_separated_bruteforce(g: Dmg, a, b, c=(), limit: int = ROUTE_GUARD) -> bool:
    """m-separation by scanning every path between ``a`` and ``b``."""
    _guard(g, limit)
    a, b, c = g.vset(a), g.vset(b), g.vset(c)
    anc_c = ancestors(g, c)
    for x in a:
        for y in b:
            for path in _simple_paths(g, x, y):
                ok = True
                for prev, nxt in zip(path, path[1:]):
                    v = prev.next
                    collider = prev.arrival == Mark.HEAD and nxt.departure == Mark.HEAD
                    if (collider and v not in anc_c) or (not collider and v in c):
                        ok = False
                        break
                if ok:
                    return False
    return True


def collider_connected_bruteforce(g: Dmg, beta, *, directed: bool = True,
                                  limit: int = ROUTE_GUARD) -> frozenset[int]:
    """Vertices with a route to ``beta`` whose interior is all colliders.

    With ``directed`` the route must also end in a head at ``beta``.
    """
    _guard(g, limit)
    b = g.index(beta)
    out = set()
    for gam in range(g.n):
        for route in enumerate_routes(g, gam, b, limit):
            if directed and route.steps[-1].arrival != Mark.HEAD:
                continue
            if all(col for _, col in route.colliders()):
                out.add(gam)
                break
    return frozenset(out)


def inducing_paths_bruteforce(g: Dmg, alpha, beta, limit: int = ROUTE_GUARD) -> list[Walk]:
    """Every inducing path (or cycle) from ``alpha`` to ``beta``, by route enumeration."""
    _guard(g, limit)
    a, b = g.index(alpha), g.index(beta)
    scope = ancestors(g, {a, b})
    out = []
    for route in enumerate_routes(g, a, b, limit):
        verts = route.vertices
        if a != b and verts.count(b) > 1:
            continue
        if route.steps[-1].arrival != Mark.HEAD or not set(verts) <= scope:
            continue
        if all(col for _, col in route.colliders()):
            out.append(route)
    return out


def inducing_path_kinds(g: Dmg, route: Walk, beta) -> set[str]:
    """Kinds of an inducing path: ``any`` plus ``bidirected``, ``unidirected``, ``directed``."""
    kinds = {"any"}
    first = route.steps[0].edge
    if first.kind == BIDIRECTED:
        kinds.add("bidirected")
    else:
        kinds.add("unidirected")
        inner = route.vertices[1:-1]
        if len(route) == 1 or set(inner) <= ancestors(g, {g.index(beta)}):
            kinds.add("directed")
    return kinds


# -- graphical forms of the potential-edge conditions -----------------------


def _connects(g: Dmg, src: int, dst: int, c: frozenset[int]) -> bool:
    return bool(mu_reach(g, [src], c)[dst])


def _all_sets(n: int) -> Iterator[frozenset[int]]:
    for mask in range(1 << n):
        yield frozenset(v for v in range(n) if mask >> v & 1)


def _inseparable(g: Dmg, a: int, b: int) -> bool:
    """No C without ``a`` separates ``b`` from ``a``."""
    return all(not mu_separated(g, {a}, {b}, c) for c in _all_sets(g.n) if a not in c)


def potential_sibling_graphical(g: Dmg, alpha, beta) -> bool:
    a, b = g.index(alpha), g.index(beta)
    if not (_inseparable(g, a, b) and _inseparable(g, b, a)):
        return False
    for c in _all_sets(g.n):
        for gam in range(g.n):
            if b in c and _connects(g, gam, b, c) and not _connects(g, gam, a, c):
                return False
            if a in c and _connects(g, gam, a, c) and not _connects(g, gam, b, c):
                return False
    return True


def potential_parent_graphical(g: Dmg, alpha, beta) -> bool:
    a, b = g.index(alpha), g.index(beta)
    if not _inseparable(g, a, b):
        return False
    for c in _all_sets(g.n):
        if a in c:
            continue
        for gam in range(g.n):
            if _connects(g, gam, a, c) and not _connects(g, gam, b, c):
                return False
            if b in c and _connects(g, gam, b, c):
                for delta in range(g.n):
                    if _connects(g, a, delta, c) and not _connects(g, gam, delta, c):
                        return False
            if _connects(g, b, gam, c | {a}) and not _connects(g, b, gam, c):
                return False
    return True


# -- random graphs ---------------------------------------------------------


def _labels(n: int) -> list[str]:
    return [f"v{i}" for i in range(n)]


def random_dmg(n: int, p_directed: float = 0.3, p_bidirected: float = 0.2,
               p_loop: float | None = None, *, seed: int | random.Random | None = None) -> Dmg:
    """Each possible edge is present independently; ``p_loop`` defaults to the edge's own density."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    d, b = [], []
    for u in range(n):
        for v in range(n):
            p = p_directed if u != v or p_loop is None else p_loop
            if rng.random() < p:
                d.append((u, v))
    for u in range(n):
        for v in range(u, n):
            p = p_bidirected if u != v or p_loop is None else p_loop
            if rng.random() < p:
                b.append((u, v))
    return make_dmg(_labels(n), d, b)


def random_dg(n: int, p_directed: float = 0.3, p_loop: float | None = None, *,
              max_edges: int | None = None, seed: int | random.Random | None = None) -> Dmg:
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    g = random_dmg(n, p_directed, 0.0, p_loop, seed=rng)
    if max_edges is not None and len(g.directed) > max_edges:
        keep = rng.sample(sorted(g.directed), max_edges)
        g = Dmg(g.labels, keep, ())
    return g


# -- self check ------------------------------------------------------------


@dataclass
class SelfCheckReport:
    graphs: int = 0
    queries: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def selfcheck(seed: int = 0, density: float = 0.3, count: int = 20,
              max_vertices: int = 5) -> SelfCheckReport:
    """Cross-check the fast procedures against the enumeration oracles on random DMGs."""
    rng = random.Random(seed)
    report = SelfCheckReport()
    for _ in range(count):
        n = rng.randint(1, max_vertices)
        g = random_dmg(n, density, density / 2, seed=rng)
        report.graphs += 1
        fast = separation_table(g)
        slow = bruteforce_separation_table(g)
        report.queries += fast.size * n
        if not np.array_equal(fast, slow):
            report.failures.append(f"walk search vs routes: {g.describe()}")
        for mask in range(1 << n):
            c = frozenset(v for v in range(n) if mask >> v & 1)
            for a in range(n):
                for b in range(n):
                    aug = mu_separated_via_augmentation(g, {a}, {b}, c)
                    if aug != bool(int(fast[a, mask]) >> b & 1):
                        report.failures.append(
                            f"augmentation disagrees on <{g.labels[a]},{g.labels[b]}|"
                            f"{','.join(g.names(c))}>: {g.describe()}")
        o = frozenset(v for v in range(n) if rng.random() < 0.6)
        if latent_projection(g, o) != latent_projection_bruteforce(g, o):
            report.failures.append(f"projection onto {g.names(o)}: {g.describe()}")
    return report


__all__ = [
    "ROUTE_GUARD", "GuardExceededError", "RouteIterator", "SelfCheckReport",
    "bruteforce_separation_table", "collider_connected_bruteforce", "count_routes",
    "enumerate_routes", "inducing_path_kinds", "inducing_paths_bruteforce",
    "latent_projection_bruteforce", "m_separated_bruteforce",
    "model_diff", "mu_separated_bruteforce", "potential_parent_graphical",
    "potential_sibling_graphical", "random_dg", "random_dmg", "route_signatures", "selfcheck",
]
