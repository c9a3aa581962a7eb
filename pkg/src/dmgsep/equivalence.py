"""Inducing paths, separability, Markov equivalence and maximal DMGs.

Independence models are held at singleton resolution as a bitmask table:
``sep[a, C]`` is the set of ``b`` that are separated from ``a`` given the
conditioning set with bit pattern ``C``.  Set-level statements follow by
conjunction over the singletons.
"""

from __future__ import annotations

import enum
import itertools
import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .graph import (DIRECTED, CapExceededError, Dmg, Edge, GraphError, ancestors,
                    relabel_to, remove_edge, with_edges)

DEFAULT_CAP = 12
DEFAULT_EDGE_CAP = 16


def default_cap() -> int:
    """Vertex cap for model tables; ``DMGSEP_CAP`` overrides the built-in 12."""
    raw = os.environ.get("DMGSEP_CAP")
    if not raw:
        return DEFAULT_CAP
    try:
        return int(raw)
    except ValueError:
        raise GraphError(f"DMGSEP_CAP must be an integer, got {raw!r}") from None


class NotMaximalError(GraphError):
    pass


# -- inducing paths ----------------------------------------------------------


class InducingPathKind(enum.Enum):
    ANY = "any"
    BIDIRECTED = "bidirected"
    UNIDIRECTED = "unidirected"
    DIRECTED = "directed"

    def implies(self, other: "InducingPathKind") -> bool:
        """Whether every path of this kind is also of kind ``other``."""
        chain = {
            InducingPathKind.DIRECTED: {InducingPathKind.DIRECTED, InducingPathKind.UNIDIRECTED,
                                        InducingPathKind.ANY},
            InducingPathKind.UNIDIRECTED: {InducingPathKind.UNIDIRECTED, InducingPathKind.ANY},
            InducingPathKind.BIDIRECTED: {InducingPathKind.BIDIRECTED, InducingPathKind.ANY},
            InducingPathKind.ANY: {InducingPathKind.ANY},
        }
        return other in chain[self]


def _bidirected_closure(g: Dmg, start: Iterable[int], allowed: frozenset[int]) -> set[int]:
    seen = {v for v in start if v in allowed}
    stack = list(seen)
    while stack:
        v = stack.pop()
        for w in g.siblings_of(v):
            if w in allowed and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def inducing_path_exists(g: Dmg, alpha: int | str, beta: int | str,
                         kind: InducingPathKind | str = InducingPathKind.ANY, *,
                         min_length: int = 1) -> bool:
    """Is there a path (or cycle, when ``alpha == beta``) with no noncolliders,
    a head at ``beta`` and every vertex in An({alpha, beta})?

    ``min_length=2`` ignores the single-edge case.
    """
    kind = InducingPathKind(kind)
    a, b = g.index(alpha), g.index(beta)
    if kind is InducingPathKind.BIDIRECTED:
        first = set(g.siblings_of(a))
    elif kind is InducingPathKind.ANY:
        first = set(g.siblings_of(a)) | set(g.children_of(a))
    else:
        first = set(g.children_of(a))
    if b in first and min_length <= 1:
        return True
    scope = ancestors(g, {a, b})
    if kind is InducingPathKind.DIRECTED:
        scope = ancestors(g, {b})
    allowed = frozenset(scope - {a, b})
    reached = _bidirected_closure(g, first, allowed)
    return any(b in g.siblings_of(v) for v in reached)


def collider_connected_to(g: Dmg, beta: int | str) -> frozenset[int]:
    """Vertices joined to ``beta`` by a nontrivial all-collider walk ending in a head."""
    b = g.index(beta)
    # vertices with a nontrivial bidirected walk to b
    inner = _bidirected_closure(g, g.siblings_of(b), frozenset(range(g.n)))
    out = set(g.parents_of(b)) | set(g.siblings_of(b))
    for w in inner:
        out |= g.parents_of(w)
        out |= g.siblings_of(w)
    return frozenset(out)


def d_set(g: Dmg, alpha: int | str, beta: int | str) -> frozenset[int]:
    """Ancestors of {alpha, beta} directedly collider-connected to ``beta``, minus ``alpha``."""
    a, b = g.index(alpha), g.index(beta)
    return frozenset((ancestors(g, {a, b}) & collider_connected_to(g, b)) - {a})


def separable(g: Dmg, alpha: int | str, beta: int | str) -> frozenset[int] | None:
    """A set separating ``beta`` from ``alpha``, or None when no set can."""
    if inducing_path_exists(g, alpha, beta, InducingPathKind.ANY):
        return None
    return d_set(g, alpha, beta)


# -- independence models -----------------------------------------------------


def _subset_positions(k: int) -> np.ndarray:
    return np.arange(1 << k, dtype=np.int64)


def _compress(masks: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    """Re-encode bitmasks over ``keep`` (in order) as dense bit positions."""
    out = np.zeros_like(masks)
    for i, v in enumerate(keep):
        out |= ((masks >> v) & 1) << i
    return out


@dataclass(frozen=True, eq=False)
class IndependenceModel:
    labels: tuple[str, ...]
    sep: np.ndarray  # (n, 2**n) int64

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def __eq__(self, other):
        if not isinstance(other, IndependenceModel):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.sep, other.sep)

    def __hash__(self):
        return hash((self.labels, self.sep.tobytes()))

    def _index(self, v: int | str) -> int:
        if isinstance(v, str):
            try:
                return self.labels.index(v)
            except ValueError:
                raise GraphError(f"unknown vertex label {v!r}") from None
        return int(v)

    def cmask(self, c: Iterable[int | str]) -> int:
        m = 0
        for v in c:
            m |= 1 << self._index(v)
        return m

    def separated(self, alpha: int | str, beta: int | str, c: Iterable[int | str] = ()) -> bool:
        """Is ``beta`` separated from ``alpha`` given ``c``?"""
        a, b = self._index(alpha), self._index(beta)
        return bool((int(self.sep[a, self.cmask(c)]) >> b) & 1)

    def contains(self, a: Iterable[int | str], b: Iterable[int | str],
                 c: Iterable[int | str] = ()) -> bool:
        cm = self.cmask(c)
        bm = self.cmask(b)
        return all((int(self.sep[self._index(x), cm]) & bm) == bm for x in a)

    def restrict(self, o: Iterable[int | str]) -> "IndependenceModel":
        """The marginal model over ``o`` (kept in this model's vertex order)."""
        keep = sorted({self._index(v) for v in o})
        k = len(keep)
        sub = _subset_positions(k)
        embed = np.zeros_like(sub)
        for i, v in enumerate(keep):
            embed |= ((sub >> i) & 1) << v
        table = _compress(self.sep[np.array(keep, dtype=np.int64)][:, embed], keep)
        return IndependenceModel(tuple(self.labels[v] for v in keep), table)

    def separable_matrix(self) -> np.ndarray:
        """``S[a, b]``: some C without ``a`` separates ``b`` from ``a``."""
        cm = _subset_positions(self.n)
        out = np.zeros((self.n, self.n), dtype=np.bool_)
        for a in range(self.n):
            acc = np.bitwise_or.reduce(self.sep[a, (cm >> a) & 1 == 0])
            for b in range(self.n):
                out[a, b] = (int(acc) >> b) & 1
        return out

    def inseparable(self, beta: int | str) -> frozenset[int]:
        """All ``a`` from which ``beta`` cannot be separated."""
        s = self.separable_matrix()
        b = self._index(beta)
        return frozenset(a for a in range(self.n) if not s[a, b])

    def conditioned_targets(self) -> np.ndarray:
        """The table cut down to triples with the target inside C and the source outside."""
        cm = _subset_positions(self.n)
        out = self.sep & cm[None, :]
        for a in range(self.n):
            out[a, (cm >> a) & 1 == 1] = 0
        return out

    def triples(self) -> Iterator[tuple[int, int, int]]:
        """Every ``(a, b, cmask)`` in the model."""
        for a in range(self.n):
            for c in range(1 << self.n):
                row = int(self.sep[a, c])
                for b in range(self.n):
                    if row >> b & 1:
                        yield a, b, c


def _check_cap(n: int, cap: int | None) -> int:
    cap = default_cap() if cap is None else cap
    if n > cap:
        raise CapExceededError("vertex set", n, cap)
    return cap


def separation_table(g: Dmg, cmasks: np.ndarray | None = None) -> np.ndarray:
    """``sep[a, k]`` bitmask of vertices separated from ``a`` given ``cmasks[k]``."""
    if cmasks is None:
        cmasks = _subset_positions(g.n)
    ch, pa, sib = g.masks()
    reach = kernels.reach_table(ch, pa, sib, g.ancestor_masks(), cmasks)
    return ~reach & np.int64((1 << g.n) - 1)


def independence_model(g: Dmg, cap: int | None = None) -> IndependenceModel:
    _check_cap(g.n, cap)
    return IndependenceModel(g.labels, separation_table(g))


def _aligned(g1: Dmg, g2: Dmg) -> Dmg:
    if g1.labels == g2.labels:
        return g2
    if set(g1.labels) != set(g2.labels):
        raise GraphError("graphs have different vertex sets")
    return relabel_to(g2, g1.labels)


def markov_equivalent(g1: Dmg, g2: Dmg, cap: int | None = None) -> bool:
    g2 = _aligned(g1, g2)
    return independence_model(g1, cap) == independence_model(g2, cap)


# -- potential parents and siblings -----------------------------------------


def _bit(x, i: int):
    return (x >> i) & 1


def potential_sibling(model: IndependenceModel, alpha: int | str, beta: int | str) -> bool:
    a, b = model._index(alpha), model._index(beta)
    s = model.separable_matrix()
    if s[a, b] or s[b, a]:
        return False
    n, sep = model.n, model.sep
    for c in range(1 << n):
        for gam in range(n):
            row = int(sep[gam, c])
            if _bit(c, b) and _bit(row, a) and not _bit(row, b):
                return False
            if _bit(c, a) and _bit(row, b) and not _bit(row, a):
                return False
    return True


def potential_parent(model: IndependenceModel, alpha: int | str, beta: int | str) -> bool:
    a, b = model._index(alpha), model._index(beta)
    if model.separable_matrix()[a, b]:
        return False
    n, sep = model.n, model.sep
    for c in range(1 << n):
        if _bit(c, a):
            continue
        for gam in range(n):
            row = int(sep[gam, c])
            if _bit(row, b) and not _bit(row, a):
                return False
            if _bit(c, b) and not _bit(row, b):
                for delta in range(n):
                    if _bit(row, delta) and not _bit(int(sep[a, c]), delta):
                        return False
        if int(sep[b, c]) & ~int(sep[b, c | (1 << a)]):
            return False
    return True


def potential_matrices(model: IndependenceModel) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised ``(parent[a, b], sibling[a, b])`` over all ordered pairs."""
    n, sep, full = model.n, model.sep, np.int64(model.full)
    cm = _subset_positions(n)
    s = model.separable_matrix()
    inc = [(cm >> v) & 1 == 1 for v in range(n)]

    # bad[x]: vertices y with some (gamma, C), x in C, y in sep but x not in sep
    bad = np.zeros(n, dtype=np.int64)
    for x in range(n):
        rows = sep[:, inc[x]]
        bad[x] = np.bitwise_or.reduce(rows[((rows >> x) & 1) == 0], initial=0)
    sib = np.zeros((n, n), dtype=np.bool_)
    for a in range(n):
        for b in range(n):
            sib[a, b] = (not s[a, b] and not s[b, a]
                         and not _bit(int(bad[b]), a) and not _bit(int(bad[a]), b))

    par = np.zeros((n, n), dtype=np.bool_)
    for b in range(n):
        # u[C]: union of sep[gamma, C] over gamma with b not in sep[gamma, C]
        blocked = ((sep >> b) & 1) == 0
        u = np.bitwise_or.reduce(np.where(blocked, sep, 0), axis=0)
        for a in range(n):
            if s[a, b]:
                continue
            out_a = ~inc[a]
            rows = sep[:, out_a]
            p2 = not (np.bitwise_or.reduce(rows[((rows >> a) & 1) == 0], initial=0) >> b) & 1
            if not p2:
                continue
            p3_cs = out_a & inc[b]
            p3 = not np.any(u[p3_cs] & ~sep[a, p3_cs] & full)
            if not p3:
                continue
            cs = cm[out_a]
            p4 = not np.any(sep[b, cs] & ~sep[b, cs | (np.int64(1) << a)])
            par[a, b] = p4
    return par, sib


def _maximal_from_model(model: IndependenceModel) -> Dmg:
    par, sib = potential_matrices(model)
    n = model.n
    d = [(a, b) for a in range(n) for b in range(n) if par[a, b]]
    bi = [(a, b) for a in range(n) for b in range(a, n) if sib[a, b]]
    return Dmg(model.labels, d, bi)


def maximal_dmg(g: Dmg, cap: int | None = None, *, validate: bool = False) -> Dmg:
    """The greatest element of the Markov equivalence class of ``g``.

    With ``validate`` every edge not already in ``g`` is checked to leave the
    model of ``g`` unchanged when added on its own.
    """
    model = independence_model(g, cap)
    n = _maximal_from_model(model)
    if validate:
        present = g.edge_set()
        for e in n.edges():
            if e in present:
                continue
            plus = with_edges(g, list(present) + [e])
            if independence_model(plus, cap) != model:
                raise AssertionError(f"adding {e} changes the independence model")
    return n


def is_maximal(g: Dmg, cap: int | None = None) -> bool:
    return maximal_dmg(g, cap) == g


# -- DMEG and class enumeration ---------------------------------------------


@dataclass(frozen=True)
class Dmeg:
    maximal: Dmg
    dashed: frozenset[Edge]

    @property
    def solid(self) -> frozenset[Edge]:
        return frozenset(self.maximal.edge_set() - self.dashed)

    def status(self, e: Edge) -> str:
        if not self.maximal.has_edge(e):
            raise GraphError(f"edge {e} not in the graph")
        return "dashed" if e in self.dashed else "solid"


def _require_maximal(n: Dmg, cap: int | None) -> None:
    if not is_maximal(n, cap):
        raise NotMaximalError("input graph is not maximal; run maximal_dmg first")


def dmeg(n: Dmg, cap: int | None = None) -> Dmeg:
    """Mark the edges of a maximal DMG that some equivalent DMG omits."""
    _require_maximal(n, cap)
    dashed = set()
    for e in n.edges():
        if e.is_loop:
            continue
        minus = remove_edge(n, e)
        if e.kind == DIRECTED:
            if inducing_path_exists(minus, e.u, e.v):
                dashed.add(e)
        elif inducing_path_exists(minus, e.u, e.v) and inducing_path_exists(minus, e.v, e.u):
            dashed.add(e)
    return Dmeg(n, frozenset(dashed))


def equivalence_class(n: Dmg, cap: int | None = None,
                      edge_cap: int = DEFAULT_EDGE_CAP) -> set[Dmg]:
    """Every subgraph of maximal ``n`` (same loops) with the same independence model."""
    _require_maximal(n, cap)
    loops = [e for e in n.edges() if e.is_loop]
    free = [e for e in n.edges() if not e.is_loop]
    if len(free) > edge_cap:
        raise CapExceededError("non-loop edge set", len(free), edge_cap)
    target = independence_model(n, cap).sep
    out = set()
    for keep in itertools.product((False, True), repeat=len(free)):
        h = with_edges(n, loops + [e for e, k in zip(free, keep) if k])
        if np.array_equal(separation_table(h), target):
            out.add(h)
    return out


def least_element(members: Iterable[Dmg]) -> Dmg | None:
    """The intersection of ``members`` if it is itself a member, else None."""
    members = list(members)
    if not members:
        return None
    common = set(members[0].edge_set())
    for h in members[1:]:
        common &= h.edge_set()
    inter = with_edges(members[0], common)
    return inter if inter in set(members) else None


__all__ = [
    "DEFAULT_CAP", "DEFAULT_EDGE_CAP", "Dmeg", "IndependenceModel",
    "InducingPathKind", "NotMaximalError", "collider_connected_to", "d_set", "default_cap",
    "dmeg", "equivalence_class", "independence_model", "inducing_path_exists", "is_maximal",
    "least_element", "markov_equivalent", "maximal_dmg", "potential_matrices",
    "potential_parent", "potential_sibling", "separable", "separation_table",
]
