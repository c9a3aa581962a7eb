"""Directed mixed graphs: representation, edge algebra, walks and ancestry.

Vertices are dense integer indices; labels live in a side table.  Directed
edges are ordered pairs ``(u, v)`` meaning ``u -> v``; bidirected edges are
unordered pairs stored as ``(min, max)``.  Loops of both kinds are allowed.
"""

from __future__ import annotations

import enum
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np


class GraphError(ValueError):
    pass


class UnknownVertexError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class MissingEdgeError(GraphError):
    pass


class CapExceededError(GraphError):
    def __init__(self, what: str, size: int, cap: int):
        self.required = size
        super().__init__(f"{what} has size {size}, above the cap {cap}; "
                         f"rerun with --cap {size} or higher")


class Mark(enum.IntEnum):
    TAIL = 0
    HEAD = 1


DIRECTED = "directed"
BIDIRECTED = "bidirected"


class Edge(NamedTuple):
    kind: str
    u: int
    v: int

    @classmethod
    def directed(cls, u: int, v: int) -> "Edge":
        return cls(DIRECTED, u, v)

    @classmethod
    def bidirected(cls, u: int, v: int) -> "Edge":
        return cls(BIDIRECTED, min(u, v), max(u, v))

    @property
    def is_loop(self) -> bool:
        return self.u == self.v

    @property
    def is_directed(self) -> bool:
        return self.kind == DIRECTED

    def other(self, w: int) -> int:
        if w == self.u:
            return self.v
        if w == self.v:
            return self.u
        raise GraphError(f"edge {self} is not incident with {w}")

    def mark_at(self, w: int) -> Mark:
        """Mark at endpoint ``w``; undefined for directed loops."""
        if self.kind == BIDIRECTED:
            return Mark.HEAD
        if self.is_loop:
            raise GraphError("a directed loop has both marks at its vertex")
        return Mark.HEAD if w == self.v else Mark.TAIL


class Step(NamedTuple):
    """One traversal of ``edge``: marks at the vertex left and the vertex reached."""

    edge: Edge
    departure: Mark
    arrival: Mark
    next: int


def traversals(edge: Edge, w: int) -> list[Step]:
    """All legal ways to traverse ``edge`` starting from ``w``."""
    if edge.kind == BIDIRECTED:
        return [Step(edge, Mark.HEAD, Mark.HEAD, edge.other(w))]
    if edge.is_loop:
        return [Step(edge, Mark.TAIL, Mark.HEAD, w), Step(edge, Mark.HEAD, Mark.TAIL, w)]
    if w == edge.u:
        return [Step(edge, Mark.TAIL, Mark.HEAD, edge.v)]
    return [Step(edge, Mark.HEAD, Mark.TAIL, edge.u)]


class Walk(NamedTuple):
    start: int
    steps: tuple[Step, ...]

    @property
    def vertices(self) -> list[int]:
        return [self.start] + [s.next for s in self.steps]

    @property
    def end(self) -> int:
        return self.steps[-1].next if self.steps else self.start

    def __len__(self) -> int:  # type: ignore[override]
        return len(self.steps)

    def colliders(self) -> list[tuple[int, bool]]:
        """``(vertex, is_collider)`` for every non-endpoint position."""
        out = []
        for prev, nxt in zip(self.steps, self.steps[1:]):
            out.append((prev.next, prev.arrival == Mark.HEAD and nxt.departure == Mark.HEAD))
        return out

    def is_route(self) -> bool:
        verts = self.vertices
        final = verts[-1]
        seen = set()
        for v in verts[:-1]:
            if v != final and v in seen:
                return False
            seen.add(v)
        return verts.count(final) <= 2

    def format(self, labels: Sequence[str]) -> str:
        parts = [labels[self.start]]
        for s in self.steps:
            if s.edge.kind == BIDIRECTED:
                arrow = "<->"
            elif s.departure == Mark.TAIL:
                arrow = "->"
            else:
                arrow = "<-"
            parts.append(arrow)
            parts.append(labels[s.next])
        return " ".join(parts)


# A route is a walk that passes ``Walk.is_route``; no separate runtime type.
Route = Walk


def is_valid_walk(g: "Dmg", walk: Walk) -> bool:
    cur = walk.start
    for s in walk.steps:
        if s.edge not in g.edge_set():
            return False
        if s not in traversals(s.edge, cur):
            return False
        cur = s.next
    return True


class Dmg:
    """Immutable directed mixed graph.

    Build instances with :func:`make_dmg`; the constructor trusts its input.
    """

    __slots__ = ("labels", "directed", "bidirected", "_hash", "_cache")

    def __init__(self, labels: Sequence[str], directed: Iterable[tuple[int, int]] = (),
                 bidirected: Iterable[tuple[int, int]] = ()):
        object.__setattr__(self, "labels", tuple(labels))
        object.__setattr__(self, "directed", frozenset(directed))
        object.__setattr__(self, "bidirected",
                           frozenset((min(u, v), max(u, v)) for u, v in bidirected))
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_cache", {})

    def __setattr__(self, name, value):
        raise AttributeError("Dmg is immutable")

    def __eq__(self, other):
        if not isinstance(other, Dmg):
            return NotImplemented
        return (self.labels == other.labels and self.directed == other.directed
                and self.bidirected == other.bidirected)

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash",
                               hash((self.labels, self.directed, self.bidirected)))
        return self._hash

    def __repr__(self):
        return f"Dmg({self.describe()})"

    def __getstate__(self):
        return (self.labels, self.directed, self.bidirected)

    def __setstate__(self, state):
        self.__init__(*state)

    @property
    def n(self) -> int:
        return len(self.labels)

    def describe(self) -> str:
        lab = self.labels
        parts = [f"{lab[u]}->{lab[v]}" for u, v in sorted(self.directed)]
        parts += [f"{lab[u]}<->{lab[v]}" for u, v in sorted(self.bidirected)]
        return "[" + ", ".join(lab) + "] " + ", ".join(parts)

    def _cached(self, key, fn):
        try:
            return self._cache[key]
        except KeyError:
            val = self._cache[key] = fn()
            return val

    # -- vertex resolution -------------------------------------------------

    def index(self, v: int | str) -> int:
        if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
            if 0 <= v < self.n:
                return int(v)
            raise UnknownVertexError(f"vertex index {v} out of range for {self.n} vertices")
        lookup = self._cached("lookup", lambda: {lab: i for i, lab in enumerate(self.labels)})
        try:
            return lookup[v]
        except KeyError:
            raise UnknownVertexError(f"unknown vertex label {v!r}") from None

    def vset(self, vs: Iterable[int | str] | int | str | None) -> frozenset[int]:
        if vs is None:
            return frozenset()
        if isinstance(vs, (str, int, np.integer)):
            vs = [vs]
        return frozenset(self.index(v) for v in vs)

    def names(self, vs: Iterable[int]) -> list[str]:
        return [self.labels[v] for v in sorted(vs)]

    # -- edges -------------------------------------------------------------

    def edges(self) -> list[Edge]:
        return self._cached("edges", lambda: sorted(
            [Edge(DIRECTED, u, v) for u, v in self.directed]
            + [Edge(BIDIRECTED, u, v) for u, v in self.bidirected]))

    def edge_set(self) -> frozenset[Edge]:
        return self._cached("edge_set", lambda: frozenset(self.edges()))

    def has_edge(self, e: Edge) -> bool:
        if e.kind == DIRECTED:
            return (e.u, e.v) in self.directed
        return (min(e.u, e.v), max(e.u, e.v)) in self.bidirected

    def incident(self, w: int) -> list[Edge]:
        def build():
            inc: list[list[Edge]] = [[] for _ in range(self.n)]
            for e in self.edges():
                inc[e.u].append(e)
                if e.v != e.u:
                    inc[e.v].append(e)
            return inc
        return self._cached("incident", build)[w]

    def children_of(self, v: int) -> frozenset[int]:
        return self._adjacency()[0][v]

    def parents_of(self, v: int) -> frozenset[int]:
        return self._adjacency()[1][v]

    def siblings_of(self, v: int) -> frozenset[int]:
        return self._adjacency()[2][v]

    def _adjacency(self):
        def build():
            ch = [set() for _ in range(self.n)]
            pa = [set() for _ in range(self.n)]
            sib = [set() for _ in range(self.n)]
            for u, v in self.directed:
                ch[u].add(v)
                pa[v].add(u)
            for u, v in self.bidirected:
                sib[u].add(v)
                sib[v].add(u)
            return ([frozenset(s) for s in ch], [frozenset(s) for s in pa],
                    [frozenset(s) for s in sib])
        return self._cached("adjacency", build)

    def masks(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Children, parents and sibling bitmasks per vertex (n <= 62)."""
        def build():
            if self.n > 62:
                raise GraphError("bitmask encodings support at most 62 vertices")
            ch = np.zeros(self.n, dtype=np.int64)
            pa = np.zeros(self.n, dtype=np.int64)
            sib = np.zeros(self.n, dtype=np.int64)
            for u, v in self.directed:
                ch[u] |= 1 << v
                pa[v] |= 1 << u
            for u, v in self.bidirected:
                sib[u] |= 1 << v
                sib[v] |= 1 << u
            return ch, pa, sib
        return self._cached("masks", build)

    def dense(self) -> tuple[np.ndarray, np.ndarray]:
        """Boolean adjacency matrices ``(D, B)``: ``D[u, v]`` iff ``u -> v``."""
        def build():
            d = np.zeros((self.n, self.n), dtype=np.bool_)
            b = np.zeros((self.n, self.n), dtype=np.bool_)
            for u, v in self.directed:
                d[u, v] = True
            for u, v in self.bidirected:
                b[u, v] = b[v, u] = True
            return d, b
        return self._cached("dense", build)

    def ancestor_masks(self) -> np.ndarray:
        """``anc[v]`` is the bitmask of An(v)."""
        def build():
            anc = np.zeros(self.n, dtype=np.int64)
            for v in range(self.n):
                anc[v] = _bits(ancestors(self, {v}))
            return anc
        return self._cached("ancmask", build)

    @property
    def is_dg(self) -> bool:
        return not self.bidirected


def _bits(vs: Iterable[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def make_dmg(labels: Sequence[str], directed: Iterable[tuple] = (),
             bidirected: Iterable[tuple] = ()) -> Dmg:
    """Validated constructor taking edges as label pairs (or index pairs)."""
    labels = list(labels)
    seen = set()
    for lab in labels:
        if not isinstance(lab, str) or not lab:
            raise GraphError(f"labels must be non-empty strings, got {lab!r}")
        if lab in seen:
            raise GraphError(f"duplicate label {lab!r}")
        seen.add(lab)
    proto = Dmg(labels)
    d: set[tuple[int, int]] = set()
    for pair in directed:
        u, v = (proto.index(x) for x in pair)
        if (u, v) in d:
            raise DuplicateEdgeError(f"duplicate directed edge {labels[u]}->{labels[v]}")
        d.add((u, v))
    b: set[tuple[int, int]] = set()
    for pair in bidirected:
        u, v = sorted(proto.index(x) for x in pair)
        if (u, v) in b:
            raise DuplicateEdgeError(f"duplicate bidirected edge {labels[u]}<->{labels[v]}")
        b.add((u, v))
    return Dmg(labels, d, b)


def _check_edge(g: Dmg, e: Edge) -> Edge:
    if e.kind not in (DIRECTED, BIDIRECTED):
        raise GraphError(f"unknown edge kind {e.kind!r}")
    g.index(e.u)
    g.index(e.v)
    return Edge.bidirected(e.u, e.v) if e.kind == BIDIRECTED else e


def add_edge(g: Dmg, e: Edge) -> Dmg:
    e = _check_edge(g, e)
    if g.has_edge(e):
        raise DuplicateEdgeError(f"edge {e} already present")
    if e.kind == DIRECTED:
        return Dmg(g.labels, g.directed | {(e.u, e.v)}, g.bidirected)
    return Dmg(g.labels, g.directed, g.bidirected | {(e.u, e.v)})


def remove_edge(g: Dmg, e: Edge) -> Dmg:
    e = _check_edge(g, e)
    if not g.has_edge(e):
        raise MissingEdgeError(f"edge {e} not present")
    if e.kind == DIRECTED:
        return Dmg(g.labels, g.directed - {(e.u, e.v)}, g.bidirected)
    return Dmg(g.labels, g.directed, g.bidirected - {(e.u, e.v)})


def with_edges(g: Dmg, edges: Iterable[Edge]) -> Dmg:
    """Graph on the vertices of ``g`` with exactly ``edges``."""
    d, b = set(), set()
    for e in edges:
        (d if e.kind == DIRECTED else b).add((e.u, e.v))
    return Dmg(g.labels, d, b)


def ancestors(g: Dmg, c: Iterable[int | str]) -> frozenset[int]:
    """Vertices with a (possibly trivial) directed path into ``c``."""
    c = g.vset(c)
    out = set(c)
    stack = list(c)
    while stack:
        v = stack.pop()
        for p in g.parents_of(v):
            if p not in out:
                out.add(p)
                stack.append(p)
    return frozenset(out)


def parents(g: Dmg, beta: int | str) -> frozenset[int]:
    return g.parents_of(g.index(beta))


def induced_subgraph(g: Dmg, o: Iterable[int | str]) -> Dmg:
    """Subgraph on ``o``; vertices keep their relative order."""
    keep = sorted(g.vset(o))
    pos = {v: i for i, v in enumerate(keep)}
    d = [(pos[u], pos[v]) for u, v in g.directed if u in pos and v in pos]
    b = [(pos[u], pos[v]) for u, v in g.bidirected if u in pos and v in pos]
    return Dmg([g.labels[v] for v in keep], d, b)


def is_supergraph(g1: Dmg, g2: Dmg) -> bool:
    """True iff every edge of ``g2`` is an edge of ``g1``."""
    if set(g1.labels) != set(g2.labels):
        raise GraphError("is_supergraph needs identical vertex sets")
    if g1.labels != g2.labels:
        g2 = relabel_to(g2, g1.labels)
    return g2.directed <= g1.directed and g2.bidirected <= g1.bidirected


def relabel_to(g: Dmg, labels: Sequence[str]) -> Dmg:
    """Reorder ``g``'s vertices to follow ``labels``."""
    pos = {lab: i for i, lab in enumerate(labels)}
    if set(pos) != set(g.labels):
        raise GraphError("label sets differ")
    m = [pos[lab] for lab in g.labels]
    return Dmg(labels, [(m[u], m[v]) for u, v in g.directed],
               [(m[u], m[v]) for u, v in g.bidirected])


def satisfies_self_sibling_property(g: Dmg) -> bool:
    """Every vertex with a bidirected edge also has a bidirected loop."""
    for u, v in g.bidirected:
        if (u, u) not in g.bidirected or (v, v) not in g.bidirected:
            return False
    return True


def canonical_dg(g: Dmg) -> Dmg:
    """Replace each bidirected edge ``a <-> b`` by a fresh latent ``m -> a, m -> b``."""
    labels = list(g.labels)
    taken = set(labels)
    d = set(g.directed)
    for u, v in sorted(g.bidirected):
        base = f"m{g.labels[u]}_{g.labels[v]}"
        name, k = base, 1
        while name in taken:
            name = f"{base}#{k}"
            k += 1
        taken.add(name)
        labels.append(name)
        m = len(labels) - 1
        d.add((m, u))
        d.add((m, v))
    return Dmg(labels, d, ())


class UndirectedGraph(NamedTuple):
    labels: tuple[str, ...]
    edges: frozenset[tuple[int, int]]

    def neighbours(self) -> list[set[int]]:
        nb: list[set[int]] = [set() for _ in self.labels]
        for u, v in self.edges:
            nb[u].add(v)
            nb[v].add(u)
        return nb


def iter_vertex_sets(n: int) -> Iterator[frozenset[int]]:
    for mask in range(1 << n):
        yield frozenset(i for i in range(n) if mask >> i & 1)
