"""Unrolling a directed graph over time slices.

Vertex ``(v, t)`` of the unrolled DAG has index ``t * n + v`` and label
``"{label}_{t}"``.  An edge ``(u, s) -> (v, t)`` exists iff ``u -> v`` in the
base graph and ``s < t``, so a loop ``u -> u`` becomes forward edges between
copies of ``u``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Literal, NamedTuple

import numpy as np

from .equivalence import separation_table
from .graph import Dmg, GraphError
from .separation import m_reach, m_separated, mu_separated

Horizon = int | Literal["auto"]


def _require_dg(d: Dmg) -> None:
    if d.bidirected:
        raise GraphError("unrolling is defined for directed graphs only")


def proof_horizon(d: Dmg) -> int:
    """``3 * (|E| + 1) + 1``: a horizon at which rolled and unrolled separation coincide."""
    return 3 * (len(d.directed) + 1) + 1


def resolve_horizon(d: Dmg, t: Horizon) -> int:
    if t == "auto":
        return proof_horizon(d)
    if isinstance(t, bool) or not isinstance(t, (int, np.integer)):
        raise GraphError(f"horizon must be a non-negative integer or 'auto', got {t!r}")
    if t < 0:
        raise GraphError(f"horizon must be non-negative, got {t}")
    return int(t)


class SliceSet(NamedTuple):
    """Copies of ``vertices`` at every time up to ``time`` or exactly at ``time``."""

    vertices: frozenset[int]
    time: int
    exact: bool = False

    def members(self, n: int) -> frozenset[int]:
        times = [self.time] if self.exact else range(self.time + 1)
        return frozenset(t * n + v for t in times for v in self.vertices)


def up_to(vertices: Iterable[int], t: int) -> SliceSet:
    return SliceSet(frozenset(vertices), t, False)


def exactly(vertices: Iterable[int], t: int) -> SliceSet:
    return SliceSet(frozenset(vertices), t, True)


@dataclass(frozen=True)
class UnrolledDag:
    base: Dmg
    horizon: int
    graph: Dmg

    def index(self, v: int | str, t: int) -> int:
        if not 0 <= t <= self.horizon:
            raise GraphError(f"time {t} outside 0..{self.horizon}")
        return t * self.base.n + self.base.index(v)

    def vertex(self, i: int) -> tuple[int, int]:
        return i % self.base.n, i // self.base.n

    def slices(self, s: SliceSet) -> frozenset[int]:
        return s.members(self.base.n)

    @property
    def expected_edge_count(self) -> int:
        t = self.horizon
        return len(self.base.directed) * t * (t + 1) // 2


def unroll(d: Dmg, t: Horizon) -> UnrolledDag:
    _require_dg(d)
    t = resolve_horizon(d, t)
    n = d.n
    labels = [f"{d.labels[v]}_{s}" for s in range(t + 1) for v in range(n)]
    edges = [(s * n + u, r * n + v) for u, v in d.directed
             for s in range(t + 1) for r in range(s + 1, t + 1)]
    return UnrolledDag(d, t, Dmg(labels, edges, ()))


def is_acyclic(g: Dmg) -> bool:
    indeg = [len(g.parents_of(v)) for v in range(g.n)]
    if any((v, v) in g.directed for v in range(g.n)):
        return False
    stack = [v for v in range(g.n) if indeg[v] == 0]
    done = 0
    while stack:
        v = stack.pop()
        done += 1
        for w in g.children_of(v):
            indeg[w] -= 1
            if indeg[w] == 0:
                stack.append(w)
    return done == g.n


class RollingResult(NamedTuple):
    rolled: bool
    unrolled: bool


def _unrolled_query(u: UnrolledDag, a: frozenset[int], b: frozenset[int],
                    c: frozenset[int]) -> bool:
    t = u.horizon
    src = u.slices(up_to(a - c, t - 1))
    dst = u.slices(exactly(b, t))
    cond = u.slices(up_to(c, t - 1))
    return m_separated(u.graph, src, dst, cond)


def check_rolling_correspondence(d: Dmg, a, b, c=(), t: Horizon = "auto") -> RollingResult:
    """μ-separation in ``d`` next to d-separation of the matching slices in its unrolling."""
    _require_dg(d)
    a, b, c = d.vset(a), d.vset(b), d.vset(c)
    u = unroll(d, t)
    if u.horizon < 1:
        raise GraphError("rolling correspondence needs a horizon of at least 1")
    return RollingResult(mu_separated(d, a, b, c), _unrolled_query(u, a, b, c))


class SweepRow(NamedTuple):
    alpha: int
    beta: int
    cmask: int
    rolled: bool
    unrolled: bool


def rolling_sweep(d: Dmg, t: Horizon = "auto") -> Iterator[SweepRow]:
    """All singleton triples ``<alpha, beta | C>`` at one horizon."""
    _require_dg(d)
    u = unroll(d, t)
    if u.horizon < 1:
        raise GraphError("rolling correspondence needs a horizon of at least 1")
    n, hz = d.n, u.horizon
    rolled = separation_table(d)
    for cmask in range(1 << n):
        c = frozenset(v for v in range(n) if cmask >> v & 1)
        cond = u.slices(up_to(c, hz - 1))
        for alpha in range(n):
            if alpha in c:
                reached = np.zeros(u.graph.n, dtype=np.bool_)
            else:
                head, tail = m_reach(u.graph, u.slices(up_to({alpha}, hz - 1)), cond)
                reached = head | tail
            for beta in range(n):
                yield SweepRow(alpha, beta, cmask, bool(int(rolled[alpha, cmask]) >> beta & 1),
                               not reached[u.index(beta, hz)])


__all__ = [
    "RollingResult", "SliceSet", "SweepRow", "UnrolledDag", "check_rolling_correspondence",
    "exactly", "is_acyclic", "proof_horizon", "resolve_horizon", "rolling_sweep", "unroll",
    "up_to",
]
