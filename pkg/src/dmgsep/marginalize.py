"""Latent projection by triroute saturation."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np

from . import kernels
from .graph import (BIDIRECTED, DIRECTED, CapExceededError, Dmg, Edge, GraphError, Mark,
                    induced_subgraph, traversals)


class TriRoute(NamedTuple):
    left: int
    mid: int
    right: int
    left_edge: Edge
    right_edge: Edge
    colliding: bool


def shortcut_edge(left: int, left_mark: Mark, right: int, right_mark: Mark) -> Edge:
    """The edge between ``left`` and ``right`` carrying the given end marks."""
    if left_mark == Mark.HEAD and right_mark == Mark.HEAD:
        return Edge.bidirected(left, right)
    if left_mark == Mark.TAIL and right_mark == Mark.HEAD:
        return Edge.directed(left, right)
    if left_mark == Mark.HEAD and right_mark == Mark.TAIL:
        return Edge.directed(right, left)
    raise GraphError("no DMG edge has two tails")


def _noncolliding_triroutes(incident: list[Edge], m: int):
    """Noncolliding walks ``x ~ m ~ y`` with ``x, y != m``, as (triroute, shortcut)."""
    # arms: ways to leave m along a non-loop edge -> (other end, mark at m, mark at other end)
    arms = []
    for e in incident:
        if e.is_loop:
            continue
        for st in traversals(e, m):
            arms.append((e, st.next, st.departure, st.arrival))
    for e1, x, mark_m1, mark_x in arms:
        for e2, y, mark_m2, mark_y in arms:
            if mark_m1 == Mark.HEAD and mark_m2 == Mark.HEAD:
                continue
            yield (TriRoute(x, m, y, e1, e2, False),
                   shortcut_edge(x, mark_x, y, mark_y))


def projection_fixpoint_trace(g: Dmg, o: Iterable[int | str], *, seed: int | None = None
                              ) -> tuple[Dmg, list[tuple[TriRoute, Edge]]]:
    """Saturate ``g`` with shortcut edges over latent middles; return (saturated, trace).

    Without ``seed`` the middle vertices and triroutes are processed in index
    order; with a seed the choice order is shuffled.
    """
    o = g.vset(o)
    latent = [v for v in range(g.n) if v not in o]
    rng = random.Random(seed) if seed is not None else None
    incident: list[list[Edge]] = [list(g.incident(v)) for v in range(g.n)]
    present = set(g.edges())
    trace: list[tuple[TriRoute, Edge]] = []
    work = list(latent)
    queued = set(work)
    while work:
        if rng is not None:
            m = work.pop(rng.randrange(len(work)))
        else:
            m = work.pop(0)
        queued.discard(m)
        while True:
            candidates = [(t, e) for t, e in _noncolliding_triroutes(incident[m], m)
                          if e not in present]
            if not candidates:
                break
            t, e = rng.choice(candidates) if rng is not None else candidates[0]
            present.add(e)
            trace.append((t, e))
            incident[e.u].append(e)
            if e.v != e.u:
                incident[e.v].append(e)
            for w in (e.u, e.v):
                if w not in o and w not in queued and w != m:
                    work.append(w)
                    queued.add(w)
    saturated = Dmg(g.labels, [(e.u, e.v) for e in present if e.kind == DIRECTED],
                    [(e.u, e.v) for e in present if e.kind == BIDIRECTED])
    return saturated, trace


def latent_projection(g: Dmg, o: Iterable[int | str], *, seed: int | None = None) -> Dmg:
    """Latent projection of ``g`` onto ``o``; output vertices keep ``g``'s order."""
    o = g.vset(o)
    saturated, _ = projection_fixpoint_trace(g, o, seed=seed)
    return induced_subgraph(saturated, o)


@dataclass
class InvarianceReport:
    checked: int = 0
    violations: list[tuple[str, str, tuple[str, ...], bool, bool]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_marginalization_invariance(g: Dmg, o: Iterable[int | str], cap: int = 12
                                      ) -> InvarianceReport:
    """Compare every singleton query over ``o`` in ``g`` and in its projection."""
    o = sorted(g.vset(o))
    if len(o) > cap:
        raise CapExceededError("observed set", len(o), cap)
    proj = latent_projection(g, o)
    k = len(o)
    sub = np.arange(1 << k, dtype=np.int64)
    # embed subsets of o into g's vertex numbering
    full = np.zeros_like(sub)
    for i, v in enumerate(o):
        full[(sub >> i) & 1 == 1] |= np.int64(1) << v
    ch, pa, sib = g.masks()
    reach_g = kernels.reach_table(ch, pa, sib, g.ancestor_masks(), full)
    pch, ppa, psib = proj.masks()
    reach_m = kernels.reach_table(pch, ppa, psib, proj.ancestor_masks(), sub)
    report = InvarianceReport()
    for i, alpha in enumerate(o):
        for j, beta in enumerate(o):
            conn_g = (reach_g[alpha] >> beta) & 1
            conn_m = (reach_m[i] >> j) & 1
            report.checked += len(sub)
            for s in np.nonzero(conn_g != conn_m)[0]:
                cset = tuple(g.labels[o[t]] for t in range(k) if s >> t & 1)
                report.violations.append((g.labels[alpha], g.labels[beta], cset,
                                          not conn_g[s], not conn_m[s]))
    return report
