"""Hot reachability kernels, each in a numba and a pure-numpy flavour.

Set ``DMGSEP_NO_NUMBA=1`` to force the numpy versions.  Both flavours take
and return the same arrays and are checked against each other in the tests.

State convention: a walk arriving at ``v`` does so with a head or a tail
mark at ``v``.  Leaving ``v`` with a tail (along ``v -> w``) makes ``v`` a
noncollider; leaving with a head (against ``w -> v`` or along ``v <-> w``)
makes ``v`` a collider iff it was entered with a head.  Noncolliders must
avoid ``blocked`` and colliders must lie in ``collider_ok``.  Sources depart
ungated.
"""

from __future__ import annotations

import os

import numpy as np

USE_NUMBA = os.environ.get("DMGSEP_NO_NUMBA", "").lower() not in ("1", "true", "yes")

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None
    USE_NUMBA = False


# -- dense walk reachability ---------------------------------------------


def walk_reach_numpy(d, b, sources, blocked, collider_ok):
    """Return ``(head, tail)``: vertices reached by a gated nontrivial walk."""
    head = d[sources].any(axis=0) | b[sources].any(axis=0)
    tail = d[:, sources].any(axis=1)
    while True:
        tail_ok = (head | tail) & ~blocked
        head_ok = (tail & ~blocked) | (head & collider_ok)
        new_head = head | d[tail_ok].any(axis=0) | b[head_ok].any(axis=0)
        new_tail = tail | d[:, head_ok].any(axis=1)
        if (new_head == head).all() and (new_tail == tail).all():
            return head, tail
        head, tail = new_head, new_tail


def _walk_reach_loops(d, b, sources, blocked, collider_ok):
    n = d.shape[0]
    head = np.zeros(n, dtype=np.bool_)
    tail = np.zeros(n, dtype=np.bool_)
    queue = np.empty(2 * n, dtype=np.int64)
    top = 0
    for s in range(n):
        if not sources[s]:
            continue
        for w in range(n):
            if (d[s, w] or b[s, w]) and not head[w]:
                head[w] = True
                queue[top] = 2 * w + 1
                top += 1
            if d[w, s] and not tail[w]:
                tail[w] = True
                queue[top] = 2 * w
                top += 1
    while top > 0:
        top -= 1
        state = queue[top]
        v = state // 2
        arrived_head = state % 2 == 1
        tail_ok = not blocked[v]
        if arrived_head:
            head_ok = collider_ok[v]
        else:
            head_ok = not blocked[v]
        for w in range(n):
            if tail_ok and d[v, w] and not head[w]:
                head[w] = True
                queue[top] = 2 * w + 1
                top += 1
            if head_ok:
                if b[v, w] and not head[w]:
                    head[w] = True
                    queue[top] = 2 * w + 1
                    top += 1
                if d[w, v] and not tail[w]:
                    tail[w] = True
                    queue[top] = 2 * w
                    top += 1
    return head, tail


# -- bitset separation tables ----------------------------------------------


def condition_ancestors(anc, cmasks):
    """An(C) bitmask for every conditioning mask in ``cmasks``."""
    out = np.zeros(cmasks.shape[0], dtype=np.int64)
    for v in range(anc.shape[0]):
        hit = (cmasks >> v) & 1 == 1
        out[hit] |= anc[v]
    return out


def reach_table_numpy(children, parents, siblings, anc, cmasks):
    """``out[a, k]``: bitmask of vertices reached with a head from ``a`` given ``cmasks[k]``.

    Sources inside the conditioning set reach nothing.
    """
    n = children.shape[0]
    ancc = condition_ancestors(anc, cmasks)
    notc = ~cmasks
    out = np.zeros((n, cmasks.shape[0]), dtype=np.int64)
    for a in range(n):
        head = np.full(cmasks.shape[0], children[a] | siblings[a], dtype=np.int64)
        tail = np.full(cmasks.shape[0], parents[a], dtype=np.int64)
        while True:
            tail_ok = (head | tail) & notc
            head_ok = (tail & notc) | (head & ancc)
            new_head = head.copy()
            new_tail = tail.copy()
            for v in range(n):
                t = (tail_ok >> v) & 1 == 1
                h = (head_ok >> v) & 1 == 1
                new_head[t] |= children[v]
                new_head[h] |= siblings[v]
                new_tail[h] |= parents[v]
            if (new_head == head).all() and (new_tail == tail).all():
                break
            head, tail = new_head, new_tail
        head[(cmasks >> a) & 1 == 1] = 0
        out[a] = head
    return out


def _reach_table_loops(children, parents, siblings, anc, cmasks):
    n = children.shape[0]
    k = cmasks.shape[0]
    out = np.zeros((n, k), dtype=np.int64)
    for j in range(k):
        c = cmasks[j]
        ancc = np.int64(0)
        for v in range(n):
            if (c >> v) & 1:
                ancc |= anc[v]
        for a in range(n):
            if (c >> a) & 1:
                continue
            head = children[a] | siblings[a]
            tail = parents[a]
            done_head = np.int64(0)
            done_tail = np.int64(0)
            while True:
                todo_head = head & ~done_head
                todo_tail = tail & ~done_tail
                if todo_head == 0 and todo_tail == 0:
                    break
                done_head |= todo_head
                done_tail |= todo_tail
                for v in range(n):
                    bit = np.int64(1) << v
                    if todo_head & bit:
                        if not c & bit:
                            head |= children[v]
                        if ancc & bit:
                            head |= siblings[v]
                            tail |= parents[v]
                    if todo_tail & bit and not c & bit:
                        head |= children[v] | siblings[v]
                        tail |= parents[v]
            out[a, j] = head
    return out


if numba is not None:
    walk_reach_numba = numba.njit(cache=True)(_walk_reach_loops)
    reach_table_numba = numba.njit(cache=True)(_reach_table_loops)
else:  # pragma: no cover
    walk_reach_numba = _walk_reach_loops
    reach_table_numba = _reach_table_loops


def walk_reach(d, b, sources, blocked, collider_ok):
    if USE_NUMBA:
        return walk_reach_numba(d, b, sources, blocked, collider_ok)
    return walk_reach_numpy(d, b, sources, blocked, collider_ok)


def reach_table(children, parents, siblings, anc, cmasks):
    if USE_NUMBA:
        return reach_table_numba(children, parents, siblings, anc, cmasks)
    return reach_table_numpy(children, parents, siblings, anc, cmasks)


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
