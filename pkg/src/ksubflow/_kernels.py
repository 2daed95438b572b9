"""Array kernels for max flow, residual reachability, SCCs and extreme cuts.

The graph is a CSR arc list: arcs of vertex ``x`` are ``start[x]:start[x+1]``,
``head[a]`` is the arc's target, ``res[a]`` its residual capacity and
``rev[a]`` the paired reverse arc.  Compiled with numba when it is available;
the same code runs as plain Python otherwise.
"""

from __future__ import annotations

import heapq
import os

import numpy as np

try:
    if os.environ.get("KSUBFLOW_NO_JIT"):
        raise ImportError
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


@njit(cache=True)
def max_flow_kernel(start, head, res, rev, s, t):
    """Shortest augmenting paths.  Mutates ``res``; returns (value, augmentations)."""
    nv = len(start) - 1
    parent = np.full(nv, -1, dtype=np.int64)
    seen = np.zeros(nv, dtype=np.int64)
    queue = np.empty(nv, dtype=np.int64)
    value = 0
    augmentations = 0
    stamp = 0
    while True:
        stamp += 1
        seen[s] = stamp
        queue[0] = s
        qh = 0
        qt = 1
        found = False
        while qh < qt and not found:
            x = queue[qh]
            qh += 1
            for a in range(start[x], start[x + 1]):
                if res[a] > 0:
                    y = head[a]
                    if seen[y] != stamp:
                        seen[y] = stamp
                        parent[y] = a
                        if y == t:
                            found = True
                            break
                        queue[qt] = y
                        qt += 1
        if not found:
            break
        push = -1
        y = t
        while y != s:
            a = parent[y]
            if push < 0 or res[a] < push:
                push = res[a]
            y = head[rev[a]]
        y = t
        while y != s:
            a = parent[y]
            res[a] -= push
            res[rev[a]] += push
            y = head[rev[a]]
        value += push
        augmentations += 1
    return value, augmentations


@njit(cache=True)
def reachable_kernel(start, head, res, s):
    nv = len(start) - 1
    mark = np.zeros(nv, dtype=np.bool_)
    stack = np.empty(nv, dtype=np.int64)
    mark[s] = True
    stack[0] = s
    top = 1
    while top > 0:
        top -= 1
        x = stack[top]
        for a in range(start[x], start[x + 1]):
            if res[a] > 0:
                y = head[a]
                if not mark[y]:
                    mark[y] = True
                    stack[top] = y
                    top += 1
    return mark


@njit(cache=True)
def tarjan_kernel(start, head, res):
    """Strongly connected components of the arcs with positive ``res``.

    Component ids are assigned in completion order, which is a reverse
    topological order of the condensation.
    """
    nv = len(start) - 1
    index = np.full(nv, -1, dtype=np.int64)
    low = np.zeros(nv, dtype=np.int64)
    comp = np.full(nv, -1, dtype=np.int64)
    on_stack = np.zeros(nv, dtype=np.bool_)
    stack = np.empty(nv, dtype=np.int64)
    call_v = np.empty(nv, dtype=np.int64)
    call_a = np.empty(nv, dtype=np.int64)
    sp = 0
    cp = 0
    counter = 0
    ncomp = 0
    for root in range(nv):
        if index[root] >= 0:
            continue
        call_v[0] = root
        call_a[0] = start[root]
        cp = 1
        index[root] = counter
        low[root] = counter
        counter += 1
        stack[sp] = root
        sp += 1
        on_stack[root] = True
        while cp > 0:
            x = call_v[cp - 1]
            a = call_a[cp - 1]
            descended = False
            while a < start[x + 1]:
                if res[a] > 0:
                    y = head[a]
                    if index[y] < 0:
                        call_a[cp - 1] = a + 1
                        index[y] = counter
                        low[y] = counter
                        counter += 1
                        stack[sp] = y
                        sp += 1
                        on_stack[y] = True
                        call_v[cp] = y
                        call_a[cp] = start[y]
                        cp += 1
                        descended = True
                        break
                    elif on_stack[y] and index[y] < low[x]:
                        low[x] = index[y]
                a += 1
            if descended:
                continue
            if low[x] == index[x]:
                while True:
                    sp -= 1
                    y = stack[sp]
                    on_stack[y] = False
                    comp[y] = ncomp
                    if y == x:
                        break
                ncomp += 1
            cp -= 1
            if cp > 0:
                p = call_v[cp - 1]
                if low[x] < low[p]:
                    low[p] = low[x]
    return comp, ncomp


@njit(cache=True)
def extreme_cut_kernel(start, head, res, rev, comp, ncomp, in_cut, k):
    """Greedy closure expansion of a minimum cut, one SCC at a time.

    ``in_cut`` starts as the residual-reachable set of ``s`` and is expanded in
    place.  Candidate SCCs (all residual arcs leaving them land in the cut) are
    taken in increasing order of their smallest vertex id; each is checked once
    and added when the cut stays normalised.
    """
    nv = len(start) - 1
    nvars = (nv - 2) // k if k > 0 else 0
    size = np.zeros(ncomp + 1, dtype=np.int64)
    first = np.full(ncomp, nv, dtype=np.int64)
    for x in range(nv):
        size[comp[x] + 1] += 1
        if x < first[comp[x]]:
            first[comp[x]] = x
    offs = np.cumsum(size)
    fill = offs[:-1].copy()
    members = np.empty(nv, dtype=np.int64)
    for x in range(nv):
        c = comp[x]
        members[fill[c]] = x
        fill[c] += 1

    used = np.zeros(nvars, dtype=np.bool_)
    comp_in = np.zeros(ncomp, dtype=np.bool_)
    for x in range(nv):
        if in_cut[x]:
            comp_in[comp[x]] = True
            if x >= 2:
                used[(x - 2) // k] = True

    pending = np.zeros(ncomp, dtype=np.int64)
    for x in range(nv):
        if in_cut[x]:
            continue
        cx = comp[x]
        for a in range(start[x], start[x + 1]):
            if res[a] > 0:
                y = head[a]
                if comp[y] != cx and not in_cut[y]:
                    pending[cx] += 1

    checked = np.zeros(ncomp, dtype=np.bool_)
    heap = [np.int64(0)]
    heap.pop()
    for c in range(ncomp):
        if not comp_in[c] and pending[c] == 0:
            heapq.heappush(heap, first[c])
    seen_var = np.zeros(nvars, dtype=np.int64)
    stamp = 0
    while len(heap) > 0:
        c = comp[heapq.heappop(heap)]
        if checked[c] or comp_in[c]:
            continue
        checked[c] = True
        stamp += 1
        ok = True
        for i in range(offs[c], offs[c + 1]):
            x = members[i]
            if x < 2:
                ok = False
                break
            v = (x - 2) // k
            if used[v] or seen_var[v] == stamp:
                ok = False
                break
            seen_var[v] = stamp
        if not ok:
            continue
        comp_in[c] = True
        for i in range(offs[c], offs[c + 1]):
            x = members[i]
            in_cut[x] = True
            used[(x - 2) // k] = True
        for i in range(offs[c], offs[c + 1]):
            x = members[i]
            for b in range(start[x], start[x + 1]):
                u = head[b]
                if res[rev[b]] > 0 and comp[u] != c and not in_cut[u]:
                    cu = comp[u]
                    pending[cu] -= 1
                    if pending[cu] == 0 and not checked[cu]:
                        heapq.heappush(heap, first[cu])
    return in_cut
