"""(X,k)-networks: gadgets, assembly, and the cut/assignment correspondence.

Vertex numbering is fixed: ``s = 0``, ``t = 1`` and the vertex for value ``d``
of variable ``v`` is ``v*k + (d-1) + 2``.  Capacities are integer half-units.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import Constraint, Permutation, SoftOr, Unary, VcspInstance, effective_weight

SOURCE = 0
SINK = 1


class UnsupportedConstraint(ValueError):
    pass


class NotNormalised(ValueError):
    pass


def vertex(v: int, d: int, k: int) -> int:
    return v * k + (d - 1) + 2


def variable_of(x: int, k: int) -> tuple[int, int]:
    """Inverse of :func:`vertex` for non-terminal vertices."""
    v, r = divmod(x - 2, k)
    return v, r + 1


@dataclass(frozen=True)
class KSubNetwork:
    n: int
    k: int
    tail: np.ndarray
    head: np.ndarray
    cap: np.ndarray
    # add to a cut capacity to recover the objective value (unary shifts)
    shift_halves: int = 0

    @property
    def num_vertices(self) -> int:
        return self.n * self.k + 2

    @property
    def num_edges(self) -> int:
        return len(self.tail)

    def edges(self) -> list[tuple[int, int, int]]:
        return list(zip(self.tail.tolist(), self.head.tolist(), self.cap.tolist()))

    def capacity(self, u: int, v: int) -> int:
        """Total capacity of all (parallel) edges ``u -> v``."""
        return int(self.cap[(self.tail == u) & (self.head == v)].sum())


def _edge_arrays(triples: Sequence[tuple[int, int, int]]):
    if not triples:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty.copy(), empty.copy()
    arr = np.asarray(triples, dtype=np.int64).reshape(-1, 3)
    return arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy()


def _gadget_edges(c: Constraint, k: int, crisp_weight: int | None) -> tuple[list[tuple[int, int, int]], int]:
    w = effective_weight(c, crisp_weight)
    if isinstance(c, Unary):
        (v,) = c.scope
        low = min(c.table[1:])
        f = [x - low for x in c.table]
        d1 = 1 + int(np.argmin(f[1:]))
        edges = [(SOURCE, vertex(v, d1, k), w * f[0]), (vertex(v, d1, k), SINK, w * f[d1])]
        for d in range(1, k + 1):
            if d != d1:
                edges.append((vertex(v, d, k), SINK, w * (f[d] - f[0])))
        return edges, w * low
    if isinstance(c, Permutation):
        x, y = c.scope
        edges = []
        for i in range(1, k + 1):
            edges.append((vertex(x, i, k), vertex(y, c.perm[i - 1], k), w))
        for i in range(1, k + 1):
            edges.append((vertex(y, c.perm[i - 1], k), vertex(x, i, k), w))
        return edges, 0
    if isinstance(c, SoftOr):
        x, y = c.scope
        edges = [(vertex(x, i, k), vertex(y, c.d2, k), w) for i in range(1, k + 1) if i != c.d]
        edges += [(vertex(y, j, k), vertex(x, c.d, k), w) for j in range(1, k + 1) if j != c.d2]
        return edges, 0
    raise UnsupportedConstraint(f"no network gadget for {type(c).__name__}")


def build_gadget(c: Constraint, k: int, crisp_weight: int | None = None) -> KSubNetwork:
    """Network fragment representing a single unary, permutation or soft-or constraint.

    Edges of capacity zero are kept here so the gadget shape is visible; they
    are dropped by :func:`assemble`.
    """
    c.check_domain(k)
    edges, shift = _gadget_edges(c, k, crisp_weight)
    tail, head, cap = _edge_arrays(edges)
    return KSubNetwork(max(c.scope) + 1, k, tail, head, cap, shift)


def _permutation_block(perms: list[Permutation], k: int, crisp_weight: int | None):
    x = np.array([c.scope[0] for c in perms], dtype=np.int64)
    y = np.array([c.scope[1] for c in perms], dtype=np.int64)
    p = np.array([c.perm for c in perms], dtype=np.int64).reshape(-1, k)
    w = np.array([effective_weight(c, crisp_weight) for c in perms], dtype=np.int64)
    xs = x[:, None] * k + np.arange(k)[None, :] + 2
    ys = y[:, None] * k + (p - 1) + 2
    ws = np.repeat(w, k)
    return (
        np.concatenate([xs.ravel(), ys.ravel()]),
        np.concatenate([ys.ravel(), xs.ravel()]),
        np.concatenate([ws, ws]),
    )


def merge_edges(n: int, k: int, tail, head, cap, keep_zero: bool = False):
    """Sum parallel edges; drop zero-capacity edges unless asked not to."""
    nv = n * k + 2
    key = np.asarray(tail, dtype=np.int64) * nv + np.asarray(head, dtype=np.int64)
    cap = np.asarray(cap, dtype=np.int64)
    if len(key) == 0:
        return key.copy(), key.copy(), cap.copy()
    order = np.argsort(key, kind="stable")
    key, cap = key[order], cap[order]
    starts = np.flatnonzero(np.r_[True, key[1:] != key[:-1]])
    total = np.add.reduceat(cap, starts)
    tail, head = np.divmod(key[starts], nv)
    if not keep_zero:
        nz = total != 0
        tail, head, total = tail[nz], head[nz], total[nz]
    return tail, head, total


def assemble(inst: VcspInstance, crisp_weight: int | None = None) -> KSubNetwork:
    """Sum of the gadgets of every constraint, with parallel edges merged."""
    if crisp_weight is None:
        crisp_weight = inst.crisp_weight()
    k = inst.k
    perms = [c for c in inst.constraints if isinstance(c, Permutation)]
    others: list[tuple[int, int, int]] = []
    shift = 0
    for c in inst.constraints:
        if isinstance(c, Permutation):
            continue
        edges, s = _gadget_edges(c, k, crisp_weight)
        others.extend(edges)
        shift += s
    parts = [_edge_arrays(others)]
    if perms:
        parts.append(_permutation_block(perms, k, crisp_weight))
    tail = np.concatenate([p[0] for p in parts])
    head = np.concatenate([p[1] for p in parts])
    cap = np.concatenate([p[2] for p in parts])
    tail, head, cap = merge_edges(inst.n, k, tail, head, cap)
    if np.any(head == SOURCE) or np.any(tail == SINK):
        raise AssertionError("assembled network has edges into s or out of t")
    return KSubNetwork(inst.n, k, tail, head, cap, shift)


# ---------------------------------------------------------------------------
# cuts


def cut_of_assignment(phi: Sequence[int], k: int) -> frozenset[int]:
    return frozenset([SOURCE] + [vertex(v, a, k) for v, a in enumerate(phi) if a])


def normalise(cut: Iterable[int], k: int) -> frozenset[int]:
    """Keep only the value groups that meet the cut in exactly one vertex."""
    groups: dict[int, list[int]] = {}
    for x in cut:
        if x >= 2:
            groups.setdefault(variable_of(x, k)[0], []).append(x)
    kept = [xs[0] for xs in groups.values() if len(xs) == 1]
    return frozenset([SOURCE] + kept)


def assignment_of_cut(cut: Iterable[int], n: int, k: int) -> tuple[int, ...]:
    phi = [0] * n
    for x in cut:
        if x in (SOURCE, SINK):
            continue
        v, d = variable_of(x, k)
        if phi[v]:
            raise NotNormalised(f"variable {v} has two values in the cut")
        phi[v] = d
    return tuple(phi)


def _check_cut(cut: frozenset[int]) -> None:
    if SOURCE not in cut or SINK in cut:
        raise ValueError("an s-t cut must contain s and not t")


def cut_capacity(net: KSubNetwork, cut: Iterable[int]) -> int:
    cut = frozenset(cut)
    _check_cut(cut)
    member = np.zeros(net.num_vertices, dtype=bool)
    member[list(cut)] = True
    leaving = member[net.tail] & ~member[net.head]
    return int(net.cap[leaving].sum())


def cut_value(net: KSubNetwork, cut: Iterable[int]) -> int:
    """Cut capacity plus the recorded unary shift, i.e. the objective value."""
    return cut_capacity(net, cut) + net.shift_halves


def dump_edges(net: KSubNetwork) -> str:
    return "".join(f"{u} {v} {c}\n" for u, v, c in net.edges())


def load_edges(text: str, n: int, k: int, shift_halves: int = 0) -> KSubNetwork:
    triples = [tuple(int(x) for x in line.split()) for line in text.splitlines() if line.strip()]
    tail, head, cap = _edge_arrays(triples)
    return KSubNetwork(n, k, tail, head, cap, shift_halves)
