"""Maximum flow, residual graphs, strongly connected components, extreme cuts."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .network import SINK, SOURCE, KSubNetwork, merge_edges


class InvariantViolation(AssertionError):
    pass


@dataclass
class FlowGraph:
    """CSR arc representation of a network with paired reverse arcs.

    Every network edge ``e`` owns a forward arc ``fwd[e]`` and a reverse arc
    ``rev[fwd[e]]`` of capacity zero.
    """

    net: KSubNetwork
    start: np.ndarray
    head: np.ndarray
    cap: np.ndarray
    rev: np.ndarray
    fwd: np.ndarray
    # network edge index of s->x and x->t for every value vertex x (or -1)
    source_edge: np.ndarray = field(default=None)
    sink_edge: np.ndarray = field(default=None)

    @classmethod
    def from_network(cls, net: KSubNetwork, terminal_slots: bool = False) -> "FlowGraph":
        """Build the arc arrays.

        With ``terminal_slots`` every value vertex gets an ``s -> x`` and an
        ``x -> t`` edge (zero capacity if the network has none), so that unary
        gadgets can later be added by capacity updates alone.
        """
        tail, head, cap = net.tail, net.head, net.cap
        nv = net.num_vertices
        if terminal_slots:
            xs = np.arange(2, nv, dtype=np.int64)
            zeros = np.zeros(len(xs), dtype=np.int64)
            tail = np.concatenate([tail, np.full(len(xs), SOURCE), xs])
            head = np.concatenate([head, xs, np.full(len(xs), SINK)])
            cap = np.concatenate([cap, zeros, zeros])
            tail, head, cap = merge_edges(net.n, net.k, tail, head, cap, keep_zero=True)
            net = KSubNetwork(net.n, net.k, tail, head, cap, net.shift_halves)
        m = len(tail)
        src = np.concatenate([tail, head])
        dst = np.concatenate([head, tail])
        caps = np.concatenate([cap, np.zeros(m, dtype=np.int64)])
        order = np.argsort(src, kind="stable")
        pos = np.empty(2 * m, dtype=np.int64)
        pos[order] = np.arange(2 * m, dtype=np.int64)
        start = np.searchsorted(src[order], np.arange(nv + 1)).astype(np.int64)
        partner = np.concatenate([np.arange(m, 2 * m), np.arange(m)])
        rev = pos[partner][order]
        graph = cls(net, start, dst[order].astype(np.int64), caps[order].astype(np.int64), rev, pos[:m])
        if terminal_slots:
            graph.source_edge = np.full(nv, -1, dtype=np.int64)
            graph.sink_edge = np.full(nv, -1, dtype=np.int64)
            idx = np.arange(m)
            graph.source_edge[head[tail == SOURCE]] = idx[tail == SOURCE]
            graph.sink_edge[tail[head == SINK]] = idx[head == SINK]
        return graph

    @property
    def num_vertices(self) -> int:
        return len(self.start) - 1


@dataclass
class Flow:
    graph: FlowGraph
    value: int
    augmentations: int
    res: np.ndarray  # residual capacity per arc

    @property
    def net(self) -> KSubNetwork:
        return self.graph.net

    def edge_flow(self) -> np.ndarray:
        """Flow on every edge of ``self.net`` in half-units."""
        return self.res[self.graph.rev[self.graph.fwd]]


def run_max_flow(graph: FlowGraph, cap: np.ndarray | None = None) -> Flow:
    res = (graph.cap if cap is None else cap).copy()
    value, augmentations = _kernels.max_flow_kernel(graph.start, graph.head, res, graph.rev, SOURCE, SINK)
    value, augmentations = int(value), int(augmentations)
    # every augmentation moves at least one half-unit
    if augmentations > value:
        raise InvariantViolation(f"{augmentations} augmentations for flow value {value}")
    return Flow(graph, value, augmentations, res)


def max_flow(net: KSubNetwork) -> Flow:
    return run_max_flow(FlowGraph.from_network(net))


@dataclass(frozen=True)
class ResidualGraph:
    num_vertices: int
    edges: frozenset[tuple[int, int]]

    def successors(self, u: int) -> list[int]:
        return sorted(v for a, v in self.edges if a == u)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for u, v in sorted(self.edges):
            adj[u].append(v)
        return adj

    def reachable(self, source: int = SOURCE) -> frozenset[int]:
        adj = self.adjacency()
        seen = {source}
        stack = [source]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return frozenset(seen)

    def is_closed(self, vertices: Iterable[int]) -> bool:
        vs = set(vertices)
        return not any(u in vs and v not in vs for u, v in self.edges)


def residual(net: KSubNetwork, flow: Sequence[int] | np.ndarray | Flow) -> ResidualGraph:
    """Residual graph: ``(u, v)`` is present iff ``f(u,v) < c(u,v)`` or ``f(v,u) > 0``."""
    if isinstance(flow, Flow):
        flow = flow.edge_flow()
    flow = np.asarray(flow, dtype=np.int64)
    f: dict[tuple[int, int], int] = {}
    c: dict[tuple[int, int], int] = {}
    for u, v, cap, x in zip(net.tail.tolist(), net.head.tolist(), net.cap.tolist(), flow.tolist()):
        if x < 0 or x > cap:
            raise ValueError(f"flow {x} on edge ({u},{v}) violates capacity {cap}")
        c[u, v] = c.get((u, v), 0) + cap
        f[u, v] = f.get((u, v), 0) + x
    edges = set()
    for (u, v), cap in c.items():
        if f[u, v] < cap:
            edges.add((u, v))
        if f[u, v] > 0:
            edges.add((v, u))
    return ResidualGraph(net.num_vertices, frozenset(edges))


def _csr(adj: Sequence[Sequence[int]]):
    nv = len(adj)
    start = np.zeros(nv + 1, dtype=np.int64)
    start[1:] = np.cumsum([len(a) for a in adj])
    head = np.fromiter((v for a in adj for v in a), dtype=np.int64, count=int(start[-1]))
    return start, head


def scc(adj: Sequence[Sequence[int]]) -> list[list[int]]:
    """Strongly connected components of a digraph given as successor lists.

    Components are listed in reverse topological order: every edge leaving a
    component ends in a component listed earlier.
    """
    start, head = _csr(adj)
    ones = np.ones(len(head), dtype=np.int64)
    comp, ncomp = _kernels.tarjan_kernel(start, head, ones)
    out: list[list[int]] = [[] for _ in range(int(ncomp))]
    for x, c in enumerate(comp.tolist()):
        out[c].append(x)
    return out


def extreme_min_cut_mask(flow: Flow) -> np.ndarray:
    g = flow.graph
    mask = _kernels.reachable_kernel(g.start, g.head, flow.res, SOURCE)
    if mask[SINK]:
        raise InvariantViolation("t is reachable in the residual graph; the flow is not maximum")
    comp, ncomp = _kernels.tarjan_kernel(g.start, g.head, flow.res)
    return _kernels.extreme_cut_kernel(g.start, g.head, flow.res, g.rev, comp, ncomp, mask, g.net.k)


def extreme_min_cut(net: KSubNetwork, flow: Flow | None = None) -> frozenset[int]:
    """An extreme minimum cut: normalised, minimum, and not strictly inside another.

    Starts from the residual-reachable set of ``s`` and absorbs closed SCCs in
    increasing order of their smallest vertex id while the cut stays normalised.
    """
    if flow is None:
        flow = max_flow(net)
    elif flow.graph.net is not net and flow.graph.net.num_vertices != net.num_vertices:
        raise ValueError("flow belongs to a different network")
    mask = extreme_min_cut_mask(flow)
    return frozenset(np.flatnonzero(mask).tolist())
