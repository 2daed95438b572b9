"""Relaxation minimisation by max flow and the persistence-driven branching driver."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .core import VcspInstance
from .flow import FlowGraph, InvariantViolation, extreme_min_cut_mask, run_max_flow
from .network import assemble, vertex


@dataclass(frozen=True)
class RelaxationResult:
    cost: int  # half-units, unary shifts included
    assignment: tuple[int, ...]
    feasible: bool  # False when some crisp constraint or fix had to break
    augmentations: int = 0


class Relaxation:
    """One instance prepared for repeated minimisation under different fixes.

    A fix ``v = d`` is a crisp hard constant on ``v``; since its gadget only
    uses terminal edges, fixes are applied by raising capacities on a copy of
    the prepared arc arrays.
    """

    def __init__(self, inst: VcspInstance, crisp_weight: int | None = None):
        self.inst = inst
        self.crisp_weight = inst.crisp_weight() if crisp_weight is None else crisp_weight
        self.network = assemble(inst, self.crisp_weight)
        self.graph = FlowGraph.from_network(self.network, terminal_slots=True)

    def _capacities(self, fixed: Mapping[int, int]) -> np.ndarray:
        k, w = self.inst.k, self.crisp_weight
        cap = self.graph.cap.copy()
        g = self.graph
        for v, d in fixed.items():
            if not 0 <= v < self.inst.n:
                raise ValueError(f"fixed variable {v} out of range")
            if not 1 <= d <= k:
                raise ValueError(f"fixed value {d} outside 1..{k}")
            cap[g.fwd[g.source_edge[vertex(v, d, k)]]] += w
            for e in range(1, k + 1):
                if e != d:
                    cap[g.fwd[g.sink_edge[vertex(v, e, k)]]] += w
        return cap

    def solve(self, fixed: Mapping[int, int] | None = None) -> RelaxationResult:
        flow = run_max_flow(self.graph, self._capacities(fixed or {}))
        mask = extreme_min_cut_mask(flow)
        k, n = self.inst.k, self.inst.n
        values = mask[2:].reshape(n, k) if n else np.zeros((0, k), dtype=bool)
        if np.any(values.sum(axis=1) > 1):
            raise InvariantViolation("extreme cut is not normalised")
        phi = np.where(values.any(axis=1), values.argmax(axis=1) + 1, 0)
        cost = flow.value + self.network.shift_halves
        return RelaxationResult(cost, tuple(phi.tolist()), cost < self.crisp_weight, flow.augmentations)


def minimize(
    inst: VcspInstance,
    fixed: Mapping[int, int] | None = None,
    crisp_weight: int | None = None,
) -> RelaxationResult:
    """Extreme minimum of the relaxed instance with ``fixed`` variables pinned."""
    return Relaxation(inst, crisp_weight).solve(fixed)


@dataclass
class BranchState:
    fixed: dict[int, int]
    budget_halves: int
    depth: int = 0
    parent_cost: int | None = None


@dataclass
class SearchStats:
    nodes: int = 0
    max_depth: int = 0
    root_relaxed: int | None = None
    root_feasible: bool = True
    solutions: list[int] = field(default_factory=list)
    # (relaxed cost in half-units, augmenting paths) for every node evaluated
    relaxations: list[tuple[int, int]] = field(default_factory=list)


def solve_fpt(
    inst: VcspInstance,
    budget_halves: int,
    stats: SearchStats | None = None,
) -> tuple[tuple[int, ...], int] | None:
    """Minimum-cost integral assignment if its cost is at most ``budget_halves``.

    Depth-first branching on the relaxation: every nonzero value of the
    extreme relaxed optimum is adopted, then the lowest-index relaxed variable
    is branched on its k values.  Each child raises the relaxed optimum by at
    least one half-unit, so the tree has depth at most the relaxation gap.
    """
    if budget_halves < 0:
        raise ValueError("budget must be non-negative")
    stats = SearchStats() if stats is None else stats
    relax = Relaxation(inst, inst.crisp_weight(budget_halves))
    best: tuple[tuple[int, ...], int] | None = None
    bound = budget_halves

    stack = [BranchState({}, budget_halves)]
    while stack:
        state = stack.pop()
        stats.nodes += 1
        stats.max_depth = max(stats.max_depth, state.depth)
        res = relax.solve(state.fixed)
        stats.relaxations.append((res.cost, res.augmentations))
        if state.parent_cost is None:
            stats.root_relaxed = res.cost
            stats.root_feasible = res.feasible
        elif res.cost <= state.parent_cost:
            raise InvariantViolation(
                f"branch did not raise the relaxed optimum ({state.parent_cost} -> {res.cost})"
            )
        if not res.feasible or res.cost > bound:
            continue
        fixed = dict(state.fixed)
        for v, a in enumerate(res.assignment):
            if a:
                if fixed.get(v, a) != a:
                    raise InvariantViolation(f"relaxed optimum contradicts fix on variable {v}")
                fixed[v] = a
        zeros = [v for v in range(inst.n) if v not in fixed]
        if not zeros:
            best = (res.assignment, res.cost)
            stats.solutions.append(res.cost)
            bound = res.cost - 1
            continue
        if res.cost >= bound:
            # every child costs at least one more half-unit
            continue
        v = zeros[0]
        for d in range(inst.k, 0, -1):
            child = dict(fixed)
            child[v] = d
            stack.append(BranchState(child, bound, state.depth + 1, res.cost))
    return best
