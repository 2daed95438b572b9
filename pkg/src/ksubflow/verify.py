"""Desk-scale property suites, each checked against exhaustive enumeration."""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import (
    INTEGRAL,
    VcspInstance,
    brute_force_minimize,
    is_extreme,
    is_k_submodular,
    relaxed_cost,
)
from .generators import random_constraint, random_instance
from .network import assemble, build_gadget, cut_capacity, cut_of_assignment, cut_value, normalise
from .solver import SearchStats, minimize, solve_fpt


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def _timed(name: str, fn: Callable[[], tuple[bool, str]]) -> CheckResult:
    t0 = time.perf_counter()
    ok, detail = fn()
    return CheckResult(name, ok, detail, time.perf_counter() - t0)


def _single(rng: random.Random, family: str, k: int):
    """One constraint of the given family on variables 0 (and 1)."""
    while True:
        c = random_constraint(rng, 2, k, crisp_rate=0.0)
        if type(c).__name__ == family:
            return c


FAMILIES = ("Unary", "Permutation", "SoftOr")


def gadget_representation(rng: random.Random, trials: int = 50, max_k: int = 5) -> tuple[bool, str]:
    """Cut value of ``S_φ`` equals the relaxed cost of ``φ`` for every ``φ``."""
    checked = 0
    for family in FAMILIES:
        for _ in range(trials):
            k = rng.randint(1 if family == "Unary" else 2, max_k)
            c = _single(rng, family, k)
            net = build_gadget(c, k)
            n = max(c.scope) + 1
            for args in itertools.product(range(k + 1), repeat=c.arity):
                phi = [0] * n
                for v, a in zip(c.scope, args):
                    phi[v] = a
                got = cut_value(net, cut_of_assignment(phi, k))
                want = relaxed_cost(c, args)
                if got != want:
                    return False, f"{c}: φ={args} cut {got} != cost {want}"
                checked += 1
    return True, f"{checked} assignments"


def _all_cuts(num_vertices: int):
    inner = range(2, num_vertices)
    for r in range(len(inner) + 1):
        for xs in itertools.combinations(inner, r):
            yield frozenset((0,) + xs)


def network_submodularity(rng: random.Random, samples: int = 10_000, max_k: int = 4) -> tuple[bool, str]:
    """Normalising a cut never increases its capacity."""
    exhaustive = 0
    for family in FAMILIES:
        for k in range(1 if family == "Unary" else 2, max_k + 1):
            for _ in range(3):
                net = build_gadget(_single(rng, family, k), k)
                for cut in _all_cuts(net.num_vertices):
                    if cut_capacity(net, cut) < cut_capacity(net, normalise(cut, k)):
                        return False, f"{family} k={k}: cut {sorted(cut)} beats its normalisation"
                    exhaustive += 1
    sampled = 0
    while sampled < samples:
        inst = random_instance(rng, max_n=6, max_k=max_k, max_m=10)
        net = assemble(inst)
        inner = np.arange(2, net.num_vertices)
        for _ in range(100):
            cut = frozenset([0] + inner[rng_mask(rng, len(inner))].tolist())
            if cut_capacity(net, cut) < cut_capacity(net, normalise(cut, inst.k)):
                return False, f"assembled network: cut {sorted(cut)} beats its normalisation"
            sampled += 1
    return True, f"{exhaustive} exhaustive cuts, {sampled} sampled cuts"


def rng_mask(rng: random.Random, size: int) -> np.ndarray:
    return np.array([rng.random() < 0.5 for _ in range(size)], dtype=bool)


def _instances(rng: random.Random, trials: int) -> list[VcspInstance]:
    return [random_instance(rng) for _ in range(trials)]


def extreme_minimum(rng: random.Random, trials: int = 200) -> tuple[bool, str]:
    for i, inst in enumerate(_instances(rng, trials)):
        res = minimize(inst)
        best, mins = brute_force_minimize(inst)
        if res.cost != best:
            return False, f"instance {i}: flow value {res.cost} != brute force {best}"
        if res.assignment not in set(mins) or not is_extreme(res.assignment, mins):
            return False, f"instance {i}: {res.assignment} is not an extreme minimiser"
    return True, f"{trials} instances"


def persistence(rng: random.Random, trials: int = 200) -> tuple[bool, str]:
    for i, inst in enumerate(_instances(rng, trials)):
        res = minimize(inst)
        fixed = {v: a for v, a in enumerate(res.assignment) if a}
        opt, _ = brute_force_minimize(inst, INTEGRAL)
        kept, _ = brute_force_minimize(inst, INTEGRAL, fixed=fixed)
        if kept != opt:
            return False, f"instance {i}: fixing {fixed} raises the optimum {opt} -> {kept}"
    return True, f"{trials} instances"


def fpt_branching(rng: random.Random, trials: int = 200) -> tuple[bool, str]:
    worst = 0.0
    for i, inst in enumerate(_instances(rng, trials)):
        opt, _ = brute_force_minimize(inst, INTEGRAL)
        if opt >= inst.crisp_weight():
            if solve_fpt(inst, inst.soft_total_halves()) is not None:
                return False, f"instance {i}: solution reported for an infeasible instance"
            continue
        relaxed, _ = brute_force_minimize(inst, crisp_weight=inst.crisp_weight(opt))
        stats = SearchStats()
        sol = solve_fpt(inst, opt, stats)
        if sol is None or sol[1] != opt:
            return False, f"instance {i}: solver returned {sol}, optimum is {opt}"
        bound = inst.k ** (opt - relaxed + 1)
        if stats.nodes > bound:
            return False, f"instance {i}: {stats.nodes} nodes exceed {bound}"
        worst = max(worst, stats.nodes / bound)
    return True, f"{trials} instances, worst node ratio {worst:.2f}"


def k_submodularity(rng: random.Random, trials: int = 20, max_k: int = 4) -> tuple[bool, str]:
    for family in FAMILIES:
        for _ in range(trials):
            k = rng.randint(1 if family == "Unary" else 2, max_k)
            c = _single(rng, family, k)
            if not is_k_submodular(c, k):
                return False, f"{c} is not k-submodular"
    return True, f"{trials * len(FAMILIES)} constraints"


SUITES = {
    "gadgets": gadget_representation,
    "k-submodularity": k_submodularity,
    "network-submodularity": network_submodularity,
    "extremeness": extreme_minimum,
    "persistence": persistence,
    "fpt": fpt_branching,
}


def run_all(seed: int = 0, names: list[str] | None = None) -> list[CheckResult]:
    out = []
    for name in names or list(SUITES):
        rng = random.Random(f"{seed}:{name}")
        out.append(_timed(name, lambda: SUITES[name](rng)))
    return out
