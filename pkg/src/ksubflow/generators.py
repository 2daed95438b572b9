"""Seeded random instances for tests, property suites and benchmarks."""

from __future__ import annotations

import random

import numpy as np

from .core import Constraint, VcspInstance, permutation, soft_or, unary
from .reductions import Clause, Cnf2, Graph, MultiwayCutEdge, UlcEdge


def random_permutation(rng: random.Random, k: int) -> tuple[int, ...]:
    p = list(range(1, k + 1))
    rng.shuffle(p)
    return tuple(p)


def random_constraint(rng: random.Random, n: int, k: int, crisp_rate: float = 0.15) -> Constraint:
    """A unary, permutation or soft-or constraint on random variables."""
    crisp = rng.random() < crisp_rate
    w = rng.randint(1, 3)
    kind = rng.choice("upo") if n >= 2 else "u"
    if kind == "u":
        return unary(rng.randrange(n), [rng.randint(0, 3) for _ in range(k)], w, crisp)
    x, y = rng.sample(range(n), 2)
    if kind == "p":
        return permutation(x, y, random_permutation(rng, k), w, crisp)
    return soft_or(x, y, rng.randint(1, k), rng.randint(1, k), w, crisp)


def random_instance(
    rng: random.Random, max_n: int = 8, max_k: int = 4, max_m: int = 12, crisp_rate: float = 0.15
) -> VcspInstance:
    n = rng.randint(1, max_n)
    k = rng.randint(1, max_k)
    m = rng.randint(0, max_m)
    return VcspInstance(k, n, [random_constraint(rng, n, k, crisp_rate) for _ in range(m)])


def random_graph(rng: random.Random, n: int, p: float, max_weight: int = 1) -> Graph:
    edges = [
        (u, v, rng.randint(1, max_weight))
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < p
    ]
    return Graph(n, tuple(edges))


def random_cnf2(rng: random.Random, n: int, m: int, max_weight: int = 1, crisp_rate: float = 0.0) -> Cnf2:
    clauses = []
    for _ in range(m):
        width = 1 if n < 2 or rng.random() < 0.25 else 2
        vs = rng.sample(range(1, n + 1), width)
        lits = tuple(v if rng.random() < 0.5 else -v for v in vs)
        clauses.append(Clause(lits, rng.randint(1, max_weight), rng.random() < crisp_rate))
    return Cnf2(n, tuple(clauses))


def random_multiway(rng: random.Random, n: int, p: float, terminals: int, max_weight: int = 3) -> MultiwayCutEdge:
    g = random_graph(rng, n, p, max_weight)
    return MultiwayCutEdge(g, tuple(rng.sample(range(n), terminals)))


def planted_ulc(n: int, m: int, k: int, p: int, seed: int = 0) -> tuple[UlcEdge, np.ndarray]:
    """Edge-deletion ULC with a hidden labelling that breaks exactly ``p`` edges.

    A random spanning tree keeps the graph connected; the remaining edges are
    uniform.  All permutations agree with a random labelling except on ``p``
    random edges, whose permutations are perturbed so that the labelling
    breaks them.  Returns the problem and the planted labels (1..k).
    """
    if m < n - 1:
        raise ValueError("need at least n-1 edges for a connected graph")
    if p > m or (p and k < 2):
        raise ValueError("cannot break that many edges")
    rng = np.random.default_rng(seed)
    labels = rng.integers(1, k + 1, size=n)
    order = rng.permutation(n)
    tails = np.empty(m, dtype=np.int64)
    heads = np.empty(m, dtype=np.int64)
    # spanning tree: attach order[i] to a random earlier vertex
    if n > 1:
        tails[: n - 1] = order[(rng.random(n - 1) * np.arange(1, n)).astype(np.int64)]
        heads[: n - 1] = order[1:]
    extra = m - (n - 1)
    u = rng.integers(0, n, size=extra)
    v = (u + rng.integers(1, n, size=extra)) % n
    tails[n - 1 :] = u
    heads[n - 1 :] = v
    flip = rng.random(m) < 0.5
    tails[flip], heads[flip] = heads[flip], tails[flip].copy()

    # random permutation per edge with perm[label(u)] = label(v)
    base = np.argsort(rng.random((m, k)), axis=1) + 1
    lu, lv = labels[tails], labels[heads]
    rows = np.arange(m)
    cur = base[rows, lu - 1]
    where = np.argmax(base == lv[:, None], axis=1)
    base[rows, where] = cur
    base[rows, lu - 1] = lv
    broken = rng.choice(m, size=p, replace=False)
    for e in broken.tolist():
        a = int(lu[e]) - 1
        b = int(rng.integers(0, k - 1))
        b = b + 1 if b >= a else b
        base[e, a], base[e, b] = base[e, b], base[e, a]
    edges = tuple(zip(tails.tolist(), heads.tolist(), [1] * m, map(tuple, base.tolist())))
    return UlcEdge(n, k, edges), labels
