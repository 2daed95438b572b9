"""Encoding graph and satisfiability problems as basic k-submodular instances.

Every ``encode_*`` function returns the instance together with a
:class:`ReductionMap`; :func:`decode` turns an integral solver assignment into
a problem-level :class:`Certificate`, and :func:`verify_certificate` checks a
certificate against the original problem without looking at the encoding.

Conventions: vertices and variables are 0-based; literal ``+(i+1)`` is
variable ``i`` and ``-(i+1)`` its negation; the value 2 means "true" / "in the
cover" and 1 means "false" / "not in the cover".
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence, Union

from .core import Constraint, VcspInstance, hard_constant, permutation, soft_or, unary

FALSE, TRUE = 1, 2


class CertificateError(ValueError):
    pass


# ---------------------------------------------------------------------------
# problems


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int, int], ...] = ()  # (u, v, weight)

    def __post_init__(self):
        edges = tuple((int(u), int(v), int(w)) for u, v, w in (_weighted(e) for e in self.edges))
        for u, v, w in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) out of range for n={self.n}")
            if w <= 0:
                raise ValueError("edge weights must be positive")
        object.__setattr__(self, "edges", edges)


def _weighted(e):
    return (e[0], e[1], e[2] if len(e) > 2 else 1)


@dataclass(frozen=True)
class Clause:
    literals: tuple[int, ...]
    weight: int = 1
    crisp: bool = False

    def satisfied(self, truth: Sequence[bool]) -> bool:
        return any(truth[abs(l) - 1] == (l > 0) for l in self.literals)


@dataclass(frozen=True)
class Cnf2:
    n: int
    clauses: tuple[Clause, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(self.clauses))
        for c in self.clauses:
            if not 1 <= len(c.literals) <= 2:
                raise ValueError(f"clause {c.literals} must have one or two literals")
            for l in c.literals:
                if l == 0 or abs(l) > self.n:
                    raise ValueError(f"literal {l} out of range for {self.n} variables")
            if c.weight <= 0:
                raise ValueError("clause weights must be positive")


@dataclass(frozen=True)
class VertexCover:
    graph: Graph


@dataclass(frozen=True)
class Almost2SatClause:
    cnf: Cnf2


@dataclass(frozen=True)
class Almost2SatVar:
    cnf: Cnf2
    costs: tuple[int, ...]  # deletion cost per variable

    def __post_init__(self):
        object.__setattr__(self, "costs", tuple(self.costs))
        if len(self.costs) != self.cnf.n or any(c <= 0 for c in self.costs):
            raise ValueError("need one positive deletion cost per variable")


@dataclass(frozen=True)
class UlcEdge:
    n: int
    k: int
    edges: tuple[tuple[int, int, int, tuple[int, ...]], ...]  # (u, v, w, perm): label(v) = perm(label(u))

    def __post_init__(self):
        edges = tuple((u, v, w, tuple(p)) for u, v, w, p in self.edges)
        for u, v, w, p in edges:
            if not (0 <= u < self.n and 0 <= v < self.n) or u == v:
                raise ValueError(f"edge ({u},{v}) must join two distinct vertices in range")
            if sorted(p) != list(range(1, self.k + 1)):
                raise ValueError(f"{p} is not a permutation of 1..{self.k}")
            if w <= 0:
                raise ValueError("edge weights must be positive")
        object.__setattr__(self, "edges", edges)


@dataclass(frozen=True)
class MultiwayCutEdge:
    graph: Graph
    terminals: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "terminals", tuple(self.terminals))
        if not self.terminals:
            raise ValueError("at least one terminal is required")
        if len(set(self.terminals)) != len(self.terminals):
            raise ValueError("terminals must be distinct")
        if any(not 0 <= t < self.graph.n for t in self.terminals):
            raise ValueError("terminal out of range")


Problem = Union[VertexCover, Almost2SatClause, Almost2SatVar, UlcEdge, MultiwayCutEdge]


@dataclass(frozen=True)
class ReductionMap:
    kind: str
    # for variable deletion: occurrence variables and (y, z) pair per original variable
    occurrences: tuple[tuple[int, ...], ...] = ()
    guards: tuple[tuple[int, int] | None, ...] = ()


@dataclass(frozen=True)
class Certificate:
    kind: str
    cost: int  # problem units
    deleted: tuple[int, ...] = ()  # vertices, clause indices, variables or edge indices
    labels: tuple[int, ...] | None = None  # truth values (0/1) or vertex labels

    def describe(self) -> dict:
        out = {"kind": self.kind, "cost": self.cost, "deleted": list(self.deleted)}
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out


# ---------------------------------------------------------------------------
# encoders


def encode_vertex_cover(g: Graph) -> tuple[VcspInstance, ReductionMap]:
    cons: list[Constraint] = [unary(v, [0, 1]) for v in range(g.n)]
    seen = set()
    for u, v, _ in g.edges:
        if u == v:
            cons.append(hard_constant(v, TRUE, 2, crisp=True))
            continue
        key = (min(u, v), max(u, v))
        if key not in seen:
            seen.add(key)
            cons.append(soft_or(key[0], key[1], TRUE, TRUE, crisp=True))
    return VcspInstance(2, g.n, cons), ReductionMap("vc")


def _value(lit: int) -> int:
    return TRUE if lit > 0 else FALSE


def _normal_literals(lits: Sequence[int]) -> tuple[int, ...] | None:
    """Deduplicated literals, or None for a tautology."""
    out = tuple(dict.fromkeys(lits))
    if len(out) == 2 and out[0] == -out[1]:
        return None
    return out


def _clause_constraint(lits: tuple[int, ...], vars_: Sequence[int], weight: int, crisp: bool) -> Constraint:
    if len(lits) == 1:
        return hard_constant(vars_[0], _value(lits[0]), 2, weight, crisp)
    return soft_or(vars_[0], vars_[1], _value(lits[0]), _value(lits[1]), weight, crisp)


def encode_a2sat_clause(f: Cnf2) -> tuple[VcspInstance, ReductionMap]:
    cons = []
    for c in f.clauses:
        lits = _normal_literals(c.literals)
        if lits is None:
            continue
        cons.append(_clause_constraint(lits, [abs(l) - 1 for l in lits], c.weight, c.crisp))
    return VcspInstance(2, f.n, cons), ReductionMap("a2sat-clause")


def _implication(a: int, b: int, weight: int = 1, crisp: bool = False) -> Constraint:
    """``a -> b`` on Boolean variables, i.e. the clause (not a or b)."""
    return soft_or(a, b, FALSE, TRUE, weight, crisp)


def encode_a2sat_var(f: Cnf2, costs: Sequence[int]) -> tuple[VcspInstance, ReductionMap]:
    """Variable deletion: every occurrence becomes its own variable.

    Occurrences of ``v`` are tied together through ``v(i) -> y``,
    ``y -> z`` and ``z -> v(i)``; only ``y -> z`` is soft, so paying ``v``'s
    deletion cost once frees all of its occurrences.
    """
    problem = Almost2SatVar(f, tuple(costs))
    n_vars = 0
    occ: list[list[int]] = [[] for _ in range(f.n)]
    cons: list[Constraint] = []
    for c in f.clauses:
        lits = _normal_literals(c.literals)
        if lits is None:
            continue
        vars_ = []
        for l in lits:
            vars_.append(n_vars)
            occ[abs(l) - 1].append(n_vars)
            n_vars += 1
        cons.append(_clause_constraint(lits, vars_, 1, True))
    guards: list[tuple[int, int] | None] = []
    for v in range(f.n):
        if len(occ[v]) < 2:
            guards.append(None)
            continue
        y, z = n_vars, n_vars + 1
        n_vars += 2
        guards.append((y, z))
        for o in occ[v]:
            cons.append(_implication(o, y, crisp=True))
            cons.append(_implication(z, o, crisp=True))
        cons.append(_implication(y, z, problem.costs[v]))
    return VcspInstance(2, n_vars, cons), ReductionMap("a2sat-var", tuple(map(tuple, occ)), tuple(guards))


def encode_ulc_edge(p: UlcEdge) -> tuple[VcspInstance, ReductionMap]:
    cons = [permutation(u, v, perm, w) for u, v, w, perm in p.edges]
    return VcspInstance(p.k, p.n, cons), ReductionMap("ulc")


def encode_multiway_cut_edge(p: MultiwayCutEdge) -> tuple[VcspInstance, ReductionMap]:
    k = len(p.terminals)
    identity = tuple(range(1, k + 1))
    cons: list[Constraint] = [permutation(u, v, identity, w) for u, v, w in p.graph.edges if u != v]
    cons += [hard_constant(t, i + 1, k, crisp=True) for i, t in enumerate(p.terminals)]
    return VcspInstance(k, p.graph.n, cons), ReductionMap("multiway")


def encode(problem: Problem) -> tuple[VcspInstance, ReductionMap]:
    if isinstance(problem, VertexCover):
        return encode_vertex_cover(problem.graph)
    if isinstance(problem, Almost2SatClause):
        return encode_a2sat_clause(problem.cnf)
    if isinstance(problem, Almost2SatVar):
        return encode_a2sat_var(problem.cnf, problem.costs)
    if isinstance(problem, UlcEdge):
        return encode_ulc_edge(problem)
    if isinstance(problem, MultiwayCutEdge):
        return encode_multiway_cut_edge(problem)
    raise TypeError(f"unknown problem type {type(problem).__name__}")


# ---------------------------------------------------------------------------
# decoding


def _require_integral(phi: Sequence[int]) -> None:
    if any(a == 0 for a in phi):
        raise ValueError("decode needs an integral assignment")


def decode(problem: Problem, rmap: ReductionMap, phi: Sequence[int]) -> Certificate:
    _require_integral(phi)
    if isinstance(problem, VertexCover):
        cover = tuple(v for v in range(problem.graph.n) if phi[v] == TRUE)
        return Certificate("vc", len(cover), cover)
    if isinstance(problem, Almost2SatClause):
        truth = [phi[v] == TRUE for v in range(problem.cnf.n)]
        broken = tuple(i for i, c in enumerate(problem.cnf.clauses) if not c.satisfied(truth))
        cost = sum(problem.cnf.clauses[i].weight for i in broken)
        return Certificate("a2sat-clause", cost, broken, tuple(int(t) for t in truth))
    if isinstance(problem, Almost2SatVar):
        deleted, truth = [], []
        for v in range(problem.cnf.n):
            guard = rmap.guards[v]
            if guard is not None and phi[guard[0]] == TRUE and phi[guard[1]] == FALSE:
                deleted.append(v)
            truth.append(int(bool(rmap.occurrences[v]) and phi[rmap.occurrences[v][0]] == TRUE))
        cost = sum(problem.costs[v] for v in deleted)
        return Certificate("a2sat-var", cost, tuple(deleted), tuple(truth))
    if isinstance(problem, UlcEdge):
        broken = tuple(i for i, (u, v, _, p) in enumerate(problem.edges) if phi[v] != p[phi[u] - 1])
        cost = sum(problem.edges[i][2] for i in broken)
        return Certificate("ulc", cost, broken, tuple(phi))
    if isinstance(problem, MultiwayCutEdge):
        edges = problem.graph.edges
        cut = tuple(i for i, (u, v, _) in enumerate(edges) if phi[u] != phi[v])
        return Certificate("multiway", sum(edges[i][2] for i in cut), cut, tuple(phi))
    raise TypeError(f"unknown problem type {type(problem).__name__}")


# ---------------------------------------------------------------------------
# independent checkers


def _fail(msg: str):
    raise CertificateError(msg)


def verify_certificate(problem: Problem, cert: Certificate) -> int:
    """Check ``cert`` against ``problem``; return its recomputed cost."""
    if isinstance(problem, VertexCover):
        cover = set(cert.deleted)
        for u, v, _ in problem.graph.edges:
            if u not in cover and v not in cover:
                _fail(f"edge ({u},{v}) is not covered")
        cost = len(cover)
    elif isinstance(problem, Almost2SatClause):
        truth = [bool(t) for t in cert.labels or ()]
        if len(truth) != problem.cnf.n:
            _fail("truth assignment has the wrong length")
        dropped = set(cert.deleted)
        for i, c in enumerate(problem.cnf.clauses):
            if i in dropped and c.crisp:
                _fail(f"crisp clause {i} was deleted")
            if i not in dropped and not c.satisfied(truth):
                _fail(f"clause {i} is violated")
        cost = sum(problem.cnf.clauses[i].weight for i in dropped)
    elif isinstance(problem, Almost2SatVar):
        truth = [bool(t) for t in cert.labels or ()]
        if len(truth) != problem.cnf.n:
            _fail("truth assignment has the wrong length")
        dropped = set(cert.deleted)
        for i, c in enumerate(problem.cnf.clauses):
            if any(abs(l) - 1 in dropped for l in c.literals):
                continue
            if not c.satisfied(truth):
                _fail(f"clause {i} is violated")
        cost = sum(problem.costs[v] for v in dropped)
    elif isinstance(problem, UlcEdge):
        labels = cert.labels or ()
        if len(labels) != problem.n or any(not 1 <= a <= problem.k for a in labels):
            _fail("labelling is malformed")
        dropped = set(cert.deleted)
        for i, (u, v, _, p) in enumerate(problem.edges):
            if i not in dropped and labels[v] != p[labels[u] - 1]:
                _fail(f"edge {i} is violated")
        cost = sum(problem.edges[i][2] for i in dropped)
    elif isinstance(problem, MultiwayCutEdge):
        dropped = set(cert.deleted)
        g = problem.graph
        adj: list[list[int]] = [[] for _ in range(g.n)]
        for i, (u, v, _) in enumerate(g.edges):
            if i not in dropped:
                adj[u].append(v)
                adj[v].append(u)
        owner = [-1] * g.n
        for i, t in enumerate(problem.terminals):
            if owner[t] >= 0:
                _fail(f"terminals {problem.terminals[owner[t]]} and {t} are connected")
            owner[t] = i
            queue = deque([t])
            while queue:
                x = queue.popleft()
                for y in adj[x]:
                    if owner[y] == -1:
                        owner[y] = i
                        queue.append(y)
                    elif owner[y] != i:
                        _fail(f"terminals {problem.terminals[owner[y]]} and {t} are connected")
        cost = sum(g.edges[i][2] for i in dropped)
    else:
        raise TypeError(f"unknown problem type {type(problem).__name__}")
    if cost != cert.cost:
        _fail(f"certificate claims cost {cert.cost}, recomputed {cost}")
    return cost
