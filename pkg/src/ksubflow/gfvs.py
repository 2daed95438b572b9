"""Group Feedback Vertex Set at desk scale.

A group-labelled graph carries a group element ``λ(u,v)`` on every directed
edge, with ``λ(v,u) = λ(u,v)⁻¹``.  A labelling ``φ`` is consistent when
``φ(v) = φ(u)·λ(u,v)`` on every edge; a cycle is non-null when the product of
its labels is not the identity.  GFVS asks for a smallest vertex set whose
deletion leaves a consistently labellable graph.

The relaxation works on vertex weights ``z`` in half-units {0, 1, 2} after
all assigned vertices are merged into one root ``t`` with label identity:
``z`` is feasible ("double-path-hitting") when every pair of root-to-``v``
paths with different labels has length at least one unit, where the length
counts internal vertices of both paths (shared ones twice) plus ``v``.
Feasibility is decided by a shortest-path separation oracle and the optimum
is found by exhaustive search over half-integral weights.
"""

from __future__ import annotations

import heapq
import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Mapping, Sequence

from .flow import InvariantViolation

Element = Hashable


# ---------------------------------------------------------------------------
# groups


class Group:
    """Oracle access to a group: identity, product, inverse and equality."""

    def identity(self) -> Element:
        raise NotImplementedError

    def multiply(self, a: Element, b: Element) -> Element:
        raise NotImplementedError

    def invert(self, a: Element) -> Element:
        raise NotImplementedError

    def equal(self, a: Element, b: Element) -> bool:
        return a == b

    def is_identity(self, a: Element) -> bool:
        return self.equal(a, self.identity())

    def product(self, items: Iterable[Element]) -> Element:
        acc = self.identity()
        for x in items:
            acc = self.multiply(acc, x)
        return acc

    def parse(self, token: str) -> Element:
        raise NotImplementedError

    def format(self, a: Element) -> str:
        raise NotImplementedError

    def header(self) -> str:
        raise NotImplementedError

    def random_element(self, rng: random.Random) -> Element:
        raise NotImplementedError


@dataclass(frozen=True)
class CyclicGroup(Group):
    """Z_q under addition; elements are residues 0..q-1."""

    q: int

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("cyclic group order must be positive")

    def identity(self):
        return 0

    def multiply(self, a, b):
        return (a + b) % self.q

    def invert(self, a):
        return (-a) % self.q

    def parse(self, token):
        a = int(token)
        if not 0 <= a < self.q:
            raise ValueError(f"residue {a} outside 0..{self.q - 1}")
        return a

    def format(self, a):
        return str(a)

    def header(self):
        return f"z {self.q}"

    def random_element(self, rng):
        return rng.randrange(self.q)


@dataclass(frozen=True)
class Z2Power(Group):
    """Z_2^m; elements are bit masks below 2^m, the product is xor."""

    m: int

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("negative exponent")

    def identity(self):
        return 0

    def multiply(self, a, b):
        return a ^ b

    def invert(self, a):
        return a

    def parse(self, token):
        a = int(token, 16)
        if not 0 <= a < (1 << self.m):
            raise ValueError(f"mask {token} wider than {self.m} bits")
        return a

    def format(self, a):
        return format(a, "x")

    def header(self):
        return f"z2pow {self.m}"

    def random_element(self, rng):
        return rng.getrandbits(self.m) if self.m else 0


@dataclass(frozen=True)
class PermutationGroup(Group):
    """Symmetric group on 1..k; elements are one-line tuples.

    ``multiply(a, b)`` applies ``a`` first and then ``b``, so that labels
    compose along a path from left to right.
    """

    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("permutation degree must be positive")

    def identity(self):
        return tuple(range(1, self.k + 1))

    def multiply(self, a, b):
        return tuple(b[x - 1] for x in a)

    def invert(self, a):
        out = [0] * self.k
        for i, x in enumerate(a):
            out[x - 1] = i + 1
        return tuple(out)

    def parse(self, token):
        a = tuple(int(x) for x in token.replace(",", " ").split())
        if sorted(a) != list(range(1, self.k + 1)):
            raise ValueError(f"{token} is not a permutation of 1..{self.k}")
        return a

    def format(self, a):
        return " ".join(map(str, a))

    def header(self):
        return f"perm {self.k}"

    def random_element(self, rng):
        a = list(range(1, self.k + 1))
        rng.shuffle(a)
        return tuple(a)


def parse_group(tokens: Sequence[str]) -> Group:
    """Group from a header fragment such as ``z 5``, ``z2pow 12`` or ``perm 4``."""
    if len(tokens) != 2:
        raise ValueError(f"group header needs a name and a size, got {' '.join(tokens)!r}")
    name, size = tokens[0], int(tokens[1])
    if name == "z":
        return CyclicGroup(size)
    if name == "z2pow":
        return Z2Power(size)
    if name == "perm":
        return PermutationGroup(size)
    raise ValueError(f"unknown group {name!r}")


# ---------------------------------------------------------------------------
# labelled graphs


@dataclass
class LabelledGraph:
    """Undirected multigraph with ``edges[i] = (u, v, λ(u,v))``; self-loops allowed."""

    n: int
    group: Group
    edges: list[tuple[int, int, Element]] = field(default_factory=list)

    def __post_init__(self):
        self.edges = list(self.edges)
        self.adj: list[list[tuple[int, Element, int]]] = [[] for _ in range(self.n)]
        for i, (u, v, g) in enumerate(self.edges):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) out of range for n={self.n}")
            self.adj[u].append((v, g, i))
            self.adj[v].append((u, self.group.invert(g), i))

    def label(self, eid: int, frm: int) -> Element:
        """Label of edge ``eid`` traversed starting at ``frm``."""
        u, v, g = self.edges[eid]
        if frm == u:
            return g
        if frm == v:
            return self.group.invert(g)
        raise ValueError(f"vertex {frm} is not on edge {eid}")

    def other(self, eid: int, frm: int) -> int:
        u, v, _ = self.edges[eid]
        return v if frm == u else u

    def without(self, deleted: Iterable[int]) -> "LabelledGraph":
        """Same vertex ids, edges touching ``deleted`` removed."""
        gone = set(deleted)
        return LabelledGraph(self.n, self.group, [e for e in self.edges if e[0] not in gone and e[1] not in gone])

    def walk_label(self, start: int, eids: Sequence[int]) -> Element:
        acc, x = self.group.identity(), start
        for e in eids:
            acc = self.group.multiply(acc, self.label(e, x))
            x = self.other(e, x)
        return acc


@dataclass(frozen=True)
class Walk:
    """Vertex sequence with the edges joining consecutive vertices."""

    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    def label(self, g: LabelledGraph) -> Element:
        return g.walk_label(self.vertices[0], self.edges)


@dataclass(frozen=True)
class Consistency:
    labelling: tuple[Element, ...] | None
    witness: Walk | None = None  # non-null cycle, or a path between two seeds
    kind: str = ""  # "cycle" or "path" when inconsistent

    @property
    def ok(self) -> bool:
        return self.labelling is not None


def _tree_path(x: int, parent_edge: list[int], g: LabelledGraph) -> tuple[list[int], list[int]]:
    """Vertices and edges from the BFS root down to ``x``."""
    vs, es = [x], []
    while parent_edge[x] >= 0:
        e = parent_edge[x]
        es.append(e)
        x = g.other(e, x)
        vs.append(x)
    return vs[::-1], es[::-1]


def check_consistent(g: LabelledGraph, roots: Mapping[int, Element] | None = None) -> Consistency:
    """Consistent labelling extending ``roots``, or an obstruction.

    Breadth-first propagation from the seeds, then from the lowest-index
    unlabelled vertex of every remaining component (labelled identity).  A
    conflict inside one search tree yields a non-null cycle; a conflict
    between trees of two different seeds yields a path whose label disagrees
    with the seeds.
    """
    roots = dict(roots or {})
    grp = g.group
    label: list[Element | None] = [None] * g.n
    parent_edge = [-1] * g.n
    origin = [-1] * g.n

    def bfs(seeds: list[int]) -> Consistency | None:
        queue = deque(seeds)
        while queue:
            x = queue.popleft()
            for y, lam, e in g.adj[x]:
                want = grp.multiply(label[x], lam)
                if label[y] is None:
                    label[y] = want
                    parent_edge[y] = e
                    origin[y] = origin[x]
                    queue.append(y)
                elif not grp.equal(label[y], want):
                    return _obstruction(x, y, e)
        return None

    def _obstruction(x: int, y: int, e: int) -> Consistency:
        vx, ex = _tree_path(x, parent_edge, g)
        vy, ey = _tree_path(y, parent_edge, g)
        if origin[x] != origin[y]:
            return Consistency(None, Walk(tuple(vx + vy[::-1]), tuple(ex + [e] + ey[::-1])), "path")
        i = 0
        while i + 1 < min(len(vx), len(vy)) and vx[i + 1] == vy[i + 1] and ex[i] == ey[i]:
            i += 1
        cyc_v = vx[i:] + vy[i:][::-1]
        cyc_e = ex[i:] + [e] + ey[i:][::-1]
        return Consistency(None, Walk(tuple(cyc_v), tuple(cyc_e)), "cycle")

    seeds = sorted(roots)
    for v in seeds:
        if not 0 <= v < g.n:
            raise ValueError(f"seed {v} out of range")
        label[v] = roots[v]
        origin[v] = v
    bad = bfs(seeds)
    if bad:
        return bad
    for v in range(g.n):
        if label[v] is None:
            label[v] = grp.identity()
            origin[v] = v
            bad = bfs([v])
            if bad:
                return bad
    return Consistency(tuple(label))


# ---------------------------------------------------------------------------
# merging assigned vertices into a root


@dataclass
class MergedGraph:
    graph: LabelledGraph  # vertex ids as in the original, plus the root
    root: int
    conflicts: list[int]  # original edges between assigned vertices with a non-identity loop label
    assigned: dict[int, Element]
    deleted: frozenset[int]

    @property
    def free(self) -> list[int]:
        """Vertices that are neither assigned nor deleted (excludes the root)."""
        return [v for v in range(self.root) if v not in self.assigned and v not in self.deleted]


def merge_assigned(
    g: LabelledGraph, assigned: Mapping[int, Element], deleted: Iterable[int] = ()
) -> MergedGraph:
    """Contract all assigned vertices into a new root ``t = n`` with label identity.

    An edge ``(u, v)`` with ``u`` assigned ``φ(u)`` becomes ``(t, v)`` with
    label ``φ(u)·λ(u,v)``.  Edges between two assigned vertices become loops
    at ``t``; identity loops are dropped and the others are reported in
    ``conflicts`` (they are kept in the graph as non-null loops).
    """
    grp = g.group
    deleted = frozenset(deleted)
    assigned = dict(assigned)
    both = deleted.intersection(assigned)
    if both:
        raise ValueError(f"vertices {sorted(both)} are both assigned and deleted")
    t = g.n
    edges = []
    conflicts = []
    for i, (u, v, lam) in enumerate(g.edges):
        if u in deleted or v in deleted:
            continue
        au, av = u in assigned, v in assigned
        if au and av:
            loop = grp.multiply(grp.multiply(assigned[u], lam), grp.invert(assigned[v]))
            if grp.is_identity(loop):
                continue
            conflicts.append(i)
            edges.append((t, t, loop))
        elif au:
            edges.append((t, v, grp.multiply(assigned[u], lam)))
        elif av:
            edges.append((u, t, grp.multiply(lam, grp.invert(assigned[v]))))
        else:
            edges.append((u, v, lam))
    return MergedGraph(LabelledGraph(t + 1, grp, edges), t, conflicts, assigned, deleted)


# ---------------------------------------------------------------------------
# separation oracle


@dataclass(frozen=True, order=True)
class LexWeight:
    """Half-unit weight with a perturbation compared second."""

    halves: int
    perturbation: int = 0

    def __add__(self, other: "LexWeight") -> "LexWeight":
        return LexWeight(self.halves + other.halves, self.perturbation + other.perturbation)


@dataclass(frozen=True)
class DoublePathWitness:
    path_a: Walk
    path_b: Walk
    length: LexWeight

    @property
    def endpoint(self) -> int:
        return self.path_a.vertices[-1]

    def vertices(self) -> set[int]:
        """Vertices whose weight counts towards the length (the root never does)."""
        return set(self.path_a.vertices[1:]) | set(self.path_b.vertices[1:])


@dataclass
class ShortestPaths:
    dist: list[int | None]  # internal half-unit length of the shortest path
    pert: list[int | None]
    psi: list[Element | None]  # label of the shortest path
    pred_edge: list[int]


def _weight(z: Sequence[int], root: int, x: int) -> tuple[int, int]:
    return (0, 0) if x == root else (z[x], 1 << x)


def shortest_paths(m: MergedGraph | LabelledGraph, root: int, z: Sequence[int]) -> ShortestPaths:
    """Dijkstra from ``root`` under perturbed weights ``(z_x, 2^x)`` of internal vertices.

    Perturbation makes shortest paths unique; a tie between two distinct
    predecessors is reported as an invariant violation.  Parallel edges from
    the same predecessor give equal keys and are not ties of paths.
    """
    g = m.graph if isinstance(m, MergedGraph) else m
    grp = g.group
    n = g.n
    dist: list[int | None] = [None] * n
    pert: list[int | None] = [None] * n
    psi: list[Element | None] = [None] * n
    pred_edge = [-1] * n
    pred = [-1] * n
    done = [False] * n
    best: dict[int, tuple[int, int]] = {root: (0, 0)}
    dist[root], pert[root], psi[root] = 0, 0, grp.identity()
    heap = [(0, 0, root)]
    while heap:
        h, p, x = heapq.heappop(heap)
        if done[x] or best[x] != (h, p):
            continue
        done[x] = True
        wh, wp = _weight(z, root, x)
        for y, lam, e in g.adj[x]:
            if done[y]:
                continue
            key = (h + wh, p + wp)
            cur = best.get(y)
            if cur is None or key < cur:
                best[y] = key
                pred[y], pred_edge[y] = x, e
                dist[y], pert[y] = key
                psi[y] = grp.multiply(psi[x], lam)
                heapq.heappush(heap, (key[0], key[1], y))
            elif key == cur and pred[y] != x:
                raise InvariantViolation(f"two shortest paths to {y} with equal perturbed length")
    return ShortestPaths(dist, pert, psi, pred_edge)


def _path_to(sp: ShortestPaths, g: LabelledGraph, v: int) -> tuple[list[int], list[int]]:
    return _tree_path(v, sp.pred_edge, g)


def shortest_double_path(
    m: MergedGraph | LabelledGraph,
    root: int,
    z: Sequence[int],
    log: list | None = None,
) -> DoublePathWitness | None:
    """Shortest double path of length below one unit, if any.

    ``z`` holds half-unit weights indexed by vertex (the root's is ignored).
    A violation exists iff some edge ``(v, v')`` has ``ψ(v)·λ(v,v') ≠ ψ(v')``
    and ``d(v)+z(v)+d(v')+z(v') < 2`` half-units, where ``d`` and ``ψ`` are
    the length and label of the unique shortest path.  The first path of the
    witness is the shortest path to ``v`` extended by the edge, so when the
    edge closes a loop onto that path it is a walk rather than a path.
    """
    g = m.graph if isinstance(m, MergedGraph) else m
    if not 0 <= root < g.n:
        raise ValueError(f"root {root} missing from the graph")
    if len(z) < g.n:
        raise ValueError("need a weight for every vertex")
    grp = g.group
    sp = shortest_paths(g, root, z)
    best = None
    for e, (u, v, lam) in enumerate(g.edges):
        if sp.dist[u] is None or sp.dist[v] is None:
            continue
        if grp.equal(grp.multiply(sp.psi[u], lam), sp.psi[v]):
            continue
        wu, wv = _weight(z, root, u), _weight(z, root, v)
        halves = sp.dist[u] + wu[0] + sp.dist[v] + wv[0]
        if halves >= 2:
            continue
        length = LexWeight(halves, sp.pert[u] + wu[1] + sp.pert[v] + wv[1])
        # end the double path at the endpoint listed second in the edge
        if best is None or (length, e) < best[:2]:
            best = (length, e, u, v)
    witness = None
    if best is not None:
        length, e, u, v = best
        va, ea = _path_to(sp, g, u)
        vb, eb = _path_to(sp, g, v)
        witness = DoublePathWitness(Walk(tuple(va + [v]), tuple(ea + [e])), Walk(tuple(vb), tuple(eb)), length)
    if log is not None:
        log.append((g, root, tuple(z), witness is not None))
    return witness


def is_hitting(m: MergedGraph | LabelledGraph, root: int, z: Sequence[int]) -> bool:
    return shortest_double_path(m, root, z) is None


# ---------------------------------------------------------------------------
# reference oracles by exhaustive enumeration


def simple_cycles(g: LabelledGraph) -> list[Walk]:
    """Every simple cycle once, as a closed walk starting at its smallest vertex.

    Loops are cycles of length one and two parallel edges form a cycle of
    length two.
    """
    out: list[Walk] = []
    seen: set[frozenset[int]] = set()
    for s in range(g.n):
        stack = [(s, [s], [])]
        while stack:
            x, vs, es = stack.pop()
            for y, _, e in g.adj[x]:
                if e in es:
                    continue
                if y == s:
                    key = frozenset(es + [e])
                    if key not in seen:
                        seen.add(key)
                        out.append(Walk(tuple(vs + [s]), tuple(es + [e])))
                elif y > s and y not in vs:
                    stack.append((y, vs + [y], es + [e]))
    return out


def plain_distances(g: LabelledGraph, root: int, z: Sequence[int]) -> list[int | None]:
    """Exact internal-weight distances by Bellman-Ford style relaxation."""
    dist: list[int | None] = [None] * g.n
    dist[root] = 0
    changed = True
    while changed:
        changed = False
        for x in range(g.n):
            if dist[x] is None:
                continue
            step = dist[x] + (0 if x == root else z[x])
            for y, _, _ in g.adj[x]:
                if dist[y] is None or step < dist[y]:
                    dist[y] = step
                    changed = True
    return dist


def lollipop_value(
    g: LabelledGraph, root: int, z: Sequence[int], cycles: Sequence[Walk] | None = None
) -> int | None:
    """Minimum of ``z(C) + 2ℓ(u) + z(u)`` over non-null simple cycles ``C`` and ``u ∈ C``."""
    if cycles is None:
        cycles = simple_cycles(g)
    dist = plain_distances(g, root, z)
    zz = [0 if x == root else z[x] for x in range(g.n)]
    best = None
    for c in cycles:
        if g.group.is_identity(c.label(g)):
            continue
        body = c.vertices[:-1]
        zc = sum(zz[x] for x in body)
        for u in body:
            if dist[u] is None:
                continue
            val = zc + 2 * dist[u] + zz[u]
            if best is None or val < best:
                best = val
    return best


def exhaustive_violation(
    g: LabelledGraph, root: int, z: Sequence[int], cycles: Sequence[Walk] | None = None
) -> bool:
    val = lollipop_value(g, root, z, cycles)
    return val is not None and val < 2


# ---------------------------------------------------------------------------
# relaxation


class RelaxationTooLarge(ValueError):
    pass


@dataclass
class GfvsRelaxation:
    cost: int  # half-units
    z: tuple[int, ...]  # per original vertex; 0 for assigned and deleted vertices
    merged: MergedGraph
    paths: ShortestPaths
    searched: int = 0  # weight vectors tried


def relax_gfvs(
    g: LabelledGraph,
    assigned: Mapping[int, Element] | None = None,
    deleted: Iterable[int] = (),
    log: list | None = None,
    limit: int = 15,
) -> GfvsRelaxation | None:
    """Minimum half-integral double-path-hitting weights; None if infeasible.

    Only free vertices reachable from the root can lie on a double path, so
    the search ranges over those.  Breadth-first over cost levels: from an
    infeasible vector, some vertex of the oracle's witness must be raised by
    half a unit, and every feasible vector above the current one raises at
    least one of them, so every minimiser appears at the optimal level.
    Among minimisers the one with most zeros is returned, ties broken by the
    lexicographically smallest vector.
    """
    merged = merge_assigned(g, assigned or {}, deleted)
    if merged.conflicts:
        return None
    t = merged.root
    mg = merged.graph
    reach = [d is not None for d in plain_distances(mg, t, [0] * mg.n)]
    free = [v for v in merged.free if reach[v]]
    if len(free) > limit:
        raise RelaxationTooLarge(f"{len(free)} free vertices exceed the limit of {limit}")

    full = [0] * mg.n

    def weights(vec: tuple[int, ...]) -> list[int]:
        for v, x in zip(free, vec):
            full[v] = x
        return full

    witness_cache: dict[tuple[int, ...], DoublePathWitness | None] = {}

    def oracle(vec):
        if vec not in witness_cache:
            witness_cache[vec] = shortest_double_path(mg, t, weights(vec), log)
        return witness_cache[vec]

    pos = {v: i for i, v in enumerate(free)}
    level = {tuple([0] * len(free))}
    searched = 0
    while True:
        feasible = []
        nxt = set()
        for vec in level:
            searched += 1
            w = oracle(vec)
            if w is None:
                feasible.append(vec)
                continue
            for x in w.vertices():
                i = pos.get(x)
                if i is not None and vec[i] < 2:
                    nxt.add(vec[:i] + (vec[i] + 1,) + vec[i + 1 :])
        if feasible:
            break
        if not nxt:
            # a witness avoiding every free vertex cannot be hit
            return None
        level = nxt
    best = min(feasible, key=lambda vec: (sum(1 for x in vec if x), vec))
    z = [0] * g.n
    for v, x in zip(free, best):
        z[v] = x
    return GfvsRelaxation(sum(best), tuple(z), merged, shortest_paths(mg, t, weights(best)), searched)


# ---------------------------------------------------------------------------
# branching


@dataclass
class GfvsStats:
    nodes: int = 0
    relax_calls: int = 0
    max_depth: int = 0
    adoptions: int = 0
    measure_drops_on_adoption: int = 0
    solutions: list[int] = field(default_factory=list)


@dataclass
class _Node:
    assigned: dict[int, Element]
    deleted: frozenset[int]
    relax: GfvsRelaxation
    measure: int  # twice the remaining budget minus the relaxed cost, in half-units
    depth: int = 0


def solve_gfvs(
    g: LabelledGraph, k: int, stats: GfvsStats | None = None, log: list | None = None
) -> tuple[int, ...] | None:
    """A minimum deletion set of size at most ``k``, or None.

    Depth-first branch and bound over (assigned, deleted).  At every node the
    relaxation's integral information is adopted (full deletions, and the
    labels of zero-weight vertices reached at distance zero).  A half-weight
    vertex ``v`` is then either assigned the label of its shortest path or
    deleted; if all weights are zero, the lowest free vertex (which then lies
    in a component without assignments) is either deleted or assigned the
    identity.  A child whose measure did not drop is followed without
    branching; the measure never goes negative, so the tree has depth at most
    ``2k``.  Oracle queries are appended to ``log`` when given.
    """
    if k < 0:
        raise ValueError("budget must be non-negative")
    stats = GfvsStats() if stats is None else stats
    grp = g.group
    bound = k
    best: tuple[int, ...] | None = None

    def measure(deleted: frozenset, r: GfvsRelaxation) -> int:
        return 2 * bound - 2 * len(deleted) - r.cost

    def settle(assigned: dict, deleted: frozenset, depth: int) -> _Node | None:
        mu = None
        while True:
            if len(deleted) > bound:
                return None
            stats.relax_calls += 1
            r = relax_gfvs(g, assigned, deleted, log)
            if r is None or measure(deleted, r) < 0:
                return None
            if mu is not None and measure(deleted, r) != mu:
                stats.measure_drops_on_adoption += 1
            mu = measure(deleted, r)
            new_del = {v for v in r.merged.free if r.z[v] == 2}
            new_asg = {v: r.paths.psi[v] for v in r.merged.free if r.z[v] == 0 and r.paths.dist[v] == 0}
            if not new_del and not new_asg:
                return _Node(assigned, deleted, r, mu, depth)
            stats.adoptions += 1
            assigned = {**assigned, **new_asg}
            deleted = deleted | new_del

    def expand(node: _Node) -> tuple[str, list[_Node]]:
        r = node.relax
        half = [v for v in r.merged.free if r.z[v] == 1]
        if half:
            near = [v for v in half if r.paths.dist[v] == 0]
            if not near:
                raise InvariantViolation("no half-deleted vertex is adjacent to the assigned part")
            v, label = near[0], r.paths.psi[near[0]]
        elif r.merged.free:
            v, label = r.merged.free[0], grp.identity()
        else:
            return "leaf", []
        options = [
            settle(node.assigned, node.deleted | {v}, node.depth + 1),
            settle({**node.assigned, v: label}, node.deleted, node.depth + 1),
        ]
        options = [c for c in options if c is not None]
        for c in options:
            if c.measure >= node.measure:
                c.depth = node.depth
                return "follow", [c]
        return "branch", options

    root = settle({}, frozenset(), 0)
    stack = [root] if root is not None else []
    while stack:
        node = stack.pop()
        node.measure = measure(node.deleted, node.relax)
        if len(node.deleted) > bound or node.measure < 0:
            continue
        stats.nodes += 1
        stats.max_depth = max(stats.max_depth, node.depth)
        kind, kids = expand(node)
        while kind == "follow":
            node = kids[0]
            kind, kids = expand(node)
        if kind == "leaf":
            best = tuple(sorted(node.deleted))
            stats.solutions.append(len(best))
            bound = len(best) - 1
            continue
        stack.extend(reversed(kids))
    return best


def brute_force_gfvs(g: LabelledGraph, max_size: int | None = None) -> tuple[int, ...] | None:
    """Smallest deletion set found by trying all subsets in order of size."""
    top = g.n if max_size is None else min(max_size, g.n)
    for size in range(top + 1):
        for s in itertools.combinations(range(g.n), size):
            if check_consistent(g.without(s)).ok:
                return s
    return None


# ---------------------------------------------------------------------------
# feedback vertex set


def reduce_fvs(n: int, edges: Sequence[tuple[int, int]]) -> tuple[LabelledGraph, Group]:
    """Label edge ``i`` with the ``i``-th generator of Z_2^m; every cycle becomes non-null."""
    grp = Z2Power(len(edges))
    return LabelledGraph(n, grp, [(u, v, 1 << i) for i, (u, v, *_) in enumerate(edges)]), grp


def petersen_graph() -> tuple[int, list[tuple[int, int]]]:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return 10, outer + spokes + inner


def random_labelled_graph(rng: random.Random, n: int, m: int, group: Group, identity_rate: float = 0.3) -> LabelledGraph:
    """Random multigraph without loops; some edges get the identity label."""
    edges: list[tuple[int, int, Any]] = []
    for _ in range(m if n >= 2 else 0):
        u, v = rng.sample(range(n), 2)
        g = group.identity() if rng.random() < identity_rate else group.random_element(rng)
        edges.append((u, v, g))
    return LabelledGraph(n, group, edges)
