from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from ksubflow.core import INTEGRAL, brute_force_minimize
from ksubflow.generators import random_cnf2, random_graph, random_multiway
from ksubflow.reductions import (
    Almost2SatClause,
    Almost2SatVar,
    Certificate,
    CertificateError,
    Clause,
    Cnf2,
    Graph,
    MultiwayCutEdge,
    UlcEdge,
    VertexCover,
    decode,
    encode,
    verify_certificate,
)
from ksubflow.solver import minimize, solve_fpt


def solve(problem):
    inst, rmap = encode(problem)
    sol = solve_fpt(inst, inst.soft_total_halves())
    assert sol is not None
    cert = decode(problem, rmap, sol[0])
    assert 2 * verify_certificate(problem, cert) == sol[1]
    return cert


# --- independent brute-force oracles ----------------------------------------


def vc_opt(g: Graph) -> int:
    for r in range(g.n + 1):
        for s in itertools.combinations(range(g.n), r):
            if all(u in s or v in s for u, v, _ in g.edges):
                return r
    raise AssertionError


def a2sat_clause_opt(f: Cnf2) -> int:
    best = None
    for truth in itertools.product((False, True), repeat=f.n):
        if any(c.crisp and not c.satisfied(truth) for c in f.clauses):
            continue
        cost = sum(c.weight for c in f.clauses if not c.satisfied(truth))
        best = cost if best is None else min(best, cost)
    return best


def a2sat_var_opt(f: Cnf2, costs) -> int:
    best = None
    for r in range(f.n + 1):
        for s in itertools.combinations(range(f.n), r):
            keep = [c for c in f.clauses if not any(abs(l) - 1 in s for l in c.literals)]
            if any(all(c.satisfied(t) for c in keep) for t in itertools.product((False, True), repeat=f.n)):
                cost = sum(costs[v] for v in s)
                best = cost if best is None else min(best, cost)
    return best


def ulc_opt(p: UlcEdge) -> int:
    return min(
        sum(w for u, v, w, perm in p.edges if lab[v] != perm[lab[u] - 1])
        for lab in itertools.product(range(1, p.k + 1), repeat=p.n)
    )


def multiway_opt(p: MultiwayCutEdge) -> int:
    # every labelling extending terminal i -> i; cut edges are those with unequal ends
    k = len(p.terminals)
    best = None
    for lab in itertools.product(range(k), repeat=p.graph.n):
        if any(lab[t] != i for i, t in enumerate(p.terminals)):
            continue
        cost = sum(w for u, v, w in p.graph.edges if lab[u] != lab[v])
        best = cost if best is None else min(best, cost)
    return best


def min_st_cut(g: Graph, s: int, t: int) -> int:
    best = None
    others = [v for v in range(g.n) if v not in (s, t)]
    for r in range(len(others) + 1):
        for xs in itertools.combinations(others, r):
            side = set(xs) | {s}
            cost = sum(w for u, v, w in g.edges if (u in side) != (v in side))
            best = cost if best is None else min(best, cost)
    return best


# --- vertex cover -----------------------------------------------------------


def test_vertex_cover_examples():
    edge = VertexCover(Graph(2, ((0, 1),)))
    assert minimize(encode(edge)[0]).cost == 2
    assert solve(edge).cost == 1

    tri = VertexCover(Graph(3, ((0, 1), (1, 2), (0, 2))))
    assert minimize(encode(tri)[0]).cost == 3
    assert solve(tri).cost == 2

    empty = VertexCover(Graph(4))
    assert minimize(encode(empty)[0]).cost == 0
    assert solve(empty).deleted == ()


def test_vertex_cover_self_loop_and_parallel_edges():
    g = VertexCover(Graph(3, ((0, 0), (1, 2), (2, 1))))
    cert = solve(g)
    assert 0 in cert.deleted and cert.cost == 2


def lp_vertex_cover(g: Graph) -> Fraction:
    """Half-integral LP optimum by enumeration over {0, 1/2, 1}^n."""
    half = Fraction(1, 2)
    return min(
        sum(x)
        for x in itertools.product((0, half, 1), repeat=g.n)
        if all(x[u] + x[v] >= 1 for u, v, _ in g.edges)
    )


def test_vertex_cover_relaxation_is_the_lp():
    rng = random.Random(41)
    for _ in range(30):
        g = random_graph(rng, rng.randint(1, 8), 0.4)
        assert Fraction(minimize(encode(VertexCover(g))[0]).cost, 2) == lp_vertex_cover(g)


def test_vertex_cover_matches_brute_force():
    rng = random.Random(42)
    for _ in range(30):
        g = random_graph(rng, rng.randint(1, 8), 0.4)
        assert solve(VertexCover(g)).cost == vc_opt(g)


# --- almost 2-SAT -----------------------------------------------------------


def test_a2sat_clause_examples():
    contra = Almost2SatClause(Cnf2(1, (Clause((1,)), Clause((-1,)))))
    assert minimize(encode(contra)[0]).cost == 2
    assert solve(contra).cost == 1

    sat = Almost2SatClause(Cnf2(2, (Clause((1, 2)), Clause((-1, 2)), Clause((1, -2)))))
    assert solve(sat).cost == 0

    taut = Almost2SatClause(Cnf2(1, (Clause((1, -1)),)))
    assert solve(taut).cost == 0


def test_a2sat_crisp_clause_is_never_dropped():
    f = Cnf2(1, (Clause((1,), crisp=True), Clause((-1,), weight=3)))
    cert = solve(Almost2SatClause(f))
    assert cert.deleted == (1,) and cert.cost == 3


def test_a2sat_clause_matches_brute_force():
    rng = random.Random(43)
    for _ in range(40):
        f = random_cnf2(rng, rng.randint(1, 6), rng.randint(0, 10), max_weight=3, crisp_rate=0.1)
        opt = a2sat_clause_opt(f)
        inst, rmap = encode(Almost2SatClause(f))
        sol = solve_fpt(inst, inst.soft_total_halves())
        if opt is None:
            assert sol is None
        else:
            assert sol is not None and sol[1] == 2 * opt


def test_a2sat_var_examples():
    contra = Almost2SatVar(Cnf2(1, (Clause((1,)), Clause((-1,)))), (1,))
    assert solve(contra).cost == 1

    # x -> y -> z -> not x, plus x: deleting x resolves everything
    chain = Cnf2(3, (Clause((-1, 2)), Clause((-2, 3)), Clause((-3, -1)), Clause((1,))))
    assert solve(Almost2SatVar(chain, (1, 1, 1))).cost == 1
    assert solve(Almost2SatVar(chain, (5, 1, 1))).cost == 1


def test_a2sat_var_matches_brute_force():
    rng = random.Random(44)
    for _ in range(30):
        n = rng.randint(1, 4)
        f = random_cnf2(rng, n, rng.randint(0, 7))
        costs = tuple(rng.randint(1, 3) for _ in range(n))
        assert solve(Almost2SatVar(f, costs)).cost == a2sat_var_opt(f, costs)


# --- unique label cover -----------------------------------------------------


def test_ulc_examples():
    consistent = UlcEdge(3, 3, ((0, 1, 1, (2, 3, 1)), (1, 2, 1, (2, 3, 1))))
    assert solve(consistent).cost == 0

    cycle = UlcEdge(3, 3, ((0, 1, 1, (2, 3, 1)), (1, 2, 1, (2, 3, 1)), (2, 0, 1, (1, 2, 3))))
    assert solve(cycle).cost == 1

    parallel = UlcEdge(2, 2, ((0, 1, 3, (1, 2)), (0, 1, 2, (2, 1))))
    cert = solve(parallel)
    assert cert.cost == 2 and cert.deleted == (1,)

    with pytest.raises(ValueError):
        UlcEdge(2, 2, ((0, 0, 1, (1, 2)),))


def test_ulc_matches_brute_force():
    rng = random.Random(45)
    for _ in range(30):
        n, k = rng.randint(2, 5), rng.randint(2, 3)
        edges = []
        for _ in range(rng.randint(0, 7)):
            u, v = rng.sample(range(n), 2)
            p = list(range(1, k + 1))
            rng.shuffle(p)
            edges.append((u, v, rng.randint(1, 3), tuple(p)))
        p = UlcEdge(n, k, tuple(edges))
        assert solve(p).cost == ulc_opt(p)


# --- multiway cut -----------------------------------------------------------


def test_multiway_examples():
    path = MultiwayCutEdge(Graph(3, ((0, 1), (1, 2))), (0, 2))
    assert solve(path).cost == 1

    apart = MultiwayCutEdge(Graph(4, ((0, 1), (2, 3))), (0, 2))
    assert solve(apart).cost == 0

    star = MultiwayCutEdge(Graph(4, ((0, 3), (1, 3), (2, 3))), (0, 1, 2))
    assert solve(star).cost == 2


def test_two_terminal_multiway_is_min_st_cut():
    rng = random.Random(46)
    for _ in range(20):
        p = random_multiway(rng, rng.randint(2, 8), 0.4, 2)
        s, t = p.terminals
        assert solve(p).cost == min_st_cut(p.graph, s, t)


def test_multiway_matches_brute_force():
    rng = random.Random(47)
    for _ in range(20):
        p = random_multiway(rng, rng.randint(3, 7), 0.5, 3)
        assert solve(p).cost == multiway_opt(p)


# --- certificates -----------------------------------------------------------


def test_checker_rejects_bad_certificates():
    g = Graph(3, ((0, 1), (1, 2)))
    with pytest.raises(CertificateError):
        verify_certificate(VertexCover(g), Certificate("vc", 1, (0,)))
    assert verify_certificate(VertexCover(g), Certificate("vc", 1, (1,))) == 1

    path = MultiwayCutEdge(g, (0, 2))
    with pytest.raises(CertificateError):
        verify_certificate(path, Certificate("multiway", 0, ()))

    f = Cnf2(1, (Clause((1,), crisp=True), Clause((-1,))))
    with pytest.raises(CertificateError):
        verify_certificate(Almost2SatClause(f), Certificate("a2sat-clause", 1, (0,), (0,)))

    u = UlcEdge(2, 2, ((0, 1, 1, (2, 1)),))
    with pytest.raises(CertificateError):
        verify_certificate(u, Certificate("ulc", 0, (), (1, 1)))


def test_decode_needs_integral_assignment():
    p = VertexCover(Graph(2, ((0, 1),)))
    inst, rmap = encode(p)
    with pytest.raises(ValueError):
        decode(p, rmap, (0, 2))


def test_encoded_optimum_equals_problem_optimum_by_brute_force():
    # the encoding itself, minimised exhaustively, agrees with the problem oracle
    rng = random.Random(48)
    for _ in range(20):
        g = random_graph(rng, rng.randint(1, 6), 0.5)
        inst, _ = encode(VertexCover(g))
        best, _ = brute_force_minimize(inst, INTEGRAL, crisp_weight=inst.crisp_weight(2 * g.n))
        assert best == 2 * vc_opt(g)
