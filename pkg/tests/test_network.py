from __future__ import annotations

import itertools
import random

import pytest

from ksubflow.core import VcspInstance, evaluate, hard_constant, permutation, soft_or, unary, wide_equality
from ksubflow.generators import random_instance
from ksubflow.network import (
    NotNormalised,
    UnsupportedConstraint,
    assemble,
    assignment_of_cut,
    build_gadget,
    cut_capacity,
    cut_of_assignment,
    cut_value,
    dump_edges,
    load_edges,
    normalise,
    vertex,
)


def triangle_vc() -> VcspInstance:
    cons = [unary(v, [0, 1]) for v in range(3)]
    cons += [soft_or(a, b, 2, 2, crisp=True) for a, b in [(0, 1), (1, 2), (0, 2)]]
    return VcspInstance(2, 3, cons)


def edge_map(net):
    return {(u, v): c for u, v, c in net.edges()}


def test_unary_gadget_edges():
    # costs 0, 4, 2 on values 1..3; relaxed value 0 + 2 = 2 half-units
    net = build_gadget(unary(0, [0, 4, 2]), 3)
    v1, v2, v3 = (vertex(0, d, 3) for d in (1, 2, 3))
    assert edge_map(net) == {(0, v1): 2, (v1, 1): 0, (v2, 1): 6, (v3, 1): 2}
    assert net.shift_halves == 0
    assert cut_capacity(net, {0, v2}) == 8


def test_unary_gadget_shift_and_zero_table():
    net = build_gadget(unary(0, [3, 5]), 2)
    assert net.shift_halves == 6
    for d in (0, 1, 2):
        assert cut_value(net, cut_of_assignment([d], 2)) == unary(0, [3, 5]).table[d]
    zero = build_gadget(unary(0, [0, 0, 0]), 3)
    assert all(c == 0 for _, _, c in zero.edges())


def test_permutation_gadget_edges():
    net = build_gadget(permutation(0, 1, (1, 2)), 2)
    u1, u2, v1, v2 = vertex(0, 1, 2), vertex(0, 2, 2), vertex(1, 1, 2), vertex(1, 2, 2)
    assert edge_map(net) == {(u1, v1): 1, (u2, v2): 1, (v1, u1): 1, (v2, u2): 1}
    assert cut_capacity(net, {0, u1, v2}) == 2


def test_wide_equality_has_no_gadget():
    with pytest.raises(UnsupportedConstraint):
        build_gadget(wide_equality((0, 1)), 2)


def test_cut_assignment_round_trip():
    assert cut_of_assignment((0, 2), 2) == {0, vertex(1, 2, 2)}
    assert cut_of_assignment((0, 0, 0), 3) == {0}
    assert normalise({0, vertex(0, 1, 2), vertex(0, 2, 2)}, 2) == {0}
    for phi in itertools.product(range(4), repeat=3):
        assert assignment_of_cut(cut_of_assignment(phi, 3), 3, 3) == phi
    with pytest.raises(NotNormalised):
        assignment_of_cut({0, vertex(0, 1, 2), vertex(0, 2, 2)}, 1, 2)


def test_assemble_examples():
    net = assemble(triangle_vc())
    assert net.num_vertices == 8
    cuts = [
        frozenset((0,) + xs)
        for r in range(7)
        for xs in itertools.combinations(range(2, 8), r)
    ]
    assert min(cut_value(net, c) for c in cuts) == 3

    empty = assemble(VcspInstance(2, 2, []))
    assert empty.num_vertices == 6 and empty.num_edges == 0


def test_assemble_merges_and_drops_edges():
    inst = VcspInstance(2, 2, [permutation(0, 1, (1, 2)), permutation(0, 1, (1, 2), weight=2), unary(0, [0, 0])])
    net = assemble(inst)
    pairs = [(u, v) for u, v, _ in net.edges()]
    assert len(pairs) == len(set(pairs))
    assert all(c > 0 for _, _, c in net.edges())
    assert net.capacity(vertex(0, 1, 2), vertex(1, 1, 2)) == 3


def test_crisp_hard_constants_network_matches_evaluate():
    inst = VcspInstance(2, 1, [hard_constant(0, 1, 2, crisp=True), hard_constant(0, 2, 2, crisp=True)])
    w = inst.crisp_weight()
    net = assemble(inst, w)
    best = min(cut_value(net, c) for c in ({0}, {0, 2}, {0, 3}, {0, 2, 3}))
    assert best == evaluate(inst, (0,), w) == 2 * w


def test_representation_on_random_instances():
    rng = random.Random(11)
    for _ in range(40):
        inst = random_instance(rng, max_n=4, max_k=3, max_m=6)
        w = inst.crisp_weight()
        net = assemble(inst, w)
        for phi in itertools.product(range(inst.k + 1), repeat=inst.n):
            assert cut_value(net, cut_of_assignment(phi, inst.k)) == evaluate(inst, phi, w)


def test_normalising_never_increases_capacity():
    rng = random.Random(12)
    for _ in range(30):
        inst = random_instance(rng, max_n=3, max_k=3, max_m=5)
        net = assemble(inst)
        inner = range(2, net.num_vertices)
        for r in range(len(inner) + 1):
            for xs in itertools.combinations(inner, r):
                cut = frozenset((0,) + xs)
                assert cut_capacity(net, cut) >= cut_capacity(net, normalise(cut, inst.k))


def test_edge_dump_round_trip():
    net = assemble(triangle_vc())
    again = load_edges(dump_edges(net), net.n, net.k, net.shift_halves)
    assert again.edges() == net.edges()
