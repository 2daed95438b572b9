from __future__ import annotations

import itertools
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ksubflow.core import (
    INTEGRAL,
    InstanceTooLarge,
    VcspInstance,
    brute_force_minimize,
    check_persistence,
    cost_table,
    evaluate,
    format_halves,
    hard_constant,
    is_extreme,
    is_k_submodular,
    is_k_submodular_table,
    join,
    meet,
    permutation,
    relaxed_cost,
    soft_or,
    unary,
    violated_crisp,
    wide_equality,
)
from ksubflow.generators import random_instance, random_permutation


def triangle_vc() -> VcspInstance:
    cons = [unary(v, [0, 1]) for v in range(3)]
    cons += [soft_or(a, b, 2, 2, crisp=True) for a, b in [(0, 1), (1, 2), (0, 2)]]
    return VcspInstance(2, 3, cons)


# --- meet / join ---------------------------------------------------------


def test_meet_join_examples():
    assert (meet(1, 2), join(1, 2)) == (0, 0)
    assert (meet(0, 3), join(0, 3)) == (0, 3)
    assert (meet(2, 2), join(2, 2)) == (2, 2)


@given(st.integers(0, 5), st.integers(0, 5))
def test_meet_join_commute(a, b):
    assert meet(a, b) == meet(b, a)
    assert join(a, b) == join(b, a)
    assert meet(a, b) in (0, a) and meet(a, b) in (0, b)


@given(st.integers(0, 20))
def test_format_halves(h):
    text = format_halves(h)
    assert text == (str(h // 2) if h % 2 == 0 else ("" if h == 1 else str(h // 2)) + "½")


# --- relaxed costs ---------------------------------------------------------


def test_permutation_costs():
    c = permutation(0, 1, (2, 3, 1))
    for a in (1, 2, 3):
        assert relaxed_cost(c, (a, c.perm[a - 1])) == 0
        assert relaxed_cost(c, (a, 0)) == 1
        assert relaxed_cost(c, (0, a)) == 1
    assert relaxed_cost(c, (0, 0)) == 0
    assert relaxed_cost(c, (1, 1)) == 2


def test_wide_equality_and_soft_or():
    assert relaxed_cost(wide_equality((0, 1, 2)), (1, 0, 2)) == 2
    assert relaxed_cost(wide_equality((0, 1, 2)), (1, 0, 1)) == 1
    assert relaxed_cost(wide_equality((0, 1, 2)), (0, 0, 0)) == 0
    c = soft_or(0, 1, 1, 2)
    assert relaxed_cost(c, (0, 0)) == 0
    assert relaxed_cost(c, (1, 0)) == 0
    assert relaxed_cost(c, (2, 0)) == 1
    assert relaxed_cost(c, (2, 1)) == 2


def test_unary_relaxed_entry_is_computed():
    c = unary(0, [3, 0, 1])
    assert c.table == (1, 6, 0, 2)
    assert unary(0, [2]).table == (4, 4)


def test_weights_scale_costs():
    c = permutation(0, 1, (1, 2), weight=3)
    assert relaxed_cost(c, (1, 0)) == 3
    crisp = permutation(0, 1, (1, 2), crisp=True)
    assert relaxed_cost(crisp, (1, 2), crisp_weight=50) == 100


# --- evaluate / brute force -------------------------------------------------


def test_evaluate_examples():
    assert evaluate(VcspInstance(2, 3, []), (0, 1, 2)) == 0
    tri = triangle_vc()
    assert evaluate(tri, (0, 0, 0)) == 3
    assert evaluate(tri, (2, 2, 1)) == 4
    assert violated_crisp(tri, (1, 1, 2))


def test_brute_force_examples():
    inst = VcspInstance(2, 2, [permutation(0, 1, (1, 2), crisp=True)])
    best, mins = brute_force_minimize(inst)
    assert best == 0 and sorted(mins) == [(0, 0), (1, 1), (2, 2)]

    tri = triangle_vc()
    assert brute_force_minimize(tri)[0] == 3
    assert brute_force_minimize(tri, INTEGRAL)[0] == 4

    # ½ + ½ at the relaxed value ties with 0 + 1 at either integral value
    both = VcspInstance(2, 1, [hard_constant(0, 1, 2), hard_constant(0, 2, 2)])
    assert brute_force_minimize(both) == (2, [(0,), (1,), (2,)])


def test_brute_force_fixed_and_limits():
    tri = triangle_vc()
    assert brute_force_minimize(tri, fixed={0: 2})[0] == 4
    with pytest.raises(InstanceTooLarge):
        brute_force_minimize(VcspInstance(3, 20, []))
    with pytest.raises(ValueError):
        brute_force_minimize(tri, mode="other")


def test_instance_validation():
    with pytest.raises(ValueError):
        VcspInstance(2, 1, [permutation(0, 1, (1, 2))])
    with pytest.raises(ValueError):
        VcspInstance(2, 2, [permutation(0, 1, (1, 2, 3))])
    with pytest.raises(ValueError):
        VcspInstance(2, 2, [soft_or(0, 1, 3, 1)])
    with pytest.raises(ValueError):
        permutation(0, 1, (1, 1))


def test_integral_points_keep_original_values():
    rng = random.Random(5)
    for _ in range(30):
        inst = random_instance(rng, max_n=4, max_k=3, max_m=6, crisp_rate=0.0)
        for phi in itertools.product(range(1, inst.k + 1), repeat=inst.n):
            direct = 0
            for c in inst.constraints:
                args = [phi[v] for v in c.scope]
                if hasattr(c, "costs"):
                    direct += 2 * c.weight * c.costs[args[0] - 1]
                elif hasattr(c, "perm"):
                    direct += 2 * c.weight * (c.perm[args[0] - 1] != args[1])
                else:
                    direct += 2 * c.weight * (args[0] != c.d and args[1] != c.d2)
            assert evaluate(inst, phi) == direct


# --- k-submodularity --------------------------------------------------------


def test_basic_families_are_k_submodular():
    rng = random.Random(0)
    for k in range(1, 6):
        for _ in range(5):
            c = unary(0, [rng.randint(0, 5) for _ in range(k)])
            assert is_k_submodular(c, k)
        if k >= 2:
            for _ in range(5):
                assert is_k_submodular(permutation(0, 1, random_permutation(rng, k)), k)
                assert is_k_submodular(soft_or(0, 1, rng.randint(1, k), rng.randint(1, k)), k)
    for r in (2, 3):
        assert is_k_submodular(wide_equality(tuple(range(r))), 3)


def test_k_submodularity_table_verdicts():
    # relaxed value at 0 equal to 0 with both integral values 0 is fine
    assert is_k_submodular_table(np.array([0, 0, 4]))
    # relaxed value above the average of the two best integral values is not
    assert not is_k_submodular_table(np.array([4, 0, 0]))


def test_discrete_relaxation_minimum_is_attained_on_integral_points():
    rng = random.Random(1)
    for _ in range(40):
        inst = random_instance(rng, max_n=2, max_k=4, max_m=1, crisp_rate=0.0)
        for c in inst.constraints:
            table = cost_table(c, inst.k)
            integral = table[(slice(1, None),) * c.arity]
            assert table.min() == integral.min()


def test_relaxed_minimizers_closed_under_meet_and_join():
    rng = random.Random(2)
    for _ in range(40):
        inst = random_instance(rng, max_n=5, max_k=3, max_m=8)
        _, mins = brute_force_minimize(inst)
        mset = set(mins)
        for x, y in itertools.combinations(mins, 2):
            assert tuple(map(meet, x, y)) in mset
            assert tuple(map(join, x, y)) in mset


# --- persistence / extremeness ---------------------------------------------


def test_persistence_examples():
    assert check_persistence(triangle_vc())
    assert check_persistence(VcspInstance(2, 0, []))
    rng = random.Random(3)
    for _ in range(100):
        assert check_persistence(random_instance(rng, max_n=6, max_k=4, max_m=10))


def test_is_extreme():
    mins = [(0, 0), (1, 0), (1, 1)]
    assert is_extreme((1, 1), mins)
    assert not is_extreme((1, 0), mins)
    assert not is_extreme((0, 0), mins)
