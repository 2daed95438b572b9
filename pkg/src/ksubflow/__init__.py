"""Exact minimisation of basic k-submodular relaxations by max flow, with
persistence-driven branching and problem reductions built on top."""

from .core import (
    VcspInstance,
    brute_force_minimize,
    evaluate,
    hard_constant,
    permutation,
    relaxed_cost,
    soft_or,
    unary,
    wide_equality,
)
from .flow import InvariantViolation, extreme_min_cut, max_flow
from .network import assemble, build_gadget
from .solver import RelaxationResult, SearchStats, minimize, solve_fpt

__all__ = [
    "InvariantViolation",
    "RelaxationResult",
    "SearchStats",
    "VcspInstance",
    "assemble",
    "brute_force_minimize",
    "build_gadget",
    "evaluate",
    "extreme_min_cut",
    "hard_constant",
    "max_flow",
    "minimize",
    "permutation",
    "relaxed_cost",
    "soft_or",
    "solve_fpt",
    "unary",
    "wide_equality",
]
