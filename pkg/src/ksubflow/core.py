"""Domain arithmetic, the VCSP instance model and brute-force oracles.

Costs are exact integers counted in half-units throughout.  An assignment is a
tuple of domain values in ``0..k`` where ``0`` is the relaxed value and
``1..k`` are the integral ones.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

BRUTE_FORCE_LIMIT = 10**7

RELAXED = "relaxed"
INTEGRAL = "integral"


class InstanceTooLarge(ValueError):
    pass


def meet(a: int, b: int) -> int:
    if a == b:
        return a
    return 0


def join(a: int, b: int) -> int:
    if a == b:
        return a
    if a == 0:
        return b
    if b == 0:
        return a
    return 0


def format_halves(halves: int) -> str:
    """Render a half-unit count in problem units, e.g. ``3 -> '1½'``."""
    whole, rest = divmod(halves, 2)
    if not rest:
        return str(whole)
    return f"{whole}½" if whole else "½"


# ---------------------------------------------------------------------------
# constraints


@dataclass(frozen=True, kw_only=True)
class Constraint:
    scope: tuple[int, ...]
    weight: int = 1
    crisp: bool = False

    def __post_init__(self):
        object.__setattr__(self, "scope", tuple(int(v) for v in self.scope))
        if len(set(self.scope)) != len(self.scope):
            raise ValueError(f"repeated variable in scope {self.scope}")
        if not isinstance(self.weight, (int, np.integer)) or self.weight < 1:
            raise ValueError(f"weight must be a positive integer, got {self.weight!r}")
        if len(self.scope) != self.arity:
            raise ValueError(
                f"{type(self).__name__} takes {self.arity} variables, got {len(self.scope)}"
            )

    @property
    def arity(self) -> int:
        return len(self.scope)

    def base_halves(self, args: Sequence[int]) -> int:
        raise NotImplementedError

    def max_base_halves(self) -> int:
        return 2

    def domain_size(self) -> int | None:
        """The smallest k this constraint needs, if it pins one down."""
        return None

    def check_domain(self, k: int) -> None:
        pass


@dataclass(frozen=True, kw_only=True)
class Unary(Constraint):
    """Arbitrary unary cost on ``1..k`` (integer units).

    The relaxed entry is derived as the mean of the two smallest integral
    costs, never supplied by the caller.
    """

    costs: tuple[int, ...]
    table: tuple[int, ...] = field(init=False)

    arity = 1

    def __post_init__(self):
        super().__post_init__()
        costs = tuple(int(c) for c in self.costs)
        if not costs:
            raise ValueError("unary costs need at least one value")
        object.__setattr__(self, "costs", costs)
        ordered = sorted(costs)
        relaxed = ordered[0] + ordered[1] if len(ordered) > 1 else 2 * ordered[0]
        object.__setattr__(self, "table", (relaxed,) + tuple(2 * c for c in costs))

    def base_halves(self, args):
        return self.table[args[0]]

    def max_base_halves(self):
        return max(self.table)

    def domain_size(self):
        return len(self.costs)

    def check_domain(self, k):
        if len(self.costs) != k:
            raise ValueError(f"unary table has {len(self.costs)} entries, expected k={k}")


@dataclass(frozen=True, kw_only=True)
class Permutation(Constraint):
    """Soft ``y = perm(x)`` on scope ``(x, y)``; ``perm[i-1]`` is the image of ``i``."""

    perm: tuple[int, ...]

    arity = 2

    def __post_init__(self):
        super().__post_init__()
        perm = tuple(int(p) for p in self.perm)
        if sorted(perm) != list(range(1, len(perm) + 1)):
            raise ValueError(f"not a bijection on 1..{len(perm)}: {perm}")
        object.__setattr__(self, "perm", perm)

    def base_halves(self, args):
        x, y = args
        if x == 0 and y == 0:
            return 0
        if x == 0 or y == 0:
            return 1
        return 0 if self.perm[x - 1] == y else 2

    def domain_size(self):
        return len(self.perm)

    def check_domain(self, k):
        if len(self.perm) != k:
            raise ValueError(f"permutation has length {len(self.perm)}, expected k={k}")


@dataclass(frozen=True, kw_only=True)
class SoftOr(Constraint):
    """Soft ``x = d or y = d2`` on scope ``(x, y)``."""

    d: int
    d2: int

    arity = 2

    def __post_init__(self):
        super().__post_init__()
        if self.d < 1 or self.d2 < 1:
            raise ValueError("soft-or safe values must be integral (>= 1)")

    def base_halves(self, args):
        x, y = args
        if x == self.d or y == self.d2:
            return 0
        return (x != 0) + (y != 0)

    def check_domain(self, k):
        if self.d > k or self.d2 > k:
            raise ValueError(f"soft-or values ({self.d}, {self.d2}) exceed k={k}")


@dataclass(frozen=True, kw_only=True)
class WideEquality(Constraint):
    """Soft ``x1 = ... = xr``."""

    def __post_init__(self):
        super().__post_init__()
        if len(self.scope) < 2:
            raise ValueError("wide equality needs arity >= 2")

    @property
    def arity(self) -> int:
        return len(self.scope)

    def base_halves(self, args):
        integral = {a for a in args if a}
        if len(integral) > 1:
            return 2
        if integral and 0 in args:
            return 1
        return 0


def unary(v: int, costs: Sequence[int], weight: int = 1, crisp: bool = False) -> Unary:
    return Unary(scope=(v,), costs=tuple(costs), weight=weight, crisp=crisp)


def hard_constant(v: int, d: int, k: int, weight: int = 1, crisp: bool = False) -> Unary:
    """Unary cost with ``v = d`` as its unique minimum (0 at d, ½ at 0, 1 elsewhere)."""
    if not 1 <= d <= k:
        raise ValueError(f"value {d} outside 1..{k}")
    return unary(v, [0 if e == d else 1 for e in range(1, k + 1)], weight, crisp)


def permutation(x: int, y: int, perm: Sequence[int], weight: int = 1, crisp: bool = False) -> Permutation:
    return Permutation(scope=(x, y), perm=tuple(perm), weight=weight, crisp=crisp)


def soft_or(x: int, y: int, d: int, d2: int, weight: int = 1, crisp: bool = False) -> SoftOr:
    return SoftOr(scope=(x, y), d=d, d2=d2, weight=weight, crisp=crisp)


def wide_equality(scope: Sequence[int], weight: int = 1, crisp: bool = False) -> WideEquality:
    return WideEquality(scope=tuple(scope), weight=weight, crisp=crisp)


@dataclass(frozen=True)
class VcspInstance:
    k: int
    n: int
    constraints: tuple[Constraint, ...] = ()

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.n < 0:
            raise ValueError("negative variable count")
        object.__setattr__(self, "constraints", tuple(self.constraints))
        for c in self.constraints:
            for v in c.scope:
                if not 0 <= v < self.n:
                    raise ValueError(f"variable {v} out of range for n={self.n}")
            c.check_domain(self.k)

    def soft_total_halves(self) -> int:
        """Upper bound on the soft part of the cost of any assignment."""
        return sum(c.weight * c.max_base_halves() for c in self.constraints if not c.crisp)

    def crisp_weight(self, budget_halves: int = 0) -> int:
        """Weight used to materialise crisp constraints.

        Breaking a crisp constraint even to half an extent then costs more than
        every assignment that keeps all crisp constraints.
        """
        return self.soft_total_halves() + 2 * budget_halves + 2

    def with_constraints(self, extra: Iterable[Constraint]) -> "VcspInstance":
        return VcspInstance(self.k, self.n, self.constraints + tuple(extra))

    @property
    def has_crisp(self) -> bool:
        return any(c.crisp for c in self.constraints)


def effective_weight(c: Constraint, crisp_weight: int | None) -> int:
    if c.crisp and crisp_weight is not None:
        return crisp_weight
    return c.weight


def relaxed_cost(c: Constraint, args: Sequence[int], crisp_weight: int | None = None) -> int:
    if len(args) != c.arity:
        raise ValueError(f"expected {c.arity} arguments, got {len(args)}")
    if any(a < 0 for a in args):
        raise ValueError(f"negative domain value in {tuple(args)}")
    k = c.domain_size()
    if k is not None and any(a > k for a in args):
        raise ValueError(f"domain value above k={k} in {tuple(args)}")
    return effective_weight(c, crisp_weight) * c.base_halves(args)


def evaluate(inst: VcspInstance, phi: Sequence[int], crisp_weight: int | None = None) -> int:
    if len(phi) != inst.n:
        raise ValueError(f"assignment has length {len(phi)}, expected {inst.n}")
    if any(not 0 <= a <= inst.k for a in phi):
        raise ValueError(f"assignment value outside 0..{inst.k}")
    if crisp_weight is None:
        crisp_weight = inst.crisp_weight()
    total = 0
    for c in inst.constraints:
        total += effective_weight(c, crisp_weight) * c.base_halves([phi[v] for v in c.scope])
    return total


def is_integral(phi: Sequence[int]) -> bool:
    return all(a != 0 for a in phi)


def violated_crisp(inst: VcspInstance, phi: Sequence[int]) -> list[Constraint]:
    return [c for c in inst.constraints if c.crisp and c.base_halves([phi[v] for v in c.scope])]


# ---------------------------------------------------------------------------
# brute-force oracles


def cost_table(c: Constraint, k: int, crisp_weight: int | None = None) -> np.ndarray:
    """Dense array of relaxed costs over ``{0..k}^arity``."""
    shape = (k + 1,) * c.arity
    table = np.zeros(shape, dtype=np.int64)
    w = effective_weight(c, crisp_weight)
    for args in itertools.product(range(k + 1), repeat=c.arity):
        table[args] = w * c.base_halves(args)
    return table


def _points(domains: list[np.ndarray], lo: int, hi: int) -> np.ndarray:
    """Rows ``lo..hi-1`` of the mixed-radix enumeration of ``domains``."""
    idx = np.arange(lo, hi, dtype=np.int64)
    out = np.empty((hi - lo, len(domains)), dtype=np.int8)
    for j in range(len(domains) - 1, -1, -1):
        size = len(domains[j])
        out[:, j] = domains[j][idx % size]
        idx //= size
    return out


def brute_force_minimize(
    inst: VcspInstance,
    mode: str = RELAXED,
    fixed: Mapping[int, int] | None = None,
    crisp_weight: int | None = None,
) -> tuple[int, list[tuple[int, ...]]]:
    """Exact minimum and all minimizers by exhaustive enumeration.

    ``mode`` selects the search space: ``relaxed`` is ``{0..k}^n`` and
    ``integral`` is ``{1..k}^n``.  ``fixed`` pins variables to given values.
    """
    if mode not in (RELAXED, INTEGRAL):
        raise ValueError(f"unknown mode {mode!r}")
    if (inst.k + 1) ** inst.n > BRUTE_FORCE_LIMIT:
        raise InstanceTooLarge(f"(k+1)^n = {(inst.k + 1) ** inst.n} exceeds {BRUTE_FORCE_LIMIT}")
    if crisp_weight is None:
        crisp_weight = inst.crisp_weight()
    first = 0 if mode == RELAXED else 1
    fixed = dict(fixed or {})
    domains = [
        np.array([fixed[v]] if v in fixed else range(first, inst.k + 1), dtype=np.int8)
        for v in range(inst.n)
    ]
    tables = [(c.scope, cost_table(c, inst.k, crisp_weight)) for c in inst.constraints]
    total = int(np.prod([len(d) for d in domains], dtype=np.int64))

    best = None
    minimizers: list[np.ndarray] = []
    chunk = 1 << 20
    for lo in range(0, total, chunk):
        pts = _points(domains, lo, min(total, lo + chunk))
        cost = np.zeros(len(pts), dtype=np.int64)
        for scope, table in tables:
            cost += table[tuple(pts[:, v] for v in scope)]
        low = int(cost.min())
        if best is None or low < best:
            best, minimizers = low, []
        if low == best:
            minimizers.append(pts[cost == low])
    rows = np.concatenate(minimizers) if minimizers else np.zeros((0, inst.n), dtype=np.int8)
    return best, [tuple(int(a) for a in row) for row in rows]


def _meet_join_arrays(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    same = x == y
    m = np.where(same, x, 0)
    j = np.where(same, x, np.where(x == 0, y, np.where(y == 0, x, 0)))
    return m, j


def is_k_submodular_table(table: np.ndarray) -> bool:
    """Check ``f(X) + f(Y) >= f(X meet Y) + f(X join Y)`` for every pair of points."""
    table = np.asarray(table)
    r = table.ndim
    size = table.shape[0]
    pts = np.array(list(itertools.product(range(size), repeat=r)), dtype=np.int64).reshape(-1, r)
    fx = table[tuple(pts.T)]
    for i in range(len(pts)):
        x = np.broadcast_to(pts[i], pts.shape)
        m, j = _meet_join_arrays(x, pts)
        lhs = fx[i] + fx
        rhs = table[tuple(m.T)] + table[tuple(j.T)]
        if np.any(lhs < rhs):
            return False
    return True


def is_k_submodular(c: Constraint, k: int | None = None) -> bool:
    if k is None:
        k = c.domain_size()
    if k is None:
        raise ValueError("k is required for this constraint kind")
    c.check_domain(k)
    if c.arity > 4:
        raise ValueError("exhaustive check is capped at arity 4")
    return is_k_submodular_table(cost_table(c, k))


def check_persistence(inst: VcspInstance, crisp_weight: int | None = None) -> bool:
    """Every relaxed optimum extends, on its integral coordinates, to an integral optimum."""
    _, relaxed = brute_force_minimize(inst, RELAXED, crisp_weight=crisp_weight)
    _, integral = brute_force_minimize(inst, INTEGRAL, crisp_weight=crisp_weight)
    if inst.n == 0:
        return True
    opt = np.array(integral, dtype=np.int8).reshape(-1, inst.n)
    for phi in relaxed:
        phi = np.array(phi, dtype=np.int8)
        mask = phi != 0
        if not np.any(np.all(opt[:, mask] == phi[mask], axis=1)):
            return False
    return True


def is_extreme(phi: Sequence[int], minimizers: Iterable[Sequence[int]]) -> bool:
    """No other minimizer keeps every nonzero coordinate of ``phi``."""
    phi = tuple(phi)
    for other in minimizers:
        other = tuple(other)
        if other != phi and all(a == 0 or a == b for a, b in zip(phi, other)):
            return False
    return True
