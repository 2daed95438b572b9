"""Command-line interface: ``ksubflow solve|relax|verify``.

Exit codes: 0 success, 1 no solution within the budget, 2 unreadable or
malformed input, 3 internal invariant violation (or a failed verify suite).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from .core import format_halves
from .flow import InvariantViolation
from .formats import ParseError, WeightedCnf, parse_file
from .gfvs import GfvsStats, LabelledGraph, check_consistent, reduce_fvs, relax_gfvs, solve_gfvs
from .reductions import (
    Almost2SatClause,
    Almost2SatVar,
    CertificateError,
    Graph,
    MultiwayCutEdge,
    UlcEdge,
    VertexCover,
    decode,
    encode,
    verify_certificate,
)
from .solver import SearchStats, minimize, solve_fpt
from . import verify as suites

EXIT_OK, EXIT_NO_SOLUTION, EXIT_PARSE, EXIT_INVARIANT = 0, 1, 2, 3

PROBLEMS = ("vc", "fvs", "multiway", "a2sat", "a2sat-var", "ulc", "gfvs")


@dataclass
class RunConfig:
    subcommand: str
    input: str | None = None
    problem: str | None = None
    budget_halves: int | None = None
    output: str = "text"
    verify: bool = True
    seed: int = 0
    suites: list[str] | None = None


def parse_budget(text: str) -> int:
    """Budget in problem units (``3``, ``2.5``, ``5/2`` or ``2½``) to half-units."""
    t = text.strip().replace("½", ".5") if text.strip() != "½" else "0.5"
    try:
        value = Fraction(t)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value < 0 or (2 * value).denominator != 1:
        raise argparse.ArgumentTypeError("budget must be a non-negative multiple of 1/2")
    return int(2 * value)


def _problem(parsed, name: str | None):
    """Pair the parsed file with the requested problem; ``name`` defaults by format."""
    if isinstance(parsed, MultiwayCutEdge):
        allowed, default = {"multiway": parsed}, "multiway"
    elif isinstance(parsed, Graph):
        allowed, default = {"vc": VertexCover(parsed), "fvs": parsed}, "vc"
    elif isinstance(parsed, WeightedCnf):
        cnf = parsed.cnf
        allowed = {
            "a2sat": Almost2SatClause(cnf),
            "a2sat-var": Almost2SatVar(cnf, (1,) * cnf.n),
        }
        default = "a2sat"
    elif isinstance(parsed, UlcEdge):
        allowed, default = {"ulc": parsed}, "ulc"
    else:
        allowed, default = {"gfvs": parsed}, "gfvs"
    name = name or default
    if name not in allowed:
        raise ParseError(f"input format does not describe a {name} instance")
    return name, allowed[name]


def _group_problem(name: str, obj) -> LabelledGraph:
    if name == "fvs":
        return reduce_fvs(obj.n, [(u, v) for u, v, _ in obj.edges])[0]
    return obj


def _gfvs_relax(g: LabelledGraph):
    """Relaxation with vertex 1 assigned the identity (0 for an empty graph)."""
    if g.n == 0:
        return None
    return relax_gfvs(g, {0: g.group.identity()})


def _report(cfg: RunConfig, record: dict, out) -> None:
    if cfg.output == "json":
        out.write(json.dumps(record, sort_keys=False) + "\n")
        return
    for key, val in record.items():
        if isinstance(val, dict):
            val = "; ".join(f"{k}={' '.join(map(str, v)) if isinstance(v, list) else v}" for k, v in val.items())
        elif isinstance(val, list):
            val = " ".join(map(str, val))
        out.write(f"{key}: {val}\n")


def _one_based(xs) -> list[int]:
    return [x + 1 for x in xs]


def _solve(cfg: RunConfig, out) -> int:
    name, problem = _problem(parse_file(cfg.input), cfg.problem)
    if name in ("fvs", "gfvs"):
        g = _group_problem(name, problem)
        k = g.n if cfg.budget_halves is None else cfg.budget_halves // 2
        stats = GfvsStats()
        sol = solve_gfvs(g, k, stats)
        r = _gfvs_relax(g)
        relax = 0 if r is None else r.cost
        if sol is None:
            _report(cfg, {"status": "no-solution", "cost_halves": None, "certificate": None,
                          "nodes": stats.nodes, "relax_halves": relax}, out)
            return EXIT_NO_SOLUTION
        if not check_consistent(g.without(sol)).ok:
            raise InvariantViolation("deletion set leaves a non-null cycle")
        record = {"status": "ok", "cost_halves": 2 * len(sol), "cost": format_halves(2 * len(sol)),
                  "certificate": {"deleted": _one_based(sol)}, "nodes": stats.nodes, "relax_halves": relax}
        _report(cfg, record, out)
        return EXIT_OK

    inst, rmap = encode(problem)
    budget = inst.soft_total_halves() if cfg.budget_halves is None else cfg.budget_halves
    stats = SearchStats()
    sol = solve_fpt(inst, budget, stats)
    if sol is None:
        _report(cfg, {"status": "no-solution", "cost_halves": None, "certificate": None,
                      "nodes": stats.nodes, "relax_halves": stats.root_relaxed}, out)
        return EXIT_NO_SOLUTION
    phi, cost = sol
    cert = decode(problem, rmap, phi)
    if cfg.verify:
        try:
            verify_certificate(problem, cert)
        except CertificateError as exc:
            raise InvariantViolation(f"certificate rejected: {exc}") from None
    if 2 * cert.cost != cost:
        raise InvariantViolation(f"certificate cost {cert.cost} does not match solver cost {format_halves(cost)}")
    certificate = {"deleted": _one_based(cert.deleted)}
    if cert.labels is not None:
        certificate["labels"] = list(cert.labels)
    record = {"status": "ok", "cost_halves": cost, "cost": format_halves(cost), "certificate": certificate,
              "nodes": stats.nodes, "relax_halves": stats.root_relaxed}
    _report(cfg, record, out)
    return EXIT_OK


def _relax(cfg: RunConfig, out) -> int:
    name, problem = _problem(parse_file(cfg.input), cfg.problem)
    if name in ("fvs", "gfvs"):
        r = _gfvs_relax(_group_problem(name, problem))
        if r is None:
            _report(cfg, {"status": "ok", "relax_halves": 0, "solution": []}, out)
            return EXIT_OK
        _report(cfg, {"status": "ok", "relax_halves": r.cost, "solution": list(r.z)}, out)
        return EXIT_OK
    inst, _ = encode(problem)
    res = minimize(inst)
    status = "ok" if res.feasible else "infeasible"
    _report(cfg, {"status": status, "relax_halves": res.cost, "relax": format_halves(res.cost),
                  "solution": list(res.assignment)}, out)
    return EXIT_OK if res.feasible else EXIT_NO_SOLUTION


def _verify(cfg: RunConfig, out) -> int:
    results = suites.run_all(cfg.seed, cfg.suites)
    for r in results:
        if cfg.output == "json":
            out.write(json.dumps({"suite": r.name, "status": "pass" if r.passed else "fail",
                                  "detail": r.detail, "seconds": round(r.seconds, 3)}) + "\n")
        else:
            out.write(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail} ({r.seconds:.2f}s)\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ksubflow", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="subcommand", required=True)
    for name, text in (("solve", "solve an instance exactly"), ("relax", "print the relaxed optimum")):
        sp = sub.add_parser(name, help=text)
        sp.add_argument("input", help="instance file")
        sp.add_argument("--problem", choices=PROBLEMS, help="problem to read the file as (default by format)")
        sp.add_argument("--format", dest="output", choices=("text", "json"), default="text")
        if name == "solve":
            sp.add_argument("--budget", type=parse_budget, dest="budget_halves",
                            help="cost bound in problem units, multiples of 1/2 allowed")
            sp.add_argument("--no-verify", dest="verify", action="store_false",
                            help="skip the independent certificate check")
    vp = sub.add_parser("verify", help="run the property suites at desk scale")
    vp.add_argument("--seed", type=int, default=0)
    vp.add_argument("--suite", dest="suites", action="append", choices=list(suites.SUITES))
    vp.add_argument("--format", dest="output", choices=("text", "json"), default="text")
    return p


def run(cfg: RunConfig, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        if cfg.subcommand == "solve":
            return _solve(cfg, out)
        if cfg.subcommand == "relax":
            return _relax(cfg, out)
        return _verify(cfg, out)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except AssertionError as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__})
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
