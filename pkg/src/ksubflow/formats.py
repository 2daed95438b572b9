"""Plain-text instance formats (1-based indices, DIMACS style).

* graph:     ``p edge n m`` then ``e u v [w]``
* multiway:  the graph format plus ``t v`` terminal lines
* 2-CNF:     ``p wcnf n m top`` then ``w l1 [l2] 0``; weight ``top`` is crisp
* ULC:       ``p ulc n m k`` then ``e u v w p1 .. pk`` (label(v) = p[label(u)])
* GFVS:      ``p gfvs n m <group>`` then ``e u v g``; group is ``z q``,
  ``z2pow m`` or ``perm k``, and ``g`` a residue, a hexadecimal mask or a
  one-line permutation

Lines starting with ``c`` and blank lines are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .gfvs import LabelledGraph, parse_group
from .reductions import Clause, Cnf2, Graph, MultiwayCutEdge, UlcEdge


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class WeightedCnf:
    cnf: Cnf2
    top: int


Parsed = Union[Graph, MultiwayCutEdge, WeightedCnf, UlcEdge, LabelledGraph]


def _records(text: str):
    for lineno, line in enumerate(text.splitlines(), 1):
        toks = line.split()
        if toks and toks[0] != "c":
            yield lineno, toks


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"line {lineno}: expected an integer, got {tok!r}") from None


def _vertex(tok: str, n: int, lineno: int) -> int:
    v = _int(tok, lineno)
    if not 1 <= v <= n:
        raise ParseError(f"line {lineno}: vertex {v} outside 1..{n}")
    return v - 1


def parse_text(text: str) -> Parsed:
    recs = list(_records(text))
    if not recs or recs[0][1][0] != "p" or len(recs[0][1]) < 2:
        raise ParseError("missing 'p' header line")
    lineno, head = recs[0]
    body = recs[1:]
    kind = head[1]
    try:
        if kind == "edge":
            return _parse_graph(head, body, lineno)
        if kind == "wcnf":
            return _parse_wcnf(head, body, lineno)
        if kind == "ulc":
            return _parse_ulc(head, body, lineno)
        if kind == "gfvs":
            return _parse_gfvs(head, body, lineno)
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    raise ParseError(f"line {lineno}: unknown format {kind!r}")


def parse_file(path: str) -> Parsed:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_text(text)


def _header_ints(head, count, lineno):
    if len(head) != 2 + count:
        raise ParseError(f"line {lineno}: malformed header {' '.join(head)!r}")
    vals = [_int(t, lineno) for t in head[2:]]
    if any(v < 0 for v in vals):
        raise ParseError(f"line {lineno}: negative header value")
    return vals


def _check_count(found: int, declared: int, what: str):
    if found != declared:
        raise ParseError(f"header declares {declared} {what}, found {found}")


def _parse_graph(head, body, lineno):
    n, m = _header_ints(head, 2, lineno)
    edges, terminals = [], []
    for ln, toks in body:
        if toks[0] == "e" and len(toks) in (3, 4):
            u, v = _vertex(toks[1], n, ln), _vertex(toks[2], n, ln)
            w = _int(toks[3], ln) if len(toks) == 4 else 1
            if w <= 0:
                raise ParseError(f"line {ln}: edge weight must be positive")
            edges.append((u, v, w))
        elif toks[0] == "t" and len(toks) == 2:
            terminals.append(_vertex(toks[1], n, ln))
        else:
            raise ParseError(f"line {ln}: unexpected record {' '.join(toks)!r}")
    _check_count(len(edges), m, "edges")
    g = Graph(n, tuple(edges))
    if terminals:
        return MultiwayCutEdge(g, tuple(terminals))
    return g


def _parse_wcnf(head, body, lineno):
    n, m, top = _header_ints(head, 3, lineno)
    clauses = []
    for ln, toks in body:
        vals = [_int(t, ln) for t in toks]
        if len(vals) < 3 or vals[-1] != 0 or len(vals) > 4:
            raise ParseError(f"line {ln}: clause must be 'w l1 [l2] 0'")
        w, lits = vals[0], tuple(vals[1:-1])
        if w <= 0 or w > top:
            raise ParseError(f"line {ln}: weight {w} outside 1..{top}")
        for l in lits:
            if l == 0 or abs(l) > n:
                raise ParseError(f"line {ln}: literal {l} out of range")
        crisp = w == top
        clauses.append(Clause(lits, 1 if crisp else w, crisp))
    _check_count(len(clauses), m, "clauses")
    return WeightedCnf(Cnf2(n, tuple(clauses)), top)


def _parse_ulc(head, body, lineno):
    n, m, k = _header_ints(head, 3, lineno)
    if k < 1:
        raise ParseError(f"line {lineno}: label count must be positive")
    edges = []
    for ln, toks in body:
        if toks[0] != "e" or len(toks) != 4 + k:
            raise ParseError(f"line {ln}: edge must be 'e u v w p1 .. p{k}'")
        u, v = _vertex(toks[1], n, ln), _vertex(toks[2], n, ln)
        w = _int(toks[3], ln)
        perm = tuple(_int(t, ln) for t in toks[4:])
        if sorted(perm) != list(range(1, k + 1)):
            raise ParseError(f"line {ln}: {' '.join(toks[4:])} is not a permutation of 1..{k}")
        if w <= 0:
            raise ParseError(f"line {ln}: edge weight must be positive")
        edges.append((u, v, w, perm))
    _check_count(len(edges), m, "edges")
    return UlcEdge(n, k, tuple(edges))


def _parse_gfvs(head, body, lineno):
    if len(head) != 6:
        raise ParseError(f"line {lineno}: header must be 'p gfvs n m <group> <size>'")
    n, m = (_int(t, lineno) for t in head[2:4])
    try:
        grp = parse_group(head[4:])
    except ValueError as exc:
        raise ParseError(f"line {lineno}: {exc}") from None
    edges = []
    for ln, toks in body:
        if toks[0] != "e" or len(toks) < 4:
            raise ParseError(f"line {ln}: edge must be 'e u v g'")
        u, v = _vertex(toks[1], n, ln), _vertex(toks[2], n, ln)
        try:
            g = grp.parse(" ".join(toks[3:]))
        except ValueError as exc:
            raise ParseError(f"line {ln}: {exc}") from None
        edges.append((u, v, g))
    _check_count(len(edges), m, "edges")
    return LabelledGraph(n, grp, edges)


# ---------------------------------------------------------------------------
# emitters


def emit(obj: Parsed) -> str:
    if isinstance(obj, MultiwayCutEdge):
        return emit(obj.graph) + "".join(f"t {t + 1}\n" for t in obj.terminals)
    if isinstance(obj, Graph):
        lines = [f"p edge {obj.n} {len(obj.edges)}"]
        lines += [f"e {u + 1} {v + 1}" + (f" {w}" if w != 1 else "") for u, v, w in obj.edges]
        return "\n".join(lines) + "\n"
    if isinstance(obj, WeightedCnf):
        lines = [f"p wcnf {obj.cnf.n} {len(obj.cnf.clauses)} {obj.top}"]
        for c in obj.cnf.clauses:
            w = obj.top if c.crisp else c.weight
            lines.append(" ".join(map(str, (w, *c.literals, 0))))
        return "\n".join(lines) + "\n"
    if isinstance(obj, UlcEdge):
        lines = [f"p ulc {obj.n} {len(obj.edges)} {obj.k}"]
        lines += [" ".join(map(str, ("e", u + 1, v + 1, w, *p))) for u, v, w, p in obj.edges]
        return "\n".join(lines) + "\n"
    if isinstance(obj, LabelledGraph):
        lines = [f"p gfvs {obj.n} {len(obj.edges)} {obj.group.header()}"]
        lines += [f"e {u + 1} {v + 1} {obj.group.format(g)}" for u, v, g in obj.edges]
        return "\n".join(lines) + "\n"
    raise TypeError(f"cannot emit {type(obj).__name__}")
