"""Sparse variable elimination over the factor graph of a trace diagram.

Each n-vertex is a Levi-Civita factor over its incident edges (n! nonzero
entries), each matrix vertex is an (out, in) factor holding the matrix
entries.  Edges are the variables.  Summing out every non-open edge gives
the same number as the coloring sum, because improper colorings have
signature zero and so never appear in any factor.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import permutations, product
from typing import Iterable, Sequence

from .coloring import sequence_sign
from .diagram import MatrixRegistry, TraceDiagram


class Factor:
    __slots__ = ("vars", "table")

    def __init__(self, vars: tuple[str, ...], table: dict[tuple[int, ...], Fraction]):
        self.vars = vars
        self.table = table

    def __repr__(self):
        return f"Factor({self.vars}, {len(self.table)} entries)"


def _levi_civita(n: int, cilia: Sequence[str]) -> Factor:
    vars_ = tuple(dict.fromkeys(cilia))
    if len(vars_) != len(cilia):
        # a loop at the vertex repeats a color in every coloring
        return Factor(vars_, {})
    table = {p: Fraction(sequence_sign(p)) for p in permutations(range(1, n + 1))}
    return Factor(vars_, table)


def _matrix_factor(mat, in_edge: str, out_edge: str) -> Factor:
    n = len(mat)
    if in_edge == out_edge:
        return Factor((in_edge,), {(c,): mat[c - 1][c - 1] for c in range(1, n + 1) if mat[c - 1][c - 1]})
    table = {}
    for i in range(n):
        row = mat[i]
        for j in range(n):
            if row[j]:
                table[(i + 1, j + 1)] = row[j]
    return Factor((out_edge, in_edge), table)


def _multiply(a: Factor, b: Factor) -> Factor:
    shared = [v for v in a.vars if v in b.vars]
    b_only = [v for v in b.vars if v not in a.vars]
    a_pos = [a.vars.index(v) for v in shared]
    b_pos_shared = [b.vars.index(v) for v in shared]
    b_pos_rest = [b.vars.index(v) for v in b_only]
    index: dict[tuple, list] = {}
    for key, val in b.table.items():
        index.setdefault(tuple(key[p] for p in b_pos_shared), []).append(
            (tuple(key[p] for p in b_pos_rest), val)
        )
    out: dict[tuple, Fraction] = {}
    for key, val in a.table.items():
        for rest, bval in index.get(tuple(key[p] for p in a_pos), ()):
            k = key + rest
            out[k] = out.get(k, 0) + val * bval
    return Factor(a.vars + tuple(b_only), {k: v for k, v in out.items() if v})


def _sum_out(f: Factor, var: str) -> Factor:
    pos = f.vars.index(var)
    keep = f.vars[:pos] + f.vars[pos + 1:]
    out: dict[tuple, Fraction] = {}
    for key, val in f.table.items():
        k = key[:pos] + key[pos + 1:]
        out[k] = out.get(k, 0) + val
    return Factor(keep, {k: v for k, v in out.items() if v})


def build_factors(diagram: TraceDiagram, registry: MatrixRegistry | None) -> list[Factor]:
    factors = [_levi_civita(diagram.dim, v.cilia) for v in diagram.nodes]
    for m in diagram.mats:
        if registry is None:
            raise KeyError(f"unknown matrix {m.matrix!r}")
        factors.append(_matrix_factor(registry.resolve(m.matrix, m.inverted), m.in_edge, m.out_edge))
    return factors


def contract(
    diagram: TraceDiagram,
    registry: MatrixRegistry | None,
    open_edges: Iterable[str],
) -> dict[tuple[int, ...], Fraction]:
    """Sum over all edges except ``open_edges``; returns a sparse table keyed
    by the colors of ``open_edges`` in the given order.  Free loops are not
    included (the caller multiplies by n per loop)."""
    open_edges = tuple(open_edges)
    n = diagram.dim
    factors = build_factors(diagram, registry)
    for f in factors:
        if not f.table:
            return {}
    hidden = set(diagram.edges) - set(open_edges)

    while hidden:
        # greedy: eliminate the variable whose merged factor has the fewest variables
        best = None
        for var in sorted(hidden):
            touching = [f for f in factors if var in f.vars]
            scope = set().union(*(f.vars for f in touching)) if touching else set()
            cost = (len(scope), sum(len(f.table) for f in touching), var)
            if best is None or cost < best[0]:
                best = (cost, var, touching)
        _, var, touching = best
        hidden.discard(var)
        if not touching:
            # an edge with no factors: free choice of color
            factors.append(Factor((), {(): Fraction(n)}))
            continue
        merged = touching[0]
        for f in touching[1:]:
            merged = _multiply(merged, f)
        reduced = _sum_out(merged, var)
        factors = [f for f in factors if all(f is not t for t in touching)]
        if not reduced.table:
            return {}
        factors.append(reduced)

    result = Factor((), {(): Fraction(1)})
    for f in factors:
        result = _multiply(result, f)
        if not result.table:
            return {}
    # open edges touched by no factor range freely over all colors
    loose = [e for e in dict.fromkeys(open_edges) if e not in result.vars]
    if loose:
        result = _multiply(result, Factor(tuple(loose), {c: Fraction(1) for c in product(range(1, n + 1), repeat=len(loose))}))
    pos = [result.vars.index(e) for e in open_edges]
    return {tuple(key[p] for p in pos): val for key, val in result.table.items()}
