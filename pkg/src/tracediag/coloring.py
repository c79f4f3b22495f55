"""Signed edge colorings of trace diagrams.

Colors are the integers 1..n.  A coloring is *proper* when the colors around
every n-vertex are pairwise distinct; matrix vertices impose no constraint.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Mapping, Sequence

from .diagram import DiagramError, MatrixRegistry, TraceDiagram

NOT_A_PERMUTATION = "not a permutation"

ONE = Fraction(1)
ZERO = Fraction(0)


@dataclass(frozen=True)
class Coloring:
    """A total coloring: one color per edge plus one per free loop."""

    assignment: Mapping[str, int]
    loop_colors: tuple[int, ...] = ()

    def __getitem__(self, edge: str) -> int:
        return self.assignment[edge]

    def sort_key(self):
        return tuple(self.assignment[e] for e in sorted(self.assignment)) + self.loop_colors

    def __hash__(self):
        return hash((tuple(sorted(self.assignment.items())), self.loop_colors))

    def __eq__(self, other):
        if not isinstance(other, Coloring):
            return NotImplemented
        return dict(self.assignment) == dict(other.assignment) and self.loop_colors == other.loop_colors


PreColoring = Mapping[str, int]


# -- permutations ------------------------------------------------------------


def inversions(seq: Sequence) -> int:
    return sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])


def is_permutation(p: Sequence[int]) -> bool:
    return sorted(p) == list(range(1, len(p) + 1))


def permutation_sign(p: Sequence[int]) -> int:
    """Sign of a permutation of 1..m given in one-line notation."""
    if not is_permutation(p):
        raise ValueError(f"{tuple(p)} is not a permutation of 1..{len(p)}")
    return -1 if inversions(p) % 2 else 1


def sequence_sign(seq: Sequence) -> int:
    """Sign of the permutation that sorts a sequence of distinct items; 0 on repeats."""
    if len(set(seq)) != len(seq):
        return 0
    return -1 if inversions(seq) % 2 else 1


def reversal_sign(m: int) -> int:
    """Sign relating a tuple of length m to its reversal: (-1)^floor(m/2)."""
    if m < 0:
        raise ValueError("m must be non-negative")
    return -1 if (m // 2) % 2 else 1


# -- per-coloring quantities -------------------------------------------------


def vertex_permutation(diagram: TraceDiagram, coloring, vertex: str):
    """Colors read off in ciliation order at an n-vertex.

    Returns the tuple, or ``NOT_A_PERMUTATION`` when a color repeats.
    """
    v = diagram.node(vertex)
    colors = tuple(_color(coloring, e) for e in v.cilia)
    if len(set(colors)) != len(colors):
        return NOT_A_PERMUTATION
    return colors


def _color(coloring, edge):
    if isinstance(coloring, Coloring):
        return coloring.assignment[edge]
    return coloring[edge]


def signature(diagram: TraceDiagram, coloring) -> int:
    s = 1
    for v in diagram.nodes:
        p = vertex_permutation(diagram, coloring, v.id)
        if p is NOT_A_PERMUTATION:
            return 0
        if not is_permutation(p):
            return 0
        s *= permutation_sign(p)
    return s


def coefficient(diagram: TraceDiagram, coloring, registry: MatrixRegistry | None) -> Fraction:
    value = ONE
    for m in diagram.mats:
        if registry is None:
            raise KeyError(f"unknown matrix {m.matrix!r}")
        mat = registry.resolve(m.matrix, m.inverted)
        value *= mat[_color(coloring, m.out_edge) - 1][_color(coloring, m.in_edge) - 1]
        if not value:
            return ZERO
    return value


# -- enumeration -------------------------------------------------------------


def _check_pre(diagram: TraceDiagram, pre: PreColoring):
    edges = diagram.edges
    for e, c in pre.items():
        if e not in edges:
            raise DiagramError(f"pre-coloring names unknown edge {e!r}")
        if not (isinstance(c, int) and 1 <= c <= diagram.dim):
            raise DiagramError(f"color {c!r} on edge {e!r} is outside 1..{diagram.dim}")


def _variable_order(diagram: TraceDiagram, free: Sequence[str]) -> list[str]:
    hits: dict[str, int] = {e: 0 for e in free}
    for v in diagram.nodes:
        for e in set(v.cilia):
            if e in hits:
                hits[e] += 1
    return sorted(free, key=lambda e: (-hits[e], e))


def _raw_extensions(diagram: TraceDiagram, pre: PreColoring) -> Iterator[dict[str, int]]:
    """Backtracking over edge colors; yields proper total edge colorings (no loops)."""
    n = diagram.dim
    at_nodes: dict[str, list[str]] = {}
    for v in diagram.nodes:
        for e in v.cilia:
            at_nodes.setdefault(e, []).append(v.id)
    used: dict[str, set[int]] = {v.id: set() for v in diagram.nodes}

    assignment: dict[str, int] = {}

    def place(e, c) -> bool:
        touched = []
        for vid in at_nodes.get(e, ()):
            if c in used[vid]:
                for t in touched:
                    used[t].discard(c)
                return False
            used[vid].add(c)
            touched.append(vid)
        assignment[e] = c
        return True

    def unplace(e, c):
        for vid in at_nodes.get(e, ()):
            used[vid].discard(c)
        del assignment[e]

    for e in sorted(pre):
        if not place(e, pre[e]):
            return

    order = _variable_order(diagram, [e for e in diagram.edges if e not in pre])

    def walk(depth):
        if depth == len(order):
            yield dict(assignment)
            return
        e = order[depth]
        for c in range(1, n + 1):
            if place(e, c):
                yield from walk(depth + 1)
                unplace(e, c)

    yield from walk(0)


def enumerate_extensions(diagram: TraceDiagram, pre: PreColoring | None = None) -> list[Coloring]:
    """All proper colorings extending ``pre``, sorted by (edge id, color).

    Free loops are enumerated as well, one color each.
    """
    pre = dict(pre or {})
    _check_pre(diagram, pre)
    loops = list(product(range(1, diagram.dim + 1), repeat=diagram.free_loops))
    found = [Coloring(a, tuple(lc)) for a in _raw_extensions(diagram, pre) for lc in loops]
    found.sort(key=Coloring.sort_key)
    return found


def all_total_colorings(diagram: TraceDiagram) -> Iterator[Coloring]:
    """Every assignment of 1..n to edges and free loops, proper or not."""
    edges = sorted(diagram.edges)
    n = diagram.dim
    for combo in product(range(1, n + 1), repeat=len(edges) + diagram.free_loops):
        yield Coloring(dict(zip(edges, combo)), tuple(combo[len(edges):]))


# -- sums --------------------------------------------------------------------


def chromatic_index(diagram: TraceDiagram, pre: PreColoring | None = None) -> Fraction:
    """Signed chromatic (sub)index of a matrix-free diagram."""
    if diagram.mats:
        raise DiagramError("chromatic_index needs a diagram without matrix vertices")
    pre = dict(pre or {})
    _check_pre(diagram, pre)
    total = sum(signature(diagram, k) for k in _raw_extensions(diagram, pre))
    return Fraction(total * diagram.dim ** diagram.free_loops)


def weight(diagram: TraceDiagram, leaf_coloring: PreColoring, registry: MatrixRegistry | None = None) -> Fraction:
    """Sum of signature times coefficient over proper extensions of a leaf coloring."""
    leaf_edges = set(diagram.leaf_edges.values())
    if set(leaf_coloring) != leaf_edges:
        raise DiagramError("leaf coloring must color exactly the edges adjacent to leaves")
    _check_pre(diagram, leaf_coloring)
    total = ZERO
    for k in _raw_extensions(diagram, leaf_coloring):
        total += signature(diagram, k) * coefficient(diagram, k, registry)
    return total * diagram.dim ** diagram.free_loops


def closed_value(diagram: TraceDiagram, registry: MatrixRegistry | None = None, method: str = "enumerate") -> Fraction:
    if diagram.leaves:
        raise DiagramError("closed_value needs a diagram without leaves")
    if method == "contract":
        from .contract import contract

        table = contract(diagram, registry, open_edges=())
        return table.get((), ZERO) * diagram.dim ** diagram.free_loops
    if method != "enumerate":
        raise ValueError(f"unknown method {method!r}")
    return weight(diagram, {}, registry)


def exhaustive_extensions(diagram: TraceDiagram, pre: PreColoring | None = None) -> list[Coloring]:
    """Oracle: filter every total coloring for properness and agreement with ``pre``."""
    pre = dict(pre or {})
    hits = [
        k
        for k in all_total_colorings(diagram)
        if all(k.assignment[e] == c for e, c in pre.items()) and signature(diagram, k) != 0
    ]
    hits.sort(key=Coloring.sort_key)
    return hits
