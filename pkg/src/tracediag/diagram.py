"""Trace diagram data model and structural operations.

A diagram is stored as three vertex groups (n-valent ciliated nodes,
matrix-marked degree-2 nodes, and leaves), a count of free loops, and a
framing.  Edges are implicit: an edge id exists for every id referenced by
some vertex slot, and a well-formed diagram references each id exactly twice.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

Scalar = Fraction
Matrix = tuple  # tuple[tuple[Fraction, ...], ...]


def as_scalar(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def fmt_scalar(value: Fraction) -> str:
    """Canonical text: integer when the denominator is 1, else ``p/q``."""
    return str(Fraction(value))


def as_matrix(rows) -> Matrix:
    return tuple(tuple(as_scalar(x) for x in row) for row in rows)


class DiagramError(ValueError):
    """Raised when a structural operation gets inputs it cannot handle."""


class SingularMatrixError(ZeroDivisionError):
    pass


# -- registry -----------------------------------------------------------------


class MatrixRegistry(Mapping):
    """Named square matrices of exact rationals, with cached inverse views."""

    def __init__(self, entries: Mapping[str, Sequence[Sequence]] | None = None):
        self._entries = {name: as_matrix(rows) for name, rows in (entries or {}).items()}
        for name, m in self._entries.items():
            if any(len(row) != len(m) for row in m):
                raise DiagramError(f"matrix {name!r} is not square")
        self._inverses: dict[str, Matrix] = {}

    def __getitem__(self, name: str) -> Matrix:
        return self._entries[name]

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def __repr__(self):
        return f"MatrixRegistry({sorted(self._entries)})"

    def __eq__(self, other):
        if isinstance(other, MatrixRegistry):
            return self._entries == other._entries
        return NotImplemented

    def with_matrix(self, name: str, rows) -> "MatrixRegistry":
        entries = dict(self._entries)
        entries[name] = rows
        return MatrixRegistry(entries)

    def dim_of(self, name: str) -> int:
        return len(self._entries[name])

    def resolve(self, name: str, inverted: bool = False) -> Matrix:
        try:
            m = self._entries[name]
        except KeyError:
            raise KeyError(f"unknown matrix {name!r}") from None
        if not inverted:
            return m
        if name not in self._inverses:
            from .linalg import inverse

            self._inverses[name] = inverse(m)
        return self._inverses[name]


# -- vertices -----------------------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    id: str
    edge: str


@dataclass(frozen=True)
class MatrixNode:
    id: str
    matrix: str
    in_edge: str
    out_edge: str
    inverted: bool = False


@dataclass(frozen=True)
class NNode:
    """An n-valent vertex; ``cilia`` lists incident edges in ciliation order."""

    id: str
    cilia: tuple[str, ...]


@dataclass(frozen=True)
class Violation:
    kind: str
    subject: str
    detail: str = ""

    def __str__(self):
        text = f"{self.kind}: {self.subject}"
        return f"{text} ({self.detail})" if self.detail else text


@dataclass(frozen=True)
class TraceDiagram:
    dim: int
    nodes: tuple[NNode, ...] = ()
    mats: tuple[MatrixNode, ...] = ()
    leaves: tuple[Leaf, ...] = ()
    free_loops: int = 0
    inputs: tuple[str, ...] = ()
    outputs: tuple[str, ...] = ()

    def __post_init__(self):
        # normalise sequences so equality is structural
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "mats", tuple(self.mats))
        object.__setattr__(self, "leaves", tuple(self.leaves))
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        for v in self.nodes:
            if not isinstance(v.cilia, tuple):
                object.__setattr__(v, "cilia", tuple(v.cilia))

    # -- derived views --

    def slots(self) -> list[tuple[str, str, int]]:
        """Every (vertex id, edge id, slot index) occurrence, in vertex order."""
        out = []
        for v in self.nodes:
            out.extend((v.id, e, i) for i, e in enumerate(v.cilia))
        for m in self.mats:
            out.append((m.id, m.in_edge, 0))
            out.append((m.id, m.out_edge, 1))
        for leaf in self.leaves:
            out.append((leaf.id, leaf.edge, 0))
        return out

    @property
    def edges(self) -> dict[str, list[tuple[str, int]]]:
        """Edge id -> its endpoint (vertex, slot) pairs, in first-seen order."""
        ends: dict[str, list[tuple[str, int]]] = {}
        for vid, e, slot in self.slots():
            ends.setdefault(e, []).append((vid, slot))
        return ends

    def edge_ids(self) -> list[str]:
        return sorted(self.edges)

    @property
    def leaf_edges(self) -> dict[str, str]:
        return {leaf.id: leaf.edge for leaf in self.leaves}

    @property
    def is_closed(self) -> bool:
        return not self.leaves

    @property
    def arity(self) -> tuple[int, int]:
        return len(self.inputs), len(self.outputs)

    def vertex_ids(self) -> list[str]:
        return [v.id for v in (*self.nodes, *self.mats, *self.leaves)]

    def node(self, vid: str) -> NNode:
        for v in self.nodes:
            if v.id == vid:
                return v
        raise DiagramError(f"{vid!r} is not an n-vertex of this diagram")


# -- validation ---------------------------------------------------------------


def validate(diagram: TraceDiagram) -> list[Violation]:
    """Return every broken invariant; an empty list means the diagram is ok."""
    d = diagram
    found: list[Violation] = []
    if d.dim < 2:
        found.append(Violation("dimension", str(d.dim), "dim must be at least 2"))
    if d.free_loops < 0:
        found.append(Violation("free loops", str(d.free_loops), "negative count"))

    ids = Counter(d.vertex_ids())
    for vid, count in ids.items():
        if count > 1:
            found.append(Violation("duplicate vertex", vid, f"declared {count} times"))

    for v in d.nodes:
        if len(v.cilia) != d.dim:
            found.append(
                Violation("n-vertex degree", v.id, f"has {len(v.cilia)} slots, expected {d.dim}")
            )

    for e, ends in d.edges.items():
        if len(ends) != 2:
            found.append(
                Violation("edge endpoints", e, f"referenced {len(ends)} times, expected 2")
            )

    leaf_ids = {leaf.id for leaf in d.leaves}
    framed = Counter(d.inputs) + Counter(d.outputs)
    for lid, count in framed.items():
        if lid not in leaf_ids:
            found.append(Violation("framing", lid, "not a leaf of this diagram"))
        elif count > 1:
            found.append(Violation("framing", lid, "listed more than once"))
    for leaf in d.leaves:
        if leaf.id not in framed:
            found.append(Violation("unframed leaf", leaf.id))
    return found


def is_valid(diagram: TraceDiagram) -> bool:
    return not validate(diagram)


def _require_valid(diagram: TraceDiagram, what: str = "diagram"):
    problems = validate(diagram)
    if problems:
        raise DiagramError(f"invalid {what}: " + "; ".join(map(str, problems)))


# -- structural operations ----------------------------------------------------


def transpose(diagram: TraceDiagram) -> TraceDiagram:
    """Reverse the orientation of every matrix node."""
    mats = tuple(replace(m, in_edge=m.out_edge, out_edge=m.in_edge) for m in diagram.mats)
    return replace(diagram, mats=mats)


def relabel(diagram: TraceDiagram, names: Mapping[str, str]) -> TraceDiagram:
    """Replace matrix labels by ``names[label]`` (labels not in the map are kept)."""
    mats = tuple(replace(m, matrix=names.get(m.matrix, m.matrix)) for m in diagram.mats)
    return replace(diagram, mats=mats)


def _all_ids(d: TraceDiagram) -> set[str]:
    return set(d.vertex_ids()) | set(d.edges)


def _prefixed(d: TraceDiagram, prefix: str) -> TraceDiagram:
    p = prefix.__add__
    return TraceDiagram(
        dim=d.dim,
        nodes=tuple(NNode(p(v.id), tuple(map(p, v.cilia))) for v in d.nodes),
        mats=tuple(
            MatrixNode(p(m.id), m.matrix, p(m.in_edge), p(m.out_edge), m.inverted) for m in d.mats
        ),
        leaves=tuple(Leaf(p(leaf.id), p(leaf.edge)) for leaf in d.leaves),
        free_loops=d.free_loops,
        inputs=tuple(map(p, d.inputs)),
        outputs=tuple(map(p, d.outputs)),
    )


def _disjoint_pair(a: TraceDiagram, b: TraceDiagram):
    if _all_ids(a) & _all_ids(b):
        return _prefixed(a, "l."), _prefixed(b, "r.")
    return a, b


def tensor_product(left: TraceDiagram, right: TraceDiagram) -> TraceDiagram:
    """Place ``right`` beside ``left``; identifiers are prefixed only on a clash."""
    if left.dim != right.dim:
        raise DiagramError(f"dimension mismatch: {left.dim} vs {right.dim}")
    _require_valid(left, "left diagram")
    _require_valid(right, "right diagram")
    a, b = _disjoint_pair(left, right)
    return TraceDiagram(
        dim=a.dim,
        nodes=a.nodes + b.nodes,
        mats=a.mats + b.mats,
        leaves=a.leaves + b.leaves,
        free_loops=a.free_loops + b.free_loops,
        inputs=a.inputs + b.inputs,
        outputs=a.outputs + b.outputs,
    )


def compose(first: TraceDiagram, second: TraceDiagram) -> TraceDiagram:
    """Glue the outputs of ``first`` onto the inputs of ``second``.

    Output leaf i of ``first`` and input leaf i of ``second`` are removed and
    their edges merged.  Chains of merged edges that end up with no endpoints
    become free loops.
    """
    if first.dim != second.dim:
        raise DiagramError(f"dimension mismatch: {first.dim} vs {second.dim}")
    if len(first.outputs) != len(second.inputs):
        raise DiagramError(
            f"arity mismatch: {len(first.outputs)} outputs glued to {len(second.inputs)} inputs"
        )
    _require_valid(first, "first diagram")
    _require_valid(second, "second diagram")
    a, b = _disjoint_pair(first, second)

    parent: dict[str, str] = {}

    def find(e):
        while parent.get(e, e) != e:
            e = parent[e]
        return e

    order = {e: i for i, e in enumerate([*a.edges, *b.edges])}
    a_leaf, b_leaf = a.leaf_edges, b.leaf_edges
    for out_leaf, in_leaf in zip(a.outputs, b.inputs):
        x, y = find(a_leaf[out_leaf]), find(b_leaf[in_leaf])
        if x != y:
            # keep the earliest edge id as the representative
            if order[y] < order[x]:
                x, y = y, x
            parent[y] = x

    removed = set(a.outputs) | set(b.inputs)
    ren = lambda e: find(e)  # noqa: E731
    nodes = tuple(NNode(v.id, tuple(map(ren, v.cilia))) for v in (*a.nodes, *b.nodes))
    mats = tuple(replace(m, in_edge=ren(m.in_edge), out_edge=ren(m.out_edge)) for m in (*a.mats, *b.mats))
    leaves = tuple(
        Leaf(leaf.id, ren(leaf.edge)) for leaf in (*a.leaves, *b.leaves) if leaf.id not in removed
    )
    glued = TraceDiagram(a.dim, nodes, mats, leaves, 0, a.inputs, b.outputs)
    surviving = set(glued.edges)
    closed = {find(e) for e in order} - surviving
    return replace(glued, free_loops=a.free_loops + b.free_loops + len(closed))


def reframe(diagram: TraceDiagram, new_inputs: Sequence[str], new_outputs: Sequence[str]) -> TraceDiagram:
    leaves = [leaf.id for leaf in diagram.leaves]
    given = list(new_inputs) + list(new_outputs)
    if sorted(given) != sorted(leaves) or len(set(given)) != len(given):
        raise DiagramError("new framing does not partition the leaves")
    return replace(diagram, inputs=tuple(new_inputs), outputs=tuple(new_outputs))


# -- compatible partition number ----------------------------------------------


def _marking_keys(diagram: TraceDiagram) -> list[tuple[MatrixNode, set[tuple]]]:
    """Each matrix marking with its candidate (label, vertex, orientation) keys."""
    owner: dict[str, list[str]] = defaultdict(list)
    for v in diagram.nodes:
        for e in v.cilia:
            owner[e].append(v.id)
    result = []
    for m in diagram.mats:
        keys = set()
        label = (m.matrix, m.inverted)
        for vid in owner.get(m.out_edge, ()):
            keys.add((label, vid, "toward"))
        for vid in owner.get(m.in_edge, ()):
            keys.add((label, vid, "away"))
        result.append((m, keys))
    return result


def compatible_partition_number(diagram: TraceDiagram) -> int:
    """Minimum number of compatible matrix collections covering all markings.

    A marking may touch two n-vertices (or one vertex from both sides); it
    then has two candidate collections and we search for the smallest cover.
    """
    marks = _marking_keys(diagram)
    for m, keys in marks:
        if not keys:
            raise DiagramError(f"matrix marking {m.id!r} is not adjacent to any n-vertex")
    forced = {next(iter(keys)) for _, keys in marks if len(keys) == 1}
    open_marks = [keys for _, keys in marks if not keys & forced]
    if not open_marks:
        return len(forced)
    candidates = sorted(set().union(*open_marks), key=repr)
    for size in range(1, len(open_marks) + 1):
        for extra in combinations(candidates, size):
            chosen = set(extra)
            if all(keys & chosen for keys in open_marks):
                return len(forced) + size
    raise AssertionError("unreachable: every marking has a candidate key")


def empty_diagram(dim: int) -> TraceDiagram:
    return TraceDiagram(dim)


def rename_vertices(diagram: TraceDiagram, mapping: Mapping[str, str]) -> TraceDiagram:
    """Rename vertex and edge ids through one mapping (missing ids are kept)."""
    r = lambda x: mapping.get(x, x)  # noqa: E731
    return TraceDiagram(
        dim=diagram.dim,
        nodes=tuple(NNode(r(v.id), tuple(map(r, v.cilia))) for v in diagram.nodes),
        mats=tuple(
            MatrixNode(r(m.id), m.matrix, r(m.in_edge), r(m.out_edge), m.inverted)
            for m in diagram.mats
        ),
        leaves=tuple(Leaf(r(leaf.id), r(leaf.edge)) for leaf in diagram.leaves),
        free_loops=diagram.free_loops,
        inputs=tuple(map(r, diagram.inputs)),
        outputs=tuple(map(r, diagram.outputs)),
    )


def iter_matrix_names(diagrams: Iterable[TraceDiagram]) -> set[str]:
    return {m.matrix for d in diagrams for m in d.mats}


__all__ = [
    "DiagramError",
    "Leaf",
    "MatrixNode",
    "MatrixRegistry",
    "NNode",
    "Scalar",
    "SingularMatrixError",
    "TraceDiagram",
    "Violation",
    "as_matrix",
    "as_scalar",
    "compatible_partition_number",
    "compose",
    "empty_diagram",
    "fmt_scalar",
    "is_valid",
    "reframe",
    "relabel",
    "rename_vertices",
    "tensor_product",
    "transpose",
    "validate",
]
