"""Programmatic constructors for the diagrams used throughout the suite.

Layout convention: an n-vertex lists its lower legs left to right, then its
upper legs right to left.  Inputs sit at the bottom, outputs at the top, both
ordered left to right.  A matrix label is "upward" when its in-edge is the
lower one.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .diagram import Leaf, MatrixNode, NNode, TraceDiagram
from .linalg import det

# a label is a matrix name or (name, inverted)
Label = "str | tuple[str, bool]"


def _label(lab):
    if isinstance(lab, str):
        return lab, False
    name, inv = lab
    return name, bool(inv)


class Builder:
    def __init__(self, dim: int):
        self.dim = dim
        self.nodes: list[NNode] = []
        self.mats: list[MatrixNode] = []
        self.leaves: list[Leaf] = []
        self.inputs: list[str] = []
        self.outputs: list[str] = []
        self.loops = 0
        self._count = {"e": 0, "n": 0, "m": 0, "i": 0, "o": 0}

    def _fresh(self, kind):
        self._count[kind] += 1
        return f"{kind}{self._count[kind]}"

    def edge(self) -> str:
        return self._fresh("e")

    def node(self, cilia: Sequence[str]) -> str:
        vid = self._fresh("n")
        self.nodes.append(NNode(vid, tuple(cilia)))
        return vid

    def mat(self, label, in_edge: str, out_edge: str) -> str:
        name, inv = _label(label)
        vid = self._fresh("m")
        self.mats.append(MatrixNode(vid, name, in_edge, out_edge, inv))
        return vid

    def chain(self, labels=(), upward: bool = True) -> tuple[str, str]:
        """A strand carrying ``labels`` listed bottom to top; returns (bottom edge, top edge)."""
        edges = [self.edge()]
        for lab in labels:
            nxt = self.edge()
            lo, hi = edges[-1], nxt
            if upward:
                self.mat(lab, lo, hi)
            else:
                self.mat(lab, hi, lo)
            edges.append(nxt)
        return edges[0], edges[-1]

    def input(self, edge: str) -> str:
        lid = self._fresh("i")
        self.leaves.append(Leaf(lid, edge))
        self.inputs.append(lid)
        return lid

    def output(self, edge: str) -> str:
        lid = self._fresh("o")
        self.leaves.append(Leaf(lid, edge))
        self.outputs.append(lid)
        return lid

    def build(self) -> TraceDiagram:
        return TraceDiagram(
            self.dim,
            tuple(self.nodes),
            tuple(self.mats),
            tuple(self.leaves),
            self.loops,
            tuple(self.inputs),
            tuple(self.outputs),
        )


def place_node(b: Builder, lower: Sequence[str], upper: Sequence[str]) -> str:
    """Add an n-vertex whose lower legs (left to right) and upper legs (left to right) are given."""
    return b.node(list(lower) + list(reversed(upper)))


# -- elementary diagrams -------------------------------------------------------


def strand(n: int, labels=(), upward: bool = True) -> TraceDiagram:
    b = Builder(n)
    lo, hi = b.chain(labels, upward)
    b.input(lo)
    b.output(hi)
    return b.build()


def parallel(n: int, count: int = 2) -> TraceDiagram:
    b = Builder(n)
    edges = [b.edge() for _ in range(count)]
    for e in edges:
        b.input(e)
    for e in edges:
        b.output(e)
    return b.build()


def swap(n: int) -> TraceDiagram:
    b = Builder(n)
    e1, e2 = b.edge(), b.edge()
    b.input(e1)
    b.input(e2)
    b.output(e2)
    b.output(e1)
    return b.build()


def cap(n: int) -> TraceDiagram:
    b = Builder(n)
    e = b.edge()
    b.input(e)
    b.input(e)
    return b.build()


def cup(n: int) -> TraceDiagram:
    b = Builder(n)
    e = b.edge()
    b.output(e)
    b.output(e)
    return b.build()


def free_loops(n: int, count: int = 1) -> TraceDiagram:
    return TraceDiagram(n, free_loops=count)


def matrix_loop(n: int, label="A") -> TraceDiagram:
    """A closed strand through one matrix vertex; its value is the trace."""
    b = Builder(n)
    e = b.edge()
    b.mat(label, e, e)
    return b.build()


def matrix_cycle(n: int, labels=("A",)) -> TraceDiagram:
    """A closed strand carrying several matrices in a row."""
    b = Builder(n)
    edges = [b.edge() for _ in labels]
    for t, lab in enumerate(labels):
        b.mat(lab, edges[t], edges[(t + 1) % len(edges)])
    return b.build()


def theta(n: int = 2) -> TraceDiagram:
    """Two n-vertices joined by n edges (closed, no matrices)."""
    b = Builder(n)
    mids = [b.edge() for _ in range(n)]
    place_node(b, [], mids)
    place_node(b, mids, [])
    return b.build()


def polygon(n: int, sides: int = 3) -> TraceDiagram:
    """A cycle of 2-valent ciliated vertices (only meaningful for n = 2)."""
    b = Builder(n)
    edges = [b.edge() for _ in range(sides)]
    for t in range(sides):
        b.node([edges[t], edges[(t + 1) % sides]] + [b.edge() for _ in range(n - 2)])
    return b.build()


def barbell(n: int = 3) -> TraceDiagram:
    """Two vertices each carrying a loop, joined by a bar (needs n = 3)."""
    if n != 3:
        raise ValueError("the barbell is a trivalent diagram")
    b = Builder(n)
    left, bar, right = b.edge(), b.edge(), b.edge()
    b.node([left, left, bar])
    b.node([bar, right, right])
    return b.build()


def single_vertex(n: int) -> TraceDiagram:
    """One n-vertex with every leg an input leaf, in ciliation order."""
    b = Builder(n)
    legs = [b.edge() for _ in range(n)]
    b.node(legs)
    for e in legs:
        b.input(e)
    return b.build()


def one_node(n: int, k: int, lower_labels=(), upper_labels=(), upper_upward: bool = True) -> TraceDiagram:
    """One n-vertex with k inputs below and n-k outputs above.

    ``lower_labels`` decorate each input leg (oriented toward the vertex);
    ``upper_labels`` decorate each output leg, oriented up or down.
    """
    b = Builder(n)
    lower, upper = [], []
    for _ in range(k):
        lo, hi = b.chain(lower_labels, upward=True)
        b.input(lo)
        lower.append(hi)
    tops = []
    for _ in range(n - k):
        lo, hi = b.chain(upper_labels, upward=upper_upward)
        upper.append(lo)
        tops.append(hi)
    place_node(b, lower, upper)
    for e in tops:
        b.output(e)
    return b.build()


def two_node(n: int, k: int, middle_labels=(), upward: bool = True) -> TraceDiagram:
    """Lower vertex with k inputs, upper vertex with k outputs, n-k strands between."""
    b = Builder(n)
    ins = [b.edge() for _ in range(k)]
    mids = [b.chain(middle_labels, upward) for _ in range(n - k)]
    outs = [b.edge() for _ in range(k)]
    for e in ins:
        b.input(e)
    place_node(b, ins, [lo for lo, _ in mids])
    place_node(b, [hi for _, hi in mids], outs)
    for e in outs:
        b.output(e)
    return b.build()


def cross_product() -> TraceDiagram:
    return one_node(3, 2)


def binor() -> TraceDiagram:
    return two_node(3, 2)


def determinant_diagram(n: int, label="A") -> TraceDiagram:
    return two_node(n, 0, (label,))


def cofactor_diagram(n: int, k: int, label="A") -> TraceDiagram:
    return two_node(n, k, (label,), upward=True)


def adjugate_diagram(n: int, i: int = 1, label="A") -> TraceDiagram:
    return two_node(n, i, (label,), upward=False)


def minor_diagram(n: int, k: int, label="A", form: int = 1) -> TraceDiagram:
    """k labelled outputs above, n-k bare inputs below.

    Form 1 orients the labels away from the vertex, form 2 toward it.
    """
    return one_node(n, n - k, upper_labels=(label,), upper_upward=(form == 1))


def cut_paste_rhs(n: int, k: int, label="A") -> TraceDiagram:
    """k bare outputs above, n-k labelled inputs below."""
    return one_node(n, n - k, lower_labels=(label,))


def inverse_form_rhs(n: int, k: int, label="A") -> TraceDiagram:
    """k outputs carrying the inverse (oriented toward the vertex), n-k bare inputs."""
    return one_node(n, n - k, upper_labels=((label, True),), upper_upward=False)


def bubble_jacobi(n: int, k: int, label="A", upward: bool = False) -> TraceDiagram:
    """n-k inputs, n-k outputs, k adjugate bubbles between two n-vertices."""
    b = Builder(n)
    ins = [b.edge() for _ in range(n - k)]
    for e in ins:
        b.input(e)
    lower_links, upper_links = [], []
    for _ in range(k):
        down, up = b.edge(), b.edge()
        mids = [b.chain((label,), upward) for _ in range(n - 1)]
        place_node(b, [down], [lo for lo, _ in mids])
        place_node(b, [hi for _, hi in mids], [up])
        lower_links.append(down)
        upper_links.append(up)
    outs = [b.edge() for _ in range(n - k)]
    place_node(b, ins, lower_links)
    place_node(b, upper_links, outs)
    for e in outs:
        b.output(e)
    return b.build()


def bubble_jacobi_general(n: int, i: int, k: int, label="A", upward: bool = False) -> TraceDiagram:
    """n-ik inputs into one vertex that feeds k i-adjugate bubbles, each with i outputs."""
    if i * k > n:
        raise ValueError("needs ik <= n")
    b = Builder(n)
    ins = [b.edge() for _ in range(n - i * k)]
    for e in ins:
        b.input(e)
    links, tops = [], []
    for _ in range(k):
        down = [b.edge() for _ in range(i)]
        mids = [b.chain((label,), upward) for _ in range(n - i)]
        up = [b.edge() for _ in range(i)]
        place_node(b, down, [lo for lo, _ in mids])
        place_node(b, [hi for _, hi in mids], up)
        links.extend(down)
        tops.extend(up)
    place_node(b, ins, links)
    for e in tops:
        b.output(e)
    return b.build()


def mixed_minor_example(n: int, top="A", bottom="B") -> TraceDiagram:
    """One vertex: labelled outputs above and differently labelled inputs below."""
    k = max(1, n // 2)
    return one_node(n, k, lower_labels=(bottom,), upper_labels=(top,), upper_upward=True)


def inverse_bubble(n: int, label="A") -> TraceDiagram:
    """Closed two-vertex diagram, every strand carrying the label then its inverse."""
    return two_node(n, 0, (label, (label, True)), upward=True)


def four_valent_example() -> TraceDiagram:
    """Two 4-valent vertices, with matrices B then A on one connecting strand."""
    b = Builder(4)
    ins = [b.edge(), b.edge()]
    lo, hi = b.chain(("B", "A"))
    e2 = b.edge()
    outs = [b.edge(), b.edge()]
    for e in ins:
        b.input(e)
    place_node(b, ins, [lo, e2])
    place_node(b, [hi, e2], outs)
    for e in outs:
        b.output(e)
    return b.build()


def framing_variant(d: TraceDiagram, inputs: Sequence[str], outputs: Sequence[str]) -> TraceDiagram:
    from .diagram import reframe

    return reframe(d, inputs, outputs)


# -- random generation ---------------------------------------------------------


def random_rational(rng: random.Random, lo: int = -3, hi: int = 3) -> Fraction:
    num = rng.randint(lo, hi)
    den = rng.choice((1, 1, 1, 2, 3))
    return Fraction(num, den)


def random_matrix(rng: random.Random, n: int, lo: int = -3, hi: int = 3):
    return tuple(tuple(random_rational(rng, lo, hi) for _ in range(n)) for _ in range(n))


def random_invertible(rng: random.Random, n: int, lo: int = -3, hi: int = 3):
    while True:
        m = random_matrix(rng, n, lo, hi)
        if det(m) != 0:
            return m


def random_singular(rng: random.Random, n: int):
    m = [list(row) for row in random_matrix(rng, n)]
    m[-1] = list(m[0])
    return tuple(tuple(row) for row in m)


def random_vector(rng: random.Random, n: int):
    return tuple(random_rational(rng) for _ in range(n))


def random_diagram(
    rng: random.Random,
    n: int,
    n_inputs: int,
    n_outputs: int,
    labels: Sequence[str] = ("A", "B"),
    max_edges: int = 5,
) -> TraceDiagram:
    """A random valid diagram with the requested framing and at most ``max_edges`` edges."""
    leaves = n_inputs + n_outputs
    if n % 2 == 0 and leaves % 2:
        raise ValueError("an even-dimensional diagram has an even number of leaves")
    while True:
        nodes = rng.choice((0, 1, 1, 2)) if n <= 3 else rng.choice((0, 1))
        mats = rng.randint(0, 2)
        slots = nodes * n + 2 * mats + leaves
        if slots % 2 or slots // 2 > max_edges or slots == 0 and leaves == 0 and rng.random() < 0.5:
            continue
        break
    owners = []  # (kind, index, slot)
    for v in range(nodes):
        owners.extend(("n", v, s) for s in range(n))
    for m in range(mats):
        owners.extend((("m", m, 0), ("m", m, 1)))
    owners.extend(("l", x, 0) for x in range(leaves))
    rng.shuffle(owners)
    edge_at = {}
    for t in range(0, len(owners), 2):
        e = f"e{t // 2 + 1}"
        edge_at[owners[t]] = e
        edge_at[owners[t + 1]] = e
    nnodes = tuple(NNode(f"n{v + 1}", tuple(edge_at[("n", v, s)] for s in range(n))) for v in range(nodes))
    mnodes = tuple(
        MatrixNode(
            f"m{m + 1}",
            rng.choice(tuple(labels)) if labels else "A",
            edge_at[("m", m, 0)],
            edge_at[("m", m, 1)],
        )
        for m in range(mats)
    )
    leaf_ids = [f"l{x + 1}" for x in range(leaves)]
    lvs = tuple(Leaf(leaf_ids[x], edge_at[("l", x, 0)]) for x in range(leaves))
    rng.shuffle(leaf_ids)
    return TraceDiagram(
        n,
        nnodes,
        mnodes,
        lvs,
        rng.choice((0, 0, 0, 1)),
        tuple(leaf_ids[:n_inputs]),
        tuple(leaf_ids[n_inputs:]),
    )
