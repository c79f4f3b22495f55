from fractions import Fraction
from itertools import permutations

import pytest

from tracediag import builders as bd
from tracediag.coloring import (
    NOT_A_PERMUTATION,
    Coloring,
    chromatic_index,
    closed_value,
    coefficient,
    enumerate_extensions,
    exhaustive_extensions,
    permutation_sign,
    reversal_sign,
    sequence_sign,
    signature,
    vertex_permutation,
    weight,
)
from tracediag.diagram import DiagramError, MatrixRegistry, NNode, TraceDiagram


@pytest.mark.parametrize("p, s", [((2, 4, 1, 3), -1), ((1, 2, 3), 1), ((2, 1), -1), ((), 1)])
def test_permutation_sign(p, s):
    assert permutation_sign(p) == s


def test_permutation_sign_rejects_non_permutations():
    with pytest.raises(ValueError):
        permutation_sign((1, 1))


@pytest.mark.parametrize("m, s", [(0, 1), (1, 1), (2, -1), (3, -1), (4, 1), (5, 1), (6, -1)])
def test_reversal_sign(m, s):
    assert reversal_sign(m) == s
    assert permutation_sign(tuple(range(m, 0, -1))) == s


def test_sequence_sign():
    assert sequence_sign((5, 2, 9)) == permutation_sign((2, 1, 3))
    assert sequence_sign((3, 3)) == 0


def test_fig_ciliation_permutation():
    d = bd.single_vertex(4)
    (v,) = d.nodes
    k = Coloring(dict(zip(v.cilia, (2, 4, 1, 3))))
    assert vertex_permutation(d, k, v.id) == (2, 4, 1, 3)
    assert signature(d, k) == -1
    ident = Coloring(dict(zip(v.cilia, (1, 2, 3, 4))))
    assert vertex_permutation(d, ident, v.id) == (1, 2, 3, 4)


def test_loop_is_not_a_permutation():
    d = bd.barbell()
    k = Coloring({e: 1 for e in d.edges})
    assert vertex_permutation(d, k, d.nodes[0].id) == NOT_A_PERMUTATION
    assert signature(d, k) == 0
    with pytest.raises(DiagramError):
        vertex_permutation(d, k, "nope")


def test_theta_graph():
    d = bd.theta(2)
    found = enumerate_extensions(d)
    assert len(found) == 2
    assert all(signature(d, k) == -1 for k in found)
    assert chromatic_index(d) == -2


def test_precolored_subindex_is_zero():
    d = bd.binor()
    edges = d.leaf_edges
    pre = {edges["i1"]: 1, edges["i2"]: 2}
    assert chromatic_index(d, pre) == 0


def test_triangle_and_barbell_have_no_colorings():
    assert enumerate_extensions(bd.polygon(2, 3)) == []
    assert enumerate_extensions(bd.barbell()) == []
    assert closed_value(bd.barbell()) == 0


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_free_loop(n):
    assert closed_value(bd.free_loops(n)) == n
    assert chromatic_index(bd.free_loops(n)) == n
    assert closed_value(bd.free_loops(n, 2), method="contract") == n * n


def test_no_vertices_means_signature_one():
    d = bd.strand(3, ("A",))
    for c in (1, 2, 3):
        k = Coloring({e: c for e in d.edges})
        assert signature(d, k) == 1


def test_coefficients():
    reg = MatrixRegistry({"A": [[1, 2], [3, 4]], "B": [[5, 6], [7, 8]]})
    d = bd.strand(2, ("A",))
    (m,) = d.mats
    k = Coloring({m.in_edge: 2, m.out_edge: 1})
    assert coefficient(d, k, reg) == 2  # (A)_{12}
    chain = bd.strand(2, ("B", "A"))
    mb, ma = chain.mats
    k = Coloring({mb.in_edge: 1, mb.out_edge: 2, ma.out_edge: 1})
    assert coefficient(chain, k, reg) == Fraction(2 * 7)
    assert coefficient(bd.theta(2), Coloring({e: 1 for e in bd.theta(2).edges}), reg) == 1
    with pytest.raises(KeyError):
        coefficient(d, Coloring({m.in_edge: 1, m.out_edge: 1}), MatrixRegistry({}))


def test_binor_weights():
    d = bd.binor()
    e = d.leaf_edges
    for i, j in permutations((1, 2, 3), 2):
        swapped = {e["i1"]: i, e["i2"]: j, e["o1"]: j, e["o2"]: i}
        straight = {e["i1"]: i, e["i2"]: j, e["o1"]: i, e["o2"]: j}
        assert weight(d, swapped) == 1
        assert weight(d, straight) == -1
    for i in (1, 2, 3):
        for a, b in permutations((1, 2, 3), 2):
            assert weight(d, {e["i1"]: i, e["i2"]: i, e["o1"]: a, e["o2"]: b}) == 0
    with pytest.raises(DiagramError):
        weight(d, {e["i1"]: 1})


def test_closed_values():
    reg = MatrixRegistry({"A": [[1, 2], [3, 4]]})
    assert closed_value(bd.matrix_loop(2), reg) == 5
    with pytest.raises(DiagramError):
        closed_value(bd.strand(2))
    with pytest.raises(DiagramError):
        chromatic_index(bd.matrix_loop(2))


def test_trace_of_random_5x5(rng):
    from tracediag.linalg import trace

    a = bd.random_matrix(rng, 5)
    reg = MatrixRegistry({"A": a})
    assert closed_value(bd.matrix_loop(5), reg) == trace(a)
    assert closed_value(bd.matrix_loop(5), reg, "contract") == trace(a)


def test_enumeration_matches_oracle_on_small_diagrams():
    for d in (bd.theta(2), bd.theta(3), bd.binor(), bd.barbell(), bd.one_node(3, 1), bd.polygon(2, 4)):
        assert enumerate_extensions(d) == exhaustive_extensions(d)
    d = bd.binor()
    pre = {d.leaf_edges["i1"]: 2}
    assert enumerate_extensions(d, pre) == exhaustive_extensions(d, pre)


def test_enumeration_order_is_lexicographic():
    d = bd.theta(3)
    found = enumerate_extensions(d)
    keys = [k.sort_key() for k in found]
    assert keys == sorted(keys) and len(found) == 6


def test_cyclic_rotation_invariance_for_odd_n():
    for d in (bd.theta(3), bd.binor(), bd.one_node(5, 2)):
        rotated = TraceDiagram(
            d.dim,
            tuple(NNode(v.id, v.cilia[1:] + v.cilia[:1]) for v in d.nodes),
            d.mats,
            d.leaves,
            d.free_loops,
            d.inputs,
            d.outputs,
        )
        for k in enumerate_extensions(d):
            assert signature(d, k) == signature(rotated, k)


def test_matrix_free_closed_value_is_chromatic_index():
    for d in (bd.theta(2), bd.theta(3), bd.theta(4), bd.barbell()):
        assert closed_value(d) == chromatic_index(d)
