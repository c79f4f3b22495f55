from fractions import Fraction

import pytest

from tracediag import builders as bd
from tracediag.diagram import DiagramError, MatrixRegistry
from tracediag.function import (
    DiagramCombination,
    TensorMap,
    apply,
    basis_tensor,
    combination_equal,
    evaluate,
    identity_map,
    vectors_tensor,
)


def test_strand_is_identity():
    for n in (2, 3, 4):
        assert evaluate(bd.strand(n)) == identity_map(n)


def test_cap_is_inner_product():
    f = evaluate(bd.cap(3))
    assert f.items() == [(((), (a, a)), 1) for a in (1, 2, 3)]
    assert apply(f, basis_tensor(1, 1)) == {(): 1}


def test_cross_diagram():
    f = evaluate(bd.cross_product())
    assert f.column((1, 2)) == {(3,): 1}
    assert apply(f, basis_tensor(1, 1)) == {}


def test_identity_apply():
    t = {(1, 2): Fraction(3), (2, 2): Fraction(-1, 2)}
    assert apply(identity_map(2, 2), t) == t


def test_closed_diagram_is_scalar():
    f = evaluate(bd.theta(2))
    assert f.shape() == (2, 0, 0) and f.scalar() == -2
    with pytest.raises(ValueError):
        evaluate(bd.strand(2)).scalar()


def test_binor_combination():
    assert combination_equal([(1, bd.binor())], [(1, bd.swap(3)), (-1, bd.parallel(3))])


def test_same_diagram_equal():
    d = bd.one_node(3, 1)
    assert combination_equal(d, d)


def test_swap_vs_parallel_difference():
    cmp = combination_equal(bd.swap(2), bd.parallel(2))
    assert not cmp
    assert cmp.key == ((1, 2), (2, 1))
    assert (cmp.lhs, cmp.rhs) == (1, 0)


def test_combination_checks_arity():
    with pytest.raises(DiagramError):
        DiagramCombination([(1, bd.strand(3)), (1, bd.cap(3))])
    with pytest.raises(DiagramError):
        DiagramCombination([])
    with pytest.raises(DiagramError):
        combination_equal(bd.strand(3), bd.cap(3))


def test_combination_reframe():
    lhs = DiagramCombination([(1, bd.binor())]).reframe(["i1", "i2", "o2"], ["o1"])
    rhs = DiagramCombination([(1, bd.swap(3)), (-1, bd.parallel(3))]).reframe(["i1", "i2", "o2"], ["o1"])
    assert combination_equal(lhs, rhs)


def test_apply_errors():
    f = evaluate(bd.strand(2))
    with pytest.raises(ValueError):
        apply(f, {(1, 1): 1})
    with pytest.raises(ValueError):
        apply(f, {(3,): 1})


def test_apply_is_linear(rng):
    reg = MatrixRegistry({"A": bd.random_matrix(rng, 3)})
    f = evaluate(bd.one_node(3, 2, lower_labels=("A",)), reg)
    x = vectors_tensor([bd.random_vector(rng, 3), bd.random_vector(rng, 3)])
    y = vectors_tensor([bd.random_vector(rng, 3), bd.random_vector(rng, 3)])
    lam = Fraction(-7, 3)
    combo = dict(x)
    for k, v in y.items():
        combo[k] = combo.get(k, 0) + lam * v
    fx, fy = apply(f, x), apply(f, y)
    want = {k: fx.get(k, 0) + lam * fy.get(k, 0) for k in set(fx) | set(fy)}
    assert apply(f, combo) == {k: v for k, v in want.items() if v}


def test_enumerate_and_contract_agree(rng):
    reg = MatrixRegistry({"A": bd.random_matrix(rng, 3), "B": bd.random_matrix(rng, 3)})
    for d in (bd.binor(), bd.cofactor_diagram(3, 1), bd.bubble_jacobi(3, 2), bd.four_valent_example()):
        r = reg if d.dim == 3 else MatrixRegistry({"A": bd.random_matrix(rng, 4), "B": bd.random_matrix(rng, 4)})
        assert evaluate(d, r) == evaluate(d, r, method="enumerate")
    for _ in range(30):
        d = bd.random_diagram(rng, 3, rng.randint(0, 2), rng.randint(0, 2), max_edges=6)
        assert evaluate(d, reg) == evaluate(d, reg, method="enumerate")
    with pytest.raises(ValueError):
        evaluate(bd.strand(3), method="magic")


def test_tensormap_validation_and_algebra():
    with pytest.raises(ValueError):
        TensorMap(2, 1, 1, {((1,), (1, 2)): 1})
    with pytest.raises(ValueError):
        TensorMap(2, 1, 1, {((3,), (1,)): 1})
    m = TensorMap(2, 1, 1, {((1,), (2,)): 2, ((2,), (2,)): 0})
    assert len(m) == 1
    assert (m - m).coeffs == {}
    assert m.then(identity_map(2)) == m
    assert m.format_lines() == ["out=(1) in=(2) value=2"]
    assert m.to_json()["coefficients"] == [{"out": [1], "in": [2], "value": "2"}]
    with pytest.raises(ValueError):
        m + identity_map(2, 2)
