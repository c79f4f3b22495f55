from fractions import Fraction
from itertools import combinations
import random

import pytest
import sympy

from tracediag import builders as bd
from tracediag import linalg as la
from tracediag.diagram import SingularMatrixError

from conftest import CONDENSE_4X4


def F(rows):
    return [[Fraction(x) for x in r] for r in rows]


def test_det_examples():
    assert la.det(CONDENSE_4X4) == -8
    assert la.det_leibniz(CONDENSE_4X4) == -8
    assert la.det(la.identity(4)) == 1
    with pytest.raises(ValueError):
        la.det([[1, 2]])


def test_det_paths_agree():
    rng = random.Random(5)
    for n in range(1, 6):
        for _ in range(5):
            a = bd.random_matrix(rng, n)
            d = la.det(a)
            assert d == la.det_leibniz(a)
            assert d == sympy.Matrix(a).det()
            try:
                value, _ = la.dodgson(a)
            except la.DodgsonError:
                continue
            assert value == d


def test_inverse():
    assert la.inverse(la.identity(3)) == la.identity(3)
    assert la.inverse([[1, 2], [3, 4]]) == tuple(map(tuple, F([[-2, 1], [Fraction(3, 2), Fraction(-1, 2)]])))
    with pytest.raises(SingularMatrixError):
        la.inverse([[1, 2], [2, 4]])
    rng = random.Random(1)
    a = bd.random_invertible(rng, 4)
    assert la.matmul(a, la.inverse(a)) == la.identity(4)


# the 4x4 "letters" matrix a..p with numeric stand-ins a=1, ..., p=16
a, b, c, d, e, f, g, h, i, j, k, l, m, n, o, p = range(1, 17)
L = [[a, b, c, d], [e, f, g, h], [i, j, k, l], [m, n, o, p]]


def test_submatrices_of_letter_matrix():
    assert la.submatrix(L, (1, 2), (3, 4)) == ((c, d), (g, h))
    assert la.submatrix(L, (1, 2), (3, 4), complementary=True) == ((i, j), (m, n))
    assert la.interior(L) == ((f, g), (j, k))


def test_letter_minor_and_interior_cofactor():
    assert la.minor(L, (1, 2), (3, 4)) == c * h - g * d
    assert la.cofactor(L, (1, 4), (1, 4)) == f * k - g * j


def test_minor_and_cofactor_basics():
    rng = random.Random(2)
    a = bd.random_matrix(rng, 4)
    assert la.minor(a, (1, 2, 3, 4), (1, 2, 3, 4)) == la.det(a)
    assert la.minor(a, (2,), (3,)) == a[1][2]
    assert la.cofactor([[1, 2], [3, 4]], (1,), (1,)) == 4
    assert la.cofactor(a, (1, 4), (1, 4)) == la.det(la.interior(a))
    with pytest.raises(ValueError):
        la.minor(a, (1, 2), (1,))
    with pytest.raises(ValueError):
        la.minor(a, (2, 1), (1, 2))
    with pytest.raises(ValueError):
        la.minor(a, (1, 5), (1, 2))


def test_minor_paths_agree():
    rng = random.Random(3)
    for n in range(1, 6):
        a = bd.random_matrix(rng, n)
        for k in range(0, min(n, 4) + 1):
            for I in la.index_sets(n, k):
                for J in la.index_sets(n, k)[:3]:
                    assert la.minor(a, I, J) == la.minor_permutation_sum(a, I, J)


def test_sign_helper():
    assert la.concat_reverse_sign((2, 3), (1, 4)) == -1
    assert la.sign_lemma(4, (1, 4)) == -1


def test_sign_lemma_exhaustive():
    for n in range(1, 7):
        for k in range(n + 1):
            for J in combinations(range(1, n + 1), k):
                Jc = la.complement(J, n)
                assert la.concat_reverse_sign(Jc, J) == (-1) ** (n * k + sum(J))


def test_cofactor_expansion_rows():
    rng = random.Random(4)
    for n in range(1, 6):
        a = bd.random_matrix(rng, n)
        d = la.det(a)
        for i in range(1, n + 1):
            assert sum(a[i - 1][j - 1] * la.cofactor(a, (i,), (j,)) for j in range(1, n + 1)) == d


def test_adjugate():
    assert la.adjugate([[1, 2], [3, 4]]) == tuple(map(tuple, F([[4, -2], [-3, 1]])))
    rng = random.Random(6)
    a = bd.random_matrix(rng, 4)
    d = la.det(a)
    assert la.matmul(a, la.adjugate(a)) == tuple(tuple(d if r == c else 0 for c in range(4)) for r in range(4))
    b = bd.random_matrix(rng, 3)
    assert la.det(la.adjugate(b)) == la.det(b) ** 2


def test_adjugate_i_tables():
    a = F([[1, 2], [3, 4]])
    t = la.adjugate_i(a, 1)
    assert t == {((1,), (1,)): 4, ((1,), (2,)): -2, ((2,), (1,)): -3, ((2,), (2,)): 1}
    assert la.adjugate_i(a, 0) == {((), ()): la.det(a)}
    assert la.adjugate_i(a, 2) == {((1, 2), (1, 2)): 1}
    with pytest.raises(ValueError):
        la.adjugate_i(a, 3)


def test_generalized_minor_special_cases():
    rng = random.Random(7)
    a = bd.random_invertible(rng, 4)
    t1 = {((r + 1,), (c + 1,)): a[r][c] for r in range(4) for c in range(4)}
    for I in la.index_sets(4, 2):
        for J in la.index_sets(4, 2):
            bi, bj = la.BlockIndex.chunk(I, 1), la.BlockIndex.chunk(J, 1)
            assert la.generalized_minor(t1, bi, bj) == la.minor(a, I, J)
    t2 = la.adjugate_i(a, 2)
    for (I, J), v in t2.items():
        got = la.generalized_minor(t2, la.BlockIndex([I]), la.BlockIndex([J]))
        assert got == la.generalized_minor_bruteforce(t2, la.BlockIndex([I]), la.BlockIndex([J]))
    I = J = (1, 2, 3, 4)
    bi, bj = la.BlockIndex.chunk(I, 2), la.BlockIndex.chunk(J, 2)
    lhs = la.generalized_minor_bruteforce(t2, bi, bj)
    assert lhs == la.generalized_minor(t2, bi, bj) == la.cofactor(a, J, I) * la.det(a)


def test_block_index_rules():
    with pytest.raises(ValueError):
        la.BlockIndex([(1, 3), (2, 4)])
    with pytest.raises(ValueError):
        la.BlockIndex([(1, 2), (3,)])
    with pytest.raises(ValueError):
        la.BlockIndex.chunk((1, 2, 3), 2)
    b = la.BlockIndex.chunk((1, 2, 4, 5), 2, n=5)
    assert b.blocks == ((1, 2), (4, 5)) and b.size == 2 and b.count == 2
    with pytest.raises(ValueError):
        la.generalized_minor({}, la.BlockIndex([(1, 2)]), la.BlockIndex([(1,)]))


def test_dodgson_worked_example():
    value, stages = la.dodgson(CONDENSE_4X4)
    assert value == -8
    assert [list(map(list, s)) for s in stages] == [[[3, -1, 2], [-1, -5, 8], [1, 1, -4]], [[8, -2], [-4, 6]]]


def test_dodgson_small_and_failing():
    assert la.dodgson([[1, 2], [3, 4]]) == (-2, [])
    with pytest.raises(la.DodgsonError) as info:
        la.dodgson([[1, 2, 3], [4, 0, 6], [7, 8, 9]])
    assert info.value.stage == 1


def test_vectors():
    e1, e2, e3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    assert la.cross(e1, e2) == tuple(map(Fraction, e3))
    assert la.dot(e1, e1) == 1
    with pytest.raises(ValueError):
        la.dot((1, 2), (1, 2, 3))
    with pytest.raises(ValueError):
        la.cross((1, 2), (1, 2))
    rng = random.Random(8)
    for _ in range(20):
        u, v, w, x = (bd.random_vector(rng, 3) for _ in range(4))
        assert la.dot(la.cross(u, v), la.cross(w, x)) == la.dot(u, w) * la.dot(v, x) - la.dot(u, x) * la.dot(v, w)
