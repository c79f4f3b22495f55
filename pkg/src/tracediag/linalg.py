"""Exact rational matrix algebra.

Index sets are 1-based, strictly increasing tuples.  Matrices are tuples of
rows of Fractions (lists are accepted anywhere a matrix is read).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import lcm
from typing import Sequence

from .coloring import sequence_sign
from .diagram import SingularMatrixError, as_matrix


class DodgsonError(ZeroDivisionError):
    def __init__(self, stage: int, position: tuple[int, int]):
        self.stage = stage
        self.position = position
        super().__init__(
            f"condensation stage {stage}: interior entry at row {position[0]}, "
            f"column {position[1]} is zero"
        )


def _square(a) -> int:
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not square")
    return n


def identity(n: int):
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def matmul(a, b):
    if a and len(a[0]) != len(b):
        raise ValueError("inner dimensions differ")
    cols = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols) for row in a)


def transpose(a):
    return tuple(zip(*a)) if a else ()


def trace(a) -> Fraction:
    _square(a)
    return sum((Fraction(a[i][i]) for i in range(len(a))), Fraction(0))


def matvec(a, v):
    return tuple(sum((Fraction(x) * y for x, y in zip(row, v)), Fraction(0)) for row in a)


# -- determinants --------------------------------------------------------------


def det_leibniz(a) -> Fraction:
    """Permutation-sum determinant; exponential, kept as an oracle for small n."""
    n = _square(a)
    total = Fraction(0)
    for p in permutations(range(n)):
        term = Fraction(sequence_sign(p))
        for i in range(n):
            term *= a[i][p[i]]
            if not term:
                break
        total += term
    return total


def _bareiss_int(m: list[list[int]]) -> int:
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def det(a) -> Fraction:
    """Fraction-free (Bareiss) elimination after clearing row denominators."""
    n = _square(a)
    if n == 0:
        return Fraction(1)
    rows = [[Fraction(x) for x in row] for row in a]
    scale = 1
    ints = []
    for row in rows:
        d = lcm(*(x.denominator for x in row))
        scale *= d
        ints.append([int(x * d) for x in row])
    return Fraction(_bareiss_int(ints), scale)


def inverse(a):
    """Gauss-Jordan inverse over the rationals."""
    n = _square(a)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


# -- index sets ----------------------------------------------------------------


def check_index_set(idx: Sequence[int], n: int) -> tuple[int, ...]:
    idx = tuple(idx)
    if any(not isinstance(x, int) or not 1 <= x <= n for x in idx):
        raise ValueError(f"index set {idx} has entries outside 1..{n}")
    if any(x >= y for x, y in zip(idx, idx[1:])):
        raise ValueError(f"index set {idx} is not strictly increasing")
    return idx


def complement(idx: Sequence[int], n: int) -> tuple[int, ...]:
    s = set(idx)
    return tuple(x for x in range(1, n + 1) if x not in s)


def index_sets(n: int, k: int):
    return list(combinations(range(1, n + 1), k))


def concat_reverse_sign(first: Sequence[int], second: Sequence[int]) -> int:
    """sgn(first followed by second reversed)."""
    return sequence_sign(tuple(first) + tuple(reversed(second)))


def sign_lemma(n: int, j: Sequence[int]) -> int:
    """Closed form of sgn(J^c followed by J reversed): (-1)^(nk + sum J)."""
    return -1 if (n * len(j) + sum(j)) % 2 else 1


# -- submatrices, minors, cofactors -------------------------------------------


def submatrix(a, rows: Sequence[int], cols: Sequence[int], complementary: bool = False):
    n = _square(a)
    rows, cols = check_index_set(rows, n), check_index_set(cols, n)
    if complementary:
        rows, cols = complement(rows, n), complement(cols, n)
    return tuple(tuple(Fraction(a[r - 1][c - 1]) for c in cols) for r in rows)


def interior(a):
    n = _square(a)
    if n < 3:
        raise ValueError("the interior needs n >= 3")
    return submatrix(a, (1, n), (1, n), complementary=True)


def _same_size(i, j):
    if len(i) != len(j):
        raise ValueError(f"index sets differ in size: {len(i)} vs {len(j)}")


def minor(a, rows, cols) -> Fraction:
    _same_size(rows, cols)
    return det(submatrix(a, rows, cols))


def minor_permutation_sum(a, rows, cols) -> Fraction:
    """Oracle: the alternating sum over S_k of a_{I1,J_s(1)} ... a_{Ik,J_s(k)}."""
    _same_size(rows, cols)
    n = _square(a)
    rows, cols = check_index_set(rows, n), check_index_set(cols, n)
    total = Fraction(0)
    for p in permutations(range(len(rows))):
        term = Fraction(sequence_sign(p))
        for t, r in enumerate(rows):
            term *= a[r - 1][cols[p[t]] - 1]
        total += term
    return total


def complementary_minor(a, rows, cols) -> Fraction:
    _same_size(rows, cols)
    return det(submatrix(a, rows, cols, complementary=True))


def cofactor(a, rows, cols) -> Fraction:
    _same_size(rows, cols)
    sign = -1 if (sum(rows) + sum(cols)) % 2 else 1
    return sign * complementary_minor(a, rows, cols)


def adjugate(a):
    n = _square(a)
    return tuple(tuple(cofactor(a, (j + 1,), (i + 1,)) for j in range(n)) for i in range(n))


def adjugate_i(a, i: int) -> dict[tuple[tuple[int, ...], tuple[int, ...]], Fraction]:
    """Table (I, J) -> C_{J,I} over increasing size-i index sets.

    Only increasing pairs are keyed; any other i-tuple pair reads as zero.
    """
    n = _square(a)
    if not 0 <= i <= n:
        raise ValueError(f"i must lie in 0..{n}")
    sets = index_sets(n, i)
    return {(I, J): cofactor(a, J, I) for I in sets for J in sets}


# -- generalized minors --------------------------------------------------------


@dataclass(frozen=True)
class BlockIndex:
    blocks: tuple[tuple[int, ...], ...]

    def __init__(self, blocks, n: int | None = None):
        blocks = tuple(tuple(b) for b in blocks)
        if len({len(b) for b in blocks}) > 1:
            raise ValueError("blocks must all have the same size")
        flat = [x for b in blocks for x in b]
        if any(x >= y for x, y in zip(flat, flat[1:])):
            raise ValueError(f"block entries {flat} are not in strictly increasing global order")
        if flat and flat[0] < 1:
            raise ValueError("indices are 1-based")
        if n is not None and flat and flat[-1] > n:
            raise ValueError(f"block entries exceed n={n}")
        object.__setattr__(self, "blocks", blocks)

    @property
    def size(self) -> int:
        return len(self.blocks[0]) if self.blocks else 0

    @property
    def count(self) -> int:
        return len(self.blocks)

    @property
    def flat(self) -> tuple[int, ...]:
        return tuple(x for b in self.blocks for x in b)

    @classmethod
    def chunk(cls, flat: Sequence[int], i: int, n: int | None = None) -> "BlockIndex":
        flat = tuple(flat)
        if i <= 0 or len(flat) % i:
            raise ValueError(f"cannot split {len(flat)} indices into blocks of {i}")
        return cls([flat[t:t + i] for t in range(0, len(flat), i)], n)


def _as_blocks(b) -> BlockIndex:
    return b if isinstance(b, BlockIndex) else BlockIndex(b)


def generalized_minor(table, blocks_i, blocks_j) -> Fraction:
    """Alternating sum over S_{ik} of products of block coefficients.

    sigma permutes the flattened J entries, which are then re-chunked into k
    blocks of i.  Only table rows whose column tuple draws unused J entries
    can contribute, so we search over those instead of all of S_{ik}.
    """
    bi, bj = _as_blocks(blocks_i), _as_blocks(blocks_j)
    if bi.count != bj.count or (bi.count and bi.size != bj.size):
        raise ValueError("block shapes of I and J differ")
    k = bi.count
    if k == 0:
        return Fraction(1)
    flat_j = bj.flat
    pos = {x: t for t, x in enumerate(flat_j)}
    rows: dict[tuple, list] = {}
    for (r, c), v in table.items():
        if v and len(c) == bi.size and all(x in pos for x in c) and len(set(c)) == len(c):
            rows.setdefault(tuple(r), []).append((tuple(c), Fraction(v)))

    total = Fraction(0)

    def walk(t, used: frozenset, chosen: tuple, acc: Fraction):
        nonlocal total
        if t == k:
            total += sequence_sign([pos[x] for x in chosen]) * acc
            return
        for c, v in rows.get(bi.blocks[t], ()):
            if used.isdisjoint(c):
                walk(t + 1, used | set(c), chosen + c, acc * v)

    walk(0, frozenset(), (), Fraction(1))
    return total


def generalized_minor_bruteforce(table, blocks_i, blocks_j) -> Fraction:
    """Oracle: literal S_{ik} loop (absent table entries are zero)."""
    bi, bj = _as_blocks(blocks_i), _as_blocks(blocks_j)
    k, i = bi.count, bi.size
    flat_j = bj.flat
    total = Fraction(0)
    for p in permutations(range(len(flat_j))):
        moved = [flat_j[q] for q in p]
        term = Fraction(sequence_sign(p))
        for t in range(k):
            term *= table.get((bi.blocks[t], tuple(moved[t * i:(t + 1) * i])), 0)
            if not term:
                break
        total += term
    return total


# -- Dodgson condensation -----------------------------------------------------


def dodgson(a):
    """Condense down to a 1x1 matrix.

    Returns ``(determinant, intermediates)`` where intermediates are the
    matrices strictly between the input and the final 1x1 result.  A zero
    interior entry raises DodgsonError with the 0-based stage index.
    """
    n = _square(a)
    a = as_matrix(a)
    if n == 0:
        return Fraction(1), []
    if n == 1:
        return a[0][0], []
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0], []
    prev = [[Fraction(1)] * (n + 1) for _ in range(n + 1)]
    cur = [list(row) for row in a]
    stages = []
    stage = 0
    while len(cur) > 1:
        m = len(cur)
        nxt = []
        for r in range(m - 1):
            row = []
            for c in range(m - 1):
                d = prev[r + 1][c + 1]
                if d == 0:
                    raise DodgsonError(stage, (r + 2, c + 2))
                row.append((cur[r][c] * cur[r + 1][c + 1] - cur[r][c + 1] * cur[r + 1][c]) / d)
            nxt.append(row)
        prev, cur = cur, nxt
        stages.append(tuple(tuple(row) for row in cur))
        stage += 1
    return cur[0][0], stages[:-1]


# -- n = 3 helpers -------------------------------------------------------------


def dot(u, v) -> Fraction:
    if len(u) != len(v):
        raise ValueError("vectors differ in length")
    return sum((Fraction(x) * y for x, y in zip(u, v)), Fraction(0))


def cross(u, v):
    if len(u) != 3 or len(v) != 3:
        raise ValueError("cross product needs length-3 vectors")
    u = [Fraction(x) for x in u]
    v = [Fraction(x) for x in v]
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def columns(vectors):
    """Matrix whose columns are the given vectors."""
    return transpose(as_matrix(vectors))
