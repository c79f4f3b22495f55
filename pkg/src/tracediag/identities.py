"""Catalog of determinant and trace-diagram identities, checked by exact evaluation.

Each entry builds the diagrams programmatically, evaluates them, and compares
against the classical side computed in :mod:`tracediag.linalg`.
"""
from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from math import factorial
from typing import Callable, Iterable

from . import builders as bd
from . import linalg as la
from .coloring import closed_value, exhaustive_extensions, reversal_sign, sequence_sign, signature, coefficient
from .diagram import (
    MatrixRegistry,
    compose,
    fmt_scalar,
    reframe,
    relabel,
    tensor_product,
    transpose,
    validate,
)
from .function import TensorMap, apply, evaluate, first_difference, vectors_tensor


class InvalidParameters(ValueError):
    pass


class UnknownIdentity(KeyError):
    pass


@dataclass
class VerificationReport:
    identity: str
    parameters: dict
    lhs: dict = field(default_factory=dict)
    rhs: dict = field(default_factory=dict)
    equal: bool = False
    counterexample: dict | None = None
    elapsed: float = 0.0
    status: str = "pass"  # pass | fail | invalid
    message: str = ""
    checks: int = 0

    def to_line(self) -> str:
        params = " ".join(f"{k}={_param_text(v)}" for k, v in self.parameters.items() if v is not None)
        head = f"{self.status.upper():7} {self.identity} {params} checks={self.checks} elapsed={self.elapsed:.3f}s"
        if self.counterexample:
            c = self.counterexample
            head += f" at {c['input']}: lhs={_value_text(c['lhs'])} rhs={_value_text(c['rhs'])}"
        if self.message:
            head += f" ({self.message})"
        return head

    def to_json(self) -> dict:
        return {
            "identity": self.identity,
            "parameters": {k: _jsonable(v) for k, v in self.parameters.items()},
            "lhs": {k: _jsonable(v) for k, v in self.lhs.items()},
            "rhs": {k: _jsonable(v) for k, v in self.rhs.items()},
            "equal": self.equal,
            "counterexample": None
            if self.counterexample is None
            else {k: _jsonable(v) for k, v in self.counterexample.items()},
            "elapsed": self.elapsed,
            "status": self.status,
            "message": self.message,
            "checks": self.checks,
        }


def _param_text(v):
    if isinstance(v, (tuple, list)):
        return "(" + ",".join(map(str, v)) + ")"
    return str(v)


def _value_text(v):
    if isinstance(v, Fraction):
        return fmt_scalar(v)
    if isinstance(v, TensorMap):
        return repr(v)
    return str(v)


def _jsonable(v):
    if isinstance(v, Fraction):
        return fmt_scalar(v)
    if isinstance(v, TensorMap):
        return v.to_json()
    if isinstance(v, (tuple, list)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return v


def reports_to_json(reports) -> str:
    return json.dumps([r.to_json() for r in reports], indent=2)


# -- comparison bookkeeping ----------------------------------------------------


class Checks:
    def __init__(self):
        self.lhs: dict = {}
        self.rhs: dict = {}
        self.count = 0
        self.first: dict | None = None

    def scalar(self, label: str, lhs, rhs):
        lhs, rhs = Fraction(lhs), Fraction(rhs)
        self.count += 1
        self.lhs[label], self.rhs[label] = lhs, rhs
        if lhs != rhs and self.first is None:
            self.first = {"input": label, "lhs": lhs, "rhs": rhs}

    def maps(self, label: str, lhs: TensorMap, rhs: TensorMap):
        self.count += 1
        self.lhs[label], self.rhs[label] = lhs, rhs
        if lhs.shape() != rhs.shape():
            if self.first is None:
                self.first = {"input": f"{label} shape", "lhs": str(lhs.shape()), "rhs": str(rhs.shape())}
            return
        cmp = first_difference(lhs, rhs)
        if not cmp.equal and self.first is None:
            out, inp = cmp.key
            self.first = {"input": f"{label} out={out} in={inp}", "lhs": cmp.lhs, "rhs": cmp.rhs}

    def truth(self, label: str, ok: bool):
        self.count += 1
        if not ok and self.first is None:
            self.first = {"input": label, "lhs": "false", "rhs": "true"}


# -- context -------------------------------------------------------------------


def tdsign(n: int) -> int:
    return reversal_sign(n)


class Context:
    def __init__(self, name, n, k, i, seed, registry, index_pair, force_singular):
        self.name = name
        self.n = n
        self.k = k
        self.i = i
        self.seed = seed
        self.rng = random.Random(f"{seed}:{name}:{n}:{k}:{i}")
        self.given = registry
        self.index_pair = index_pair
        self.force_singular = force_singular
        self.notes: list[str] = []
        self._drawn: dict = {}

    def matrix(self, name="A", invertible=False):
        if self.given is not None and name in self.given:
            m = self.given[name]
            if len(m) != self.n:
                raise InvalidParameters(f"matrix {name} is {len(m)}x{len(m)}, expected n={self.n}")
            if invertible and la.det(m) == 0:
                raise InvalidParameters(f"matrix {name} must be invertible")
            return m
        if name not in self._drawn:
            if invertible and self.force_singular:
                raise InvalidParameters(f"matrix {name} is singular but the identity needs its inverse")
            if self.force_singular:
                m = bd.random_singular(self.rng, self.n)
            elif invertible:
                m = bd.random_invertible(self.rng, self.n)
            else:
                m = bd.random_matrix(self.rng, self.n)
            self._drawn[name] = m
        return self._drawn[name]

    def registry(self, names=("A",), invertible=False, extra=None):
        entries = {nm: self.matrix(nm, invertible) for nm in names}
        entries.update(extra or {})
        return MatrixRegistry(entries)

    def pairs(self, size: int):
        """(I, J) pairs to check: the requested pair, or every pair of increasing sets."""
        if self.index_pair is not None:
            I, J = self.index_pair
            I, J = la.check_index_set(I, self.n), la.check_index_set(J, self.n)
            if len(I) != size or len(J) != size:
                raise InvalidParameters(f"index sets must have {size} elements")
            return [(I, J)]
        sets = la.index_sets(self.n, size)
        return [(I, J) for I in sets for J in sets]


def _distinct_tuples(n: int, k: int):
    return [p for p in permutations(range(1, n + 1), k)]


def _need_n(ctx, allowed, what=""):
    if ctx.n not in allowed:
        raise InvalidParameters(f"{ctx.name} is stated for n in {sorted(allowed)} only{what}")


def _need_k(ctx, lo, hi):
    if ctx.k is None or not lo <= ctx.k <= hi:
        raise InvalidParameters(f"k must lie in {lo}..{hi}")


# -- catalog entries -----------------------------------------------------------


def _binor(ctx, ck):
    _need_n(ctx, {3})
    lhs = evaluate(bd.binor())
    rhs = evaluate(bd.swap(3)) - evaluate(bd.parallel(3))
    ck.maps("f", lhs, rhs)
    for a, b in product(range(1, 4), repeat=2):
        col_l = apply(lhs, {(a, b): 1})
        col_r = apply(rhs, {(a, b): 1})
        ck.truth(f"column ({a},{b})", col_l == col_r)


def _identity_strand(ctx, ck):
    n = ctx.n
    ck.maps("strand", evaluate(bd.strand(n)), TensorMap(n, 1, 1, {((a,), (a,)): 1 for a in range(1, n + 1)}))
    rng = ctx.rng
    d = bd.random_diagram(rng, n, 1, 1, labels=("A",))
    reg = ctx.registry()
    ck.maps("strand after D", evaluate(compose(d, bd.strand(n)), reg), evaluate(d, reg))
    ck.maps("strand before D", evaluate(compose(bd.strand(n), d), reg), evaluate(d, reg))


def _matrix_map(a) -> TensorMap:
    n = len(a)
    return TensorMap(n, 1, 1, {((r + 1,), (c + 1,)): a[r][c] for r in range(n) for c in range(n)})


def _matrix_on_strand(ctx, ck):
    a = ctx.matrix("A")
    reg = ctx.registry()
    f = evaluate(bd.strand(ctx.n, ("A",)), reg)
    ck.maps("A strand", f, _matrix_map(a))
    v = bd.random_vector(ctx.rng, ctx.n)
    image = apply(f, vectors_tensor([v]))
    av = la.matvec(a, v)
    for t in range(ctx.n):
        ck.scalar(f"(Av)_{t + 1}", image.get((t + 1,), 0), av[t])


def _matrix_chain(ctx, ck):
    a, b = ctx.matrix("A"), ctx.matrix("B")
    reg = ctx.registry(("A", "B"), extra={"AB": la.matmul(a, b)})
    ck.maps("B then A", evaluate(bd.strand(ctx.n, ("B", "A")), reg), evaluate(bd.strand(ctx.n, ("AB",)), reg))
    ck.maps("AB entries", evaluate(bd.strand(ctx.n, ("AB",)), reg), _matrix_map(la.matmul(a, b)))


def _cap_dot(ctx, ck):
    n = ctx.n
    f = evaluate(bd.cap(n))
    ck.maps("cap", f, TensorMap(n, 2, 0, {((), (a, a)): 1 for a in range(1, n + 1)}))
    u, v = bd.random_vector(ctx.rng, n), bd.random_vector(ctx.rng, n)
    ck.scalar("u.v", apply(f, vectors_tensor([u, v])).get((), 0), la.dot(u, v))
    g = evaluate(bd.cup(n))
    ck.maps("cup", g, TensorMap(n, 0, 2, {((a, a), ()): 1 for a in range(1, n + 1)}))


def _cross(ctx, ck):
    _need_n(ctx, {3})
    f = evaluate(bd.cross_product())
    want = {}
    for a, b, c in permutations(range(1, 4)):
        want[((c,), (a, b))] = sequence_sign((a, b, c))
    ck.maps("cross", f, TensorMap(3, 2, 1, want))
    u, v = bd.random_vector(ctx.rng, 3), bd.random_vector(ctx.rng, 3)
    image = apply(f, vectors_tensor([u, v]))
    uv = la.cross(u, v)
    for t in range(3):
        ck.scalar(f"(u x v)_{t + 1}", image.get((t + 1,), 0), uv[t])


def one_node_closed_form(n: int, k: int) -> TensorMap:
    want = {}
    for alpha in _distinct_tuples(n, k):
        rest = [x for x in range(1, n + 1) if x not in alpha]
        for beta in permutations(rest):
            want[(beta, alpha)] = la.concat_reverse_sign(alpha, beta)
    return TensorMap(n, k, n - k, want)


def two_node_closed_form(n: int, k: int) -> TensorMap:
    c = tdsign(n) * factorial(n - k)
    want = {}
    for alpha in _distinct_tuples(n, k):
        for sigma in permutations(alpha):
            want[(sigma, alpha)] = c * sequence_sign(alpha) * sequence_sign(sigma)
    return TensorMap(n, k, k, want)


def _one_node(ctx, ck):
    _need_k(ctx, 0, ctx.n)
    ck.maps(f"k={ctx.k}", evaluate(bd.one_node(ctx.n, ctx.k)), one_node_closed_form(ctx.n, ctx.k))


def _two_node(ctx, ck):
    _need_k(ctx, 0, ctx.n)
    ck.maps(f"k={ctx.k}", evaluate(bd.two_node(ctx.n, ctx.k)), two_node_closed_form(ctx.n, ctx.k))


def _n_cap_det(ctx, ck):
    n = ctx.n
    f = evaluate(bd.one_node(n, n))
    vecs = [bd.random_vector(ctx.rng, n) for _ in range(n)]
    ck.scalar("det[u1..un]", apply(f, vectors_tensor(vecs)).get((), 0), la.det(la.columns(vecs)))
    for alpha in permutations(range(1, n + 1)):
        basis = [[int(c == a) for c in range(1, n + 1)] for a in alpha]
        ck.scalar(f"e{alpha}", f[((), alpha)], la.det(la.columns(basis)))


def _cut_paste(ctx, ck):
    n, k = ctx.n, ctx.k
    _need_k(ctx, 0, n)
    reg = ctx.registry()
    lhs = evaluate(bd.cofactor_diagram(n, k), reg)
    rhs = evaluate(bd.cut_paste_rhs(n, k), reg)
    for alpha in _distinct_tuples(n, k):
        rest = [x for x in range(1, n + 1) if x not in alpha]
        beta = tuple(rest)
        shuffled = list(rest)
        ctx.rng.shuffle(shuffled)
        for b in {beta, tuple(shuffled)}:
            c = la.concat_reverse_sign(alpha, b) * factorial(n - k)
            left = TensorMap(n, 0, k, {(o, ()): v for o, v in lhs.column(alpha).items()})
            right = TensorMap(n, 0, k, {(o, ()): c * v for o, v in rhs.column(b).items()})
            ck.maps(f"alpha={alpha} beta={b}", left, right)


def _node_equivariance(ctx, ck):
    n = ctx.n
    reg = ctx.registry()
    lhs = evaluate(bd.one_node(n, n, lower_labels=("A",)), reg)
    rhs = evaluate(bd.one_node(n, n)).scale(la.det(ctx.matrix("A")))
    ck.maps("all legs", lhs, rhs)


def _node_equivariance_inverse(ctx, ck):
    n, k = ctx.n, ctx.k
    _need_k(ctx, 0, n)
    reg = ctx.registry(invertible=True)
    lhs = evaluate(bd.cut_paste_rhs(n, k), reg)
    rhs = evaluate(bd.inverse_form_rhs(n, k), reg).scale(la.det(ctx.matrix("A", True)))
    ck.maps(f"k={k}", lhs, rhs)


def _det_diagram(ctx, ck):
    n = ctx.n
    a = ctx.matrix("A")
    reg = ctx.registry()
    d = bd.determinant_diagram(n)
    want = tdsign(n) * factorial(n) * la.det(a)
    ck.scalar("contracted", closed_value(d, reg, "contract"), want)
    ck.scalar("enumerated", closed_value(d, reg), want)
    if n <= 3:
        brute = sum(
            (signature(d, kap) * coefficient(d, kap, reg) for kap in exhaustive_extensions(d)),
            Fraction(0),
        )
        ck.scalar("exhaustive", brute, want)


def _det_product(ctx, ck):
    n = ctx.n
    a, b = ctx.matrix("A"), ctx.matrix("B")
    ab = la.matmul(a, b)
    reg = ctx.registry(("A", "B"), extra={"AB": ab})
    plain = evaluate(bd.one_node(n, n))
    chained = evaluate(bd.one_node(n, n, lower_labels=("B", "A")), reg)
    product_ = evaluate(bd.one_node(n, n, lower_labels=("AB",)), reg)
    ck.maps("B then A", chained, plain.scale(la.det(a) * la.det(b)))
    ck.maps("AB", product_, plain.scale(la.det(ab)))
    ck.maps("same diagram", chained, product_)
    ck.scalar("det(AB)", la.det(ab), la.det(a) * la.det(b))


def _minor_diagram(ctx, ck):
    n, k = ctx.n, ctx.k
    _need_k(ctx, 0, n)
    a = ctx.matrix("A")
    reg = ctx.registry()
    f1 = evaluate(bd.minor_diagram(n, k, form=1), reg)
    f2 = evaluate(bd.minor_diagram(n, k, form=2), reg)
    for I, J in ctx.pairs(k):
        Ic, Jc = la.complement(I, n), la.complement(J, n)
        m = la.minor(a, I, J)
        ck.scalar(f"form1 I={I} J={J}", la.concat_reverse_sign(Jc, J) * f1[(I, Jc)], m)
        ck.scalar(f"form2 I={I} J={J}", la.concat_reverse_sign(Ic, I) * f2[(J, Ic)], m)


def _cofactor_diagram(ctx, ck):
    n, k = ctx.n, ctx.k
    _need_k(ctx, 0, n)
    a = ctx.matrix("A")
    f = evaluate(bd.cofactor_diagram(n, k), ctx.registry())
    c = Fraction(tdsign(n), factorial(n - k))
    for I, J in ctx.pairs(k):
        ck.scalar(f"C I={I} J={J}", c * f[(I, J)], la.cofactor(a, I, J))


def _adjugate_diagram(ctx, ck):
    n = ctx.n
    a = ctx.matrix("A")
    f = evaluate(bd.adjugate_diagram(n), ctx.registry())
    adj = la.adjugate(a)
    c = Fraction(tdsign(n), factorial(n - 1))
    for r in range(n):
        for s in range(n):
            ck.scalar(f"adj[{r + 1},{s + 1}]", c * f[((r + 1,), (s + 1,))], adj[r][s])


def _cofactor_expansion(ctx, ck):
    n = ctx.n
    a = ctx.matrix("A")
    d = la.det(a)
    reg = ctx.registry()
    cof = evaluate(bd.cofactor_diagram(n, 1), reg)
    scale = Fraction(tdsign(n), factorial(n - 1))
    closed = closed_value(bd.determinant_diagram(n), reg, "contract") / (tdsign(n) * factorial(n))
    ck.scalar("diagram det", closed, d)
    for t in range(1, n + 1):
        col = sum((a[r - 1][t - 1] * la.cofactor(a, (r,), (t,)) for r in range(1, n + 1)), Fraction(0))
        row = sum((a[t - 1][r - 1] * la.cofactor(a, (t,), (r,)) for r in range(1, n + 1)), Fraction(0))
        ck.scalar(f"column {t}", col, d)
        ck.scalar(f"row {t}", row, d)
        via = sum((a[t - 1][r - 1] * scale * cof[((t,), (r,))] for r in range(1, n + 1)), Fraction(0))
        ck.scalar(f"row {t} via diagram", via, d)


def _laplace_expansion(ctx, ck):
    n, k = ctx.n, ctx.k
    _need_k(ctx, 0, n)
    a = ctx.matrix("A")
    d = la.det(a)
    reg = ctx.registry()
    cof = evaluate(bd.cofactor_diagram(n, k), reg)
    mnr = evaluate(bd.minor_diagram(n, k, form=1), reg)
    scale = Fraction(tdsign(n), factorial(n - k))
    sets = la.index_sets(n, k)
    for I in sets:
        first = sum((la.cofactor(a, I, J) * la.minor(a, I, J) for J in sets), Fraction(0))
        second = sum((la.cofactor(a, J, I) * la.minor(a, J, I) for J in sets), Fraction(0))
        ck.scalar(f"rows I={I}", first, d)
        ck.scalar(f"columns I={I}", second, d)
        via = Fraction(0)
        for J in sets:
            Jc = la.complement(J, n)
            via += scale * cof[(I, J)] * la.concat_reverse_sign(Jc, J) * mnr[(I, Jc)]
        ck.scalar(f"rows I={I} via diagrams", via, d)


def jacobi_constants(n, k, I, J):
    """(c1*c2, c3, c4) for the Jacobi relation, as printed."""
    Ic, Jc = la.complement(I, n), la.complement(J, n)
    s = tdsign(n)
    c12 = (s * factorial(n - 1)) ** k * la.concat_reverse_sign(Jc, J) * la.concat_reverse_sign(Ic, I)
    c12 = Fraction(c12 * factorial(k), factorial(n - k))
    c3 = s * factorial(n - k)
    c4 = Fraction(
        la.concat_reverse_sign(Jc, J) * la.concat_reverse_sign(I, Ic) * s ** k,
        factorial(k) * factorial(n - 1) ** k,
    )
    return c12, Fraction(c3), c4


def general_jacobi_constants(n, i, k, I, J):
    Jc = la.complement(J, n)
    s = tdsign(n)
    c12 = Fraction((s * factorial(n - i)) ** k * la.concat_reverse_sign(J, Jc), factorial(n - i * k))
    c3 = Fraction(s * factorial(n - i * k))
    c4 = Fraction(s, factorial(n - i)) ** k * la.concat_reverse_sign(Jc, J)
    return c12, c3, c4


def _jacobi_diagrammatic(ctx, ck):
    n, k = ctx.n, ctx.k
    _need_k(ctx, 1, n)
    a = ctx.matrix("A", invertible=True)
    reg = ctx.registry(invertible=True)
    d = la.det(a)
    d1 = evaluate(bd.bubble_jacobi(n, k), reg)
    d2 = evaluate(bd.adjugate_diagram(n, k), reg)
    for I, J in ctx.pairs(k):
        Ic, Jc = la.complement(I, n), la.complement(J, n)
        c12, c3, c4 = jacobi_constants(n, k, I, J)
        ck.scalar(f"I={I} J={J}", d1[(Ic, Jc)], c12 * d ** (k - 1) * d2[(I, J)])
        ck.scalar(f"c1c2c3c4 I={I} J={J}", c12 * c3 * c4, 1)


def _jacobi(ctx, ck):
    n, k = ctx.n, ctx.k
    _need_k(ctx, 1, n)
    a = ctx.matrix("A", invertible=True)
    d = la.det(a)
    adj = la.adjugate(a)
    d1 = evaluate(bd.bubble_jacobi(n, k), ctx.registry(invertible=True))
    for I, J in ctx.pairs(k):
        lhs = la.minor(adj, I, J)
        ck.scalar(f"I={I} J={J}", lhs, la.cofactor(a, J, I) * d ** (k - 1))
        _, _, c4 = jacobi_constants(n, k, I, J)
        Ic, Jc = la.complement(I, n), la.complement(J, n)
        ck.scalar(f"diagram I={I} J={J}", c4 * d1[(Ic, Jc)], lhs)
    if k == n:
        ck.scalar("det(adj A)", la.det(adj), d ** (n - 1))


def _dodgson_step(ctx, ck):
    n = ctx.n
    if n < 3:
        raise InvalidParameters("condensation needs n >= 3")
    a = ctx.matrix("A")
    d = la.det(a)
    inner = la.det(la.interior(a))
    c = lambda r, s: la.cofactor(a, (r,), (s,))  # noqa: E731
    top = c(1, 1) * c(n, n) - c(1, n) * c(n, 1)
    ck.scalar("det(A) det(int A)", d * inner, top)
    corner = (1, n)
    ck.scalar("adjugate minor", la.minor(la.adjugate(a), corner, corner), la.cofactor(a, corner, corner) * d)
    if inner:
        ck.scalar("condensation", top / inner, d)
    try:
        value, _ = la.dodgson(a)
    except la.DodgsonError as exc:
        ctx.notes.append(f"full condensation skipped: {exc}")
    else:
        ck.scalar("dodgson", value, d)


def _jacobi_diagrammatic_general(ctx, ck):
    n, i, k = ctx.n, ctx.i, ctx.k
    if i is None or k is None or i < 1 or k < 1 or i * k > n:
        raise InvalidParameters("needs i >= 1, k >= 1 and ik <= n")
    a = ctx.matrix("A", invertible=True)
    reg = ctx.registry(invertible=True)
    d = la.det(a)
    d1 = evaluate(bd.bubble_jacobi_general(n, i, k), reg)
    d2 = evaluate(bd.adjugate_diagram(n, i * k), reg)
    ratios = set()
    for I, J in ctx.pairs(i * k):
        Jc = la.complement(J, n)
        c12, c3, c4 = general_jacobi_constants(n, i, k, I, J)
        rhs = c12 * d ** (k - 1) * d2[(I, J)]
        ck.scalar(f"i={i} k={k} I={I} J={J}", d1[(I, Jc)], rhs)
        ck.scalar(f"c1c2c3c4 i={i} k={k} I={I} J={J}", c12 * c3 * c4, 1)
        if rhs:
            ratios.add(d1[(I, Jc)] / rhs)
    if len(ratios) == 1 and ratios != {1}:
        ctx.notes.append(f"i={i} k={k}: sides agree up to the constant factor {fmt_scalar(ratios.pop())}")
    elif len(ratios) > 1:
        ctx.notes.append(f"i={i} k={k}: sides are not proportional")


def _generalized_jacobi(ctx, ck):
    n, i, k = ctx.n, ctx.i, ctx.k
    if i is None or k is None or i < 1 or k < 1 or i * k > n:
        raise InvalidParameters("needs i >= 1, k >= 1 and ik <= n")
    a = ctx.matrix("A", invertible=True)
    d = la.det(a)
    table = la.adjugate_i(a, i)
    for I, J in ctx.pairs(i * k):
        bi, bj = la.BlockIndex.chunk(I, i, n), la.BlockIndex.chunk(J, i, n)
        fast = la.generalized_minor(table, bi, bj)
        ck.scalar(f"i={i} k={k} I={I} J={J}", fast, la.cofactor(a, J, I) * d ** (k - 1))
        if i * k <= 6:
            ck.scalar(f"oracle i={i} k={k} I={I} J={J}", la.generalized_minor_bruteforce(table, bi, bj), fast)
    if n <= 4:
        f = evaluate(bd.adjugate_diagram(n, i), ctx.registry(invertible=True))
        c = Fraction(tdsign(n), factorial(n - i))
        for (I, J), v in table.items():
            ck.scalar(f"adj_{i} diagram I={I} J={J}", c * f[(I, J)], v)


def _relation_under_framings(ck, label, lhs_terms, rhs_terms, leaves, reg=None):
    from .function import combination_equal

    for mask in range(2 ** len(leaves)):
        ins = [x for t, x in enumerate(leaves) if mask >> t & 1]
        outs = [x for t, x in enumerate(leaves) if not mask >> t & 1]
        left = [(c, reframe(d, ins, outs)) for c, d in lhs_terms]
        right = [(c, reframe(d, ins, outs)) for c, d in rhs_terms]
        cmp = combination_equal(left, right, reg)
        ck.count += 1
        if not cmp.equal and ck.first is None:
            ck.first = {"input": f"{label} inputs={tuple(ins)} at {cmp.key}", "lhs": cmp.lhs, "rhs": cmp.rhs}


def _framing_independence(ctx, ck):
    n = ctx.n
    if n == 3:
        _relation_under_framings(
            ck,
            "binor",
            [(1, bd.binor())],
            [(1, bd.swap(3)), (-1, bd.parallel(3))],
            ["i1", "i2", "o1", "o2"],
        )
    a = ctx.matrix("A")
    reg = ctx.registry()
    legs = [f"i{t + 1}" for t in range(n)]
    _relation_under_framings(
        ck,
        "node action",
        [(1, bd.one_node(n, n, lower_labels=("A",)))],
        [(la.det(a), bd.one_node(n, n))],
        legs,
        reg,
    )


def _partner_arity(rng, n, a):
    # an even-dimensional diagram needs an even leaf count
    return rng.choice([b for b in range(3) if n % 2 or (a + b) % 2 == 0])


def _random_pairs(ctx, count=10):
    rng = ctx.rng
    n = ctx.n
    for _ in range(count):
        a = rng.randint(0, 2)
        b = _partner_arity(rng, n, a)
        c = _partner_arity(rng, n, b)
        yield bd.random_diagram(rng, n, a, b), bd.random_diagram(rng, n, b, c)


def _functoriality_compose(ctx, ck):
    reg = ctx.registry(("A", "B"))
    for t, (d1, d2) in enumerate(_random_pairs(ctx)):
        glued = compose(d1, d2)
        ck.truth(f"pair {t} valid", not validate(glued))
        ck.maps(f"pair {t}", evaluate(glued, reg), evaluate(d1, reg).then(evaluate(d2, reg)))


def _functoriality_tensor(ctx, ck):
    reg = ctx.registry(("A", "B"))
    for t, (d1, d2) in enumerate(_random_pairs(ctx)):
        both = tensor_product(d1, d2)
        ck.truth(f"pair {t} valid", not validate(both))
        ck.maps(f"pair {t}", evaluate(both, reg), evaluate(d1, reg).outer(evaluate(d2, reg)))


def _transpose(ctx, ck):
    n = ctx.n
    a, b = ctx.matrix("A"), ctx.matrix("B")
    reg = ctx.registry(("A", "B"), extra={"A.T": la.transpose(a), "B.T": la.transpose(b)})
    names = {"A": "A.T", "B": "B.T"}
    ck.maps("strand", evaluate(transpose(bd.strand(n, ("A",))), reg), _matrix_map(la.transpose(a)))
    rng = ctx.rng
    for t in range(6):
        a = rng.randint(0, 2)
        d = bd.random_diagram(rng, n, a, _partner_arity(rng, n, a))
        ck.truth(f"diagram {t} involution", transpose(transpose(d)) == d)
        ck.maps(f"diagram {t}", evaluate(transpose(d), reg), evaluate(relabel(d, names), reg))


def _triple_product(ctx, ck):
    _need_n(ctx, {3})
    rng = ctx.rng
    bac = evaluate(reframe(bd.binor(), ["i1", "i2", "o2"], ["o1"]))
    triple = evaluate(compose(tensor_product(bd.cross_product(), bd.strand(3)), bd.cap(3)))
    quad = evaluate(compose(tensor_product(bd.cross_product(), bd.cross_product()), bd.cap(3)))
    for t in range(5):
        u, v, w, x = (bd.random_vector(rng, 3) for _ in range(4))
        img = apply(bac, vectors_tensor([u, v, w]))
        want = la.cross(la.cross(u, v), w)
        expand = [la.dot(u, w) * vv - la.dot(v, w) * uu for uu, vv in zip(u, v)]
        for c in range(3):
            ck.scalar(f"sample {t} (uxv)xw [{c + 1}]", img.get((c + 1,), 0), want[c])
            ck.scalar(f"sample {t} expansion [{c + 1}]", want[c], expand[c])
        det_uvw = la.det(la.columns([u, v, w]))
        ck.scalar(f"sample {t} (uxv).w", apply(triple, vectors_tensor([u, v, w])).get((), 0), det_uvw)
        ck.scalar(f"sample {t} (uxv).w classical", la.dot(la.cross(u, v), w), det_uvw)
        lagrange = la.dot(u, w) * la.dot(v, x) - la.dot(u, x) * la.dot(v, w)
        ck.scalar(f"sample {t} (uxv).(wxx)", apply(quad, vectors_tensor([u, v, w, x])).get((), 0), lagrange)
        ck.scalar(f"sample {t} (uxv).(wxx) classical", la.dot(la.cross(u, v), la.cross(w, x)), lagrange)


# -- catalog -------------------------------------------------------------------


def _no_k(n):
    return [dict()]


def _all_k(n):
    return [dict(k=k) for k in range(0, n + 1)]


def _pos_k(n):
    return [dict(k=k) for k in range(1, n + 1)]


def _ik(n):
    return [dict(i=i, k=k) for i in range(1, n + 1) for k in range(1, n // i + 1)]


@dataclass(frozen=True)
class Entry:
    name: str
    run: Callable
    combos: Callable = _no_k
    dims: tuple | None = None  # restricts verify_all; direct calls report invalid instead
    min_n: int = 2
    summary: str = ""


CATALOG: dict[str, Entry] = {
    e.name: e
    for e in [
        Entry("binor", _binor, dims=(3,), summary="two-vertex 3-diagram equals swap minus identity"),
        Entry("identity_strand", _identity_strand, summary="a bare strand is the identity map"),
        Entry("matrix_on_strand", _matrix_on_strand, summary="an A-strand maps v to Av"),
        Entry("matrix_chain", _matrix_chain, summary="B then A on a strand equals AB"),
        Entry("cap_dot", _cap_dot, summary="the cap is the inner product"),
        Entry("cross", _cross, dims=(3,), summary="the 3-vertex with two inputs is the cross product"),
        Entry("one_node", _one_node, _all_k, summary="single vertex closed form"),
        Entry("n_cap_det", _n_cap_det, summary="vertex with n decorated legs is a determinant"),
        Entry("two_node", _two_node, _all_k, summary="two-vertex closed form"),
        Entry("cut_paste", _cut_paste, _all_k, summary="cut-and-paste lemma"),
        Entry("node_equivariance", _node_equivariance, summary="matrix action at a vertex"),
        Entry("node_equivariance_inverse", _node_equivariance_inverse, _all_k, summary="inverse form of the vertex action"),
        Entry("det_diagram", _det_diagram, summary="closed two-vertex diagram gives the determinant"),
        Entry("det_product", _det_product, summary="det(AB) = det(A) det(B)"),
        Entry("minor_diagram", _minor_diagram, _all_k, summary="one-vertex diagrams for minors, both forms"),
        Entry("cofactor_diagram", _cofactor_diagram, _all_k, summary="two-vertex diagram for general cofactors"),
        Entry("adjugate_diagram", _adjugate_diagram, summary="two-vertex diagram for the adjugate"),
        Entry("cofactor_expansion", _cofactor_expansion, summary="row and column cofactor expansion"),
        Entry("laplace_expansion", _laplace_expansion, _all_k, summary="Laplace expansion along k rows or columns"),
        Entry("jacobi_diagrammatic", _jacobi_diagrammatic, _pos_k, summary="bubble diagram relation"),
        Entry("jacobi", _jacobi, _pos_k, summary="minors of the adjugate"),
        Entry("dodgson_step", _dodgson_step, min_n=3, summary="condensation identity"),
        Entry("jacobi_diagrammatic_general", _jacobi_diagrammatic_general, _ik, summary="i-adjugate bubble relation"),
        Entry("generalized_jacobi", _generalized_jacobi, _ik, summary="generalized minors of the i-adjugate"),
        Entry("framing_independence", _framing_independence, summary="relations hold under every framing"),
        Entry("functoriality_compose", _functoriality_compose, summary="composition is matrix product"),
        Entry("functoriality_tensor", _functoriality_tensor, summary="juxtaposition is the outer product"),
        Entry("transpose", _transpose, summary="reversing orientations transposes the matrices"),
        Entry("triple_product", _triple_product, dims=(3,), summary="vector triple products"),
    ]
}


def catalog_names() -> list[str]:
    return list(CATALOG)


def verify(
    identity: str,
    n: int,
    k: int | None = None,
    i: int | None = None,
    seed: int = 0,
    registry: MatrixRegistry | dict | None = None,
    index_sets: tuple | None = None,
    force_singular: bool = False,
) -> VerificationReport:
    """Check one catalog identity.  With k (and i) left out, every feasible value is covered."""
    if identity not in CATALOG:
        raise UnknownIdentity(identity)
    entry = CATALOG[identity]
    if registry is not None and not isinstance(registry, MatrixRegistry):
        registry = MatrixRegistry(registry)
    params = {"n": n, "k": k, "i": i, "seed": seed}
    if index_sets is not None:
        params["I"], params["J"] = tuple(index_sets[0]), tuple(index_sets[1])
    start = time.perf_counter()
    ck = Checks()
    notes: list[str] = []
    try:
        if n < 2:
            raise InvalidParameters("n must be at least 2")
        if entry.dims is not None and n not in entry.dims:
            raise InvalidParameters(f"{identity} is only defined for n in {list(entry.dims)}")
        if n < entry.min_n:
            raise InvalidParameters(f"{identity} needs n >= {entry.min_n}")
        combos = [dict()] if entry.combos is _no_k else entry.combos(n)
        wanted = [
            c for c in combos if (k is None or c.get("k", k) == k) and (i is None or c.get("i", i) == i)
        ]
        if entry.combos is not _no_k and (k is not None or i is not None) and not wanted:
            wanted = [{"k": k, "i": i}]  # let the entry explain why
        for combo in wanted:
            ctx = Context(
                identity, n, combo.get("k", k), combo.get("i", i), seed, registry, index_sets, force_singular
            )
            entry.run(ctx, ck)
            notes.extend(ctx.notes)
    except InvalidParameters as exc:
        return VerificationReport(
            identity,
            params,
            equal=False,
            elapsed=time.perf_counter() - start,
            status="invalid",
            message=str(exc),
            checks=ck.count,
        )
    equal = ck.first is None
    return VerificationReport(
        identity,
        params,
        lhs=ck.lhs,
        rhs=ck.rhs,
        equal=equal,
        counterexample=ck.first,
        elapsed=time.perf_counter() - start,
        status="pass" if equal else "fail",
        message="; ".join(dict.fromkeys(notes)),
        checks=ck.count,
    )


def verify_all(n_list: Iterable[int], seed: int = 0, force_singular: bool = False) -> list[VerificationReport]:
    """Run every identity at each feasible parameter combination; catalog order."""
    n_list = list(n_list)
    reports = []
    for name, entry in CATALOG.items():
        for n in n_list:
            if entry.dims is not None and n not in entry.dims or n < entry.min_n:
                continue
            for combo in entry.combos(n):
                reports.append(
                    verify(name, n, k=combo.get("k"), i=combo.get("i"), seed=seed, force_singular=force_singular)
                )
    return reports
