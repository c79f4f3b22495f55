"""Diagram functions as sparse exact coefficient tables."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .coloring import weight
from .contract import contract
from .diagram import DiagramError, MatrixRegistry, TraceDiagram, _require_valid, fmt_scalar

MultiIndex = tuple  # tuple[int, ...]


class TensorMap:
    """Coefficients of a multilinear map V^(x in_arity) -> V^(x out_arity).

    Keys are ``(out_index, in_index)``; zero coefficients are never stored.
    """

    __slots__ = ("dim", "in_arity", "out_arity", "coeffs")

    def __init__(self, dim: int, in_arity: int, out_arity: int, coeffs: Mapping | None = None):
        self.dim = dim
        self.in_arity = in_arity
        self.out_arity = out_arity
        clean = {}
        for (o, i), v in (coeffs or {}).items():
            o, i = tuple(o), tuple(i)
            if len(o) != out_arity or len(i) != in_arity:
                raise ValueError(f"index {(o, i)} does not match arity ({in_arity} in, {out_arity} out)")
            if any(not 1 <= c <= dim for c in o + i):
                raise ValueError(f"index {(o, i)} has a component outside 1..{dim}")
            v = Fraction(v)
            if v:
                clean[(o, i)] = v
        self.coeffs = clean

    # -- access --

    def __getitem__(self, key) -> Fraction:
        out, inp = key
        return self.coeffs.get((tuple(out), tuple(inp)), Fraction(0))

    def get(self, out, inp) -> Fraction:
        return self[(out, inp)]

    def items(self):
        """Nonzero entries sorted by (out, in)."""
        return sorted(self.coeffs.items())

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, TensorMap):
            return NotImplemented
        return (self.dim, self.in_arity, self.out_arity, self.coeffs) == (
            other.dim,
            other.in_arity,
            other.out_arity,
            other.coeffs,
        )

    def __repr__(self):
        return f"TensorMap(dim={self.dim}, in={self.in_arity}, out={self.out_arity}, nnz={len(self.coeffs)})"

    def shape(self):
        return self.dim, self.in_arity, self.out_arity

    def column(self, inp) -> dict[tuple, Fraction]:
        inp = tuple(inp)
        return {o: v for (o, i), v in self.coeffs.items() if i == inp}

    # -- algebra --

    def _same_shape(self, other: "TensorMap"):
        if self.shape() != other.shape():
            raise ValueError(f"shape mismatch: {self.shape()} vs {other.shape()}")

    def __add__(self, other: "TensorMap") -> "TensorMap":
        self._same_shape(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return TensorMap(self.dim, self.in_arity, self.out_arity, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TensorMap":
        c = Fraction(c)
        return TensorMap(self.dim, self.in_arity, self.out_arity, {k: v * c for k, v in self.coeffs.items()})

    def then(self, after: "TensorMap") -> "TensorMap":
        """The composite map ``after`` o ``self``."""
        if self.dim != after.dim or self.out_arity != after.in_arity:
            raise ValueError("cannot compose: dimension or arity mismatch")
        by_mid: dict[tuple, list] = {}
        for (o, m), v in after.coeffs.items():
            by_mid.setdefault(m, []).append((o, v))
        out: dict[tuple, Fraction] = {}
        for (m, i), v in self.coeffs.items():
            for o, w in by_mid.get(m, ()):
                out[(o, i)] = out.get((o, i), 0) + v * w
        return TensorMap(self.dim, self.in_arity, after.out_arity, out)

    def outer(self, other: "TensorMap") -> "TensorMap":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        out = {}
        for (o1, i1), v in self.coeffs.items():
            for (o2, i2), w in other.coeffs.items():
                out[(o1 + o2, i1 + i2)] = v * w
        return TensorMap(self.dim, self.in_arity + other.in_arity, self.out_arity + other.out_arity, out)

    def scalar(self) -> Fraction:
        if self.in_arity or self.out_arity:
            raise ValueError("not a scalar map")
        return self[((), ())]

    def format_lines(self) -> list[str]:
        return [
            f"out=({','.join(map(str, o))}) in=({','.join(map(str, i))}) value={fmt_scalar(v)}"
            for (o, i), v in self.items()
        ]

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "input_arity": self.in_arity,
            "output_arity": self.out_arity,
            "coefficients": [
                {"out": list(o), "in": list(i), "value": fmt_scalar(v)} for (o, i), v in self.items()
            ],
        }


def identity_map(dim: int, arity: int = 1) -> TensorMap:
    return TensorMap(dim, arity, arity, {(a, a): 1 for a in product(range(1, dim + 1), repeat=arity)})


# -- evaluation ----------------------------------------------------------------


def _leaf_colorings(diagram: TraceDiagram):
    """Yield (leaf-edge pre-coloring, out index, in index) for all consistent leaf labels."""
    n = diagram.dim
    edge_of = diagram.leaf_edges
    edges = sorted(set(edge_of.values()))
    for combo in product(range(1, n + 1), repeat=len(edges)):
        pre = dict(zip(edges, combo))
        yield (
            pre,
            tuple(pre[edge_of[x]] for x in diagram.outputs),
            tuple(pre[edge_of[x]] for x in diagram.inputs),
        )


def evaluate(diagram: TraceDiagram, registry: MatrixRegistry | None = None, method: str = "contract") -> TensorMap:
    """The multilinear function of a framed diagram.

    ``method="enumerate"`` computes every coefficient as a coloring weight and
    serves as the reference; the default contracts the factor graph.
    """
    _require_valid(diagram)
    n = diagram.dim
    in_ar, out_ar = diagram.arity
    coeffs: dict = {}
    if method == "enumerate":
        for pre, out, inp in _leaf_colorings(diagram):
            w = weight(diagram, pre, registry)
            if w:
                coeffs[(out, inp)] = w
        return TensorMap(n, in_ar, out_ar, coeffs)
    if method != "contract":
        raise ValueError(f"unknown method {method!r}")
    edge_of = diagram.leaf_edges
    open_edges = sorted(set(edge_of.values()))
    pos = {e: k for k, e in enumerate(open_edges)}
    loops = Fraction(n) ** diagram.free_loops
    out_pos = [pos[edge_of[x]] for x in diagram.outputs]
    in_pos = [pos[edge_of[x]] for x in diagram.inputs]
    for key, val in contract(diagram, registry, open_edges).items():
        coeffs[(tuple(key[p] for p in out_pos), tuple(key[p] for p in in_pos))] = val * loops
    return TensorMap(n, in_ar, out_ar, coeffs)


Tensor = Mapping  # sparse: MultiIndex -> scalar


def basis_tensor(*index: int) -> dict[tuple, Fraction]:
    return {tuple(index): Fraction(1)}


def vectors_tensor(vectors: Sequence[Sequence]) -> dict[tuple, Fraction]:
    """Sparse form of v1 (x) v2 (x) ... for explicit coordinate vectors."""
    out: dict[tuple, Fraction] = {(): Fraction(1)}
    for vec in vectors:
        nxt = {}
        for idx, val in out.items():
            for c, x in enumerate(vec, start=1):
                if x:
                    nxt[idx + (c,)] = val * Fraction(x)
        out = nxt
    return out


def apply(tmap: TensorMap, tensor: Tensor) -> dict[tuple, Fraction]:
    """Contract a sparse input tensor against the map; zero entries are dropped."""
    for idx in tensor:
        if len(idx) != tmap.in_arity:
            raise ValueError(f"input index {idx} does not have arity {tmap.in_arity}")
        if any(not 1 <= c <= tmap.dim for c in idx):
            raise ValueError(f"input index {idx} is outside 1..{tmap.dim}")
    by_in: dict[tuple, list] = {}
    for (o, i), v in tmap.coeffs.items():
        by_in.setdefault(i, []).append((o, v))
    out: dict[tuple, Fraction] = {}
    for idx, x in tensor.items():
        for o, v in by_in.get(tuple(idx), ()):
            out[o] = out.get(o, 0) + v * Fraction(x)
    return {k: v for k, v in out.items() if v}


# -- combinations --------------------------------------------------------------


@dataclass
class DiagramCombination:
    terms: list = field(default_factory=list)  # list of (weight, TraceDiagram)

    def __post_init__(self):
        if not self.terms:
            raise DiagramError("a combination needs at least one term")
        self.terms = [(Fraction(c), d) for c, d in self.terms]
        shapes = {(d.dim, d.arity) for _, d in self.terms}
        if len(shapes) != 1:
            raise DiagramError(f"terms disagree on dimension or arity: {sorted(shapes)}")

    @property
    def dim(self):
        return self.terms[0][1].dim

    @property
    def arity(self):
        return self.terms[0][1].arity

    def evaluate(self, registry=None, method="contract") -> TensorMap:
        total = None
        for c, d in self.terms:
            f = evaluate(d, registry, method).scale(c)
            total = f if total is None else total + f
        return total

    def reframe(self, new_inputs, new_outputs) -> "DiagramCombination":
        from .diagram import reframe

        return DiagramCombination([(c, reframe(d, new_inputs, new_outputs)) for c, d in self.terms])


def as_combination(x) -> DiagramCombination:
    if isinstance(x, DiagramCombination):
        return x
    if isinstance(x, TraceDiagram):
        return DiagramCombination([(1, x)])
    return DiagramCombination(list(x))


@dataclass(frozen=True)
class Comparison:
    equal: bool
    key: tuple | None = None
    lhs: Fraction | None = None
    rhs: Fraction | None = None

    def __bool__(self):
        return self.equal


def first_difference(a: TensorMap, b: TensorMap) -> Comparison:
    for key, v in sorted(a.coeffs.items()):
        if b.coeffs.get(key, 0) != v:
            return Comparison(False, key, v, b[key])
    for key, v in sorted(b.coeffs.items()):
        if a.coeffs.get(key, 0) != v:
            return Comparison(False, key, a[key], v)
    return Comparison(True)


def combination_equal(a, b, registry=None, method="contract") -> Comparison:
    a, b = as_combination(a), as_combination(b)
    if a.dim != b.dim or a.arity != b.arity:
        raise DiagramError(f"combinations disagree: {(a.dim, a.arity)} vs {(b.dim, b.arity)}")
    return first_difference(a.evaluate(registry, method), b.evaluate(registry, method))
