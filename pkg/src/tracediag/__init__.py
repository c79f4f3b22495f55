"""Exact evaluation of trace diagrams and the determinant identities they encode."""
from .diagram import (
    DiagramError,
    Leaf,
    MatrixNode,
    MatrixRegistry,
    NNode,
    SingularMatrixError,
    TraceDiagram,
    compose,
    reframe,
    tensor_product,
    transpose,
    validate,
)
from .coloring import chromatic_index, closed_value, enumerate_extensions, weight
from .function import DiagramCombination, TensorMap, apply, evaluate
from .identities import VerificationReport, verify, verify_all

__all__ = [
    "DiagramError",
    "DiagramCombination",
    "Leaf",
    "MatrixNode",
    "MatrixRegistry",
    "NNode",
    "SingularMatrixError",
    "TensorMap",
    "TraceDiagram",
    "VerificationReport",
    "apply",
    "chromatic_index",
    "closed_value",
    "compose",
    "enumerate_extensions",
    "evaluate",
    "reframe",
    "tensor_product",
    "transpose",
    "validate",
    "verify",
    "verify_all",
    "weight",
]
