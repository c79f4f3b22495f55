import pytest

from tracediag import builders as bd
from tracediag.diagram import TraceDiagram, validate
from tracediag.dsl import ParseFailure, parse, serialize, tokenize
from tracediag.function import evaluate

from conftest import builder_diagrams, registry_for

THETA = """# theta graph at n = 2
diagram theta {
    dim 2;
    node a cilia (x, y);
    node b cilia (y, x);
    inputs ();
    outputs ();
}
"""


def errors_of(text):
    with pytest.raises(ParseFailure) as info:
        parse(text, "t.tdg")
    return info.value.errors


def test_theta_file():
    doc = parse(THETA)
    assert list(doc.diagrams) == ["theta"]
    d = doc.diagrams["theta"]
    assert validate(d) == [] and evaluate(d).scalar() == -2


def test_triple_edge_use_lists_every_span():
    text = "diagram t { dim 2; node a cilia (e1, e1); leaf x edge e1; inputs (x); outputs (); }"
    (err,) = [e for e in errors_of(text) if "e1" in e.message]
    spans = [err.span, *err.related]
    assert len(spans) == 3
    assert all(text[s.column - 1:s.column - 1 + s.length] == "e1" for s in spans)


def test_semantic_errors():
    text = "\n".join(
        [
            "matrix A [[1, 2], [3, 4]]",
            "matrix S [[1, 2, 3]]",
            "diagram d { dim 3; mat m : A in p out q; mat m2 : Q in q out r; leaf x edge p; inputs (x, y); outputs (); }",
        ]
    )
    msgs = " | ".join(e.message for e in errors_of(text))
    assert "not square" in msgs
    assert "2x2 but dim is 3" in msgs
    assert "unknown matrix 'Q'" in msgs
    assert "edge 'r' has only one endpoint" in msgs
    assert "'y' is not a leaf" in msgs


def test_syntax_errors_have_hints_and_recover():
    text = "diagram d { dim 2; node a cilia (x y); inputs (); outputs (); }\nbogus\nmatrix B [[1/0]]"
    errs = errors_of(text)
    assert errs[0].hint == "','" or errs[0].hint == "')'"
    assert any(e.span.line == 2 and "'matrix' or 'diagram'" == e.hint for e in errs)
    assert any(e.span.line == 3 and "denominator" in e.message for e in errs)


def test_more_checks():
    assert any("dim must be at least 2" in e.message for e in errors_of("diagram d { dim 1; inputs (); outputs (); }"))
    assert any("has 1 edges but dim is 2" in e.message for e in errors_of("diagram d { dim 2; node a cilia (x); leaf l edge x; inputs (l); outputs (); }"))
    assert any("no 'outputs'" in e.message for e in errors_of("diagram d { dim 2; inputs (); }"))
    assert any("neither an input nor an output" in e.message for e in errors_of("diagram d { dim 2; leaf a edge x; leaf b edge x; inputs (a); outputs (); }"))
    assert any("defined twice" in e.message for e in errors_of("matrix A [[1]]\nmatrix A [[2]]"))
    assert any("declared twice" in e.message for e in errors_of("diagram d { dim 2; leaf a edge x; leaf a edge x; inputs (a); outputs (); }"))
    assert any("unexpected character" in e.message for e in errors_of("diagram d { dim 2; @ }"))


def test_serialize_examples():
    assert serialize() == ""
    assert serialize({}, {"c": TraceDiagram(3, free_loops=1)}) == "diagram c { dim 3; loop 1; inputs (); outputs (); }"


def test_matrix_rationals_print_canonically():
    doc = parse("matrix M [[2/4, -3/1], [0, -7/21]]")
    assert serialize(doc.registry) == "matrix M [[1/2, -3], [0, -1/3]]"


def test_inverse_marking_round_trip():
    d = bd.inverse_bubble(2)
    reg = registry_for(2)
    text = serialize(reg, {"b": d})
    assert "^-1" in text
    doc = parse(text)
    assert doc.diagrams["b"] == d
    assert evaluate(doc.diagrams["b"], doc.registry) == evaluate(d, reg)


@pytest.mark.parametrize("name, d", builder_diagrams())
def test_builder_round_trip(name, d):
    reg = registry_for(d.dim)
    text = serialize(reg, {name: d})
    doc = parse(text)
    assert doc.diagrams[name] == d
    assert serialize(doc.registry, doc.diagrams) == text
    assert evaluate(doc.diagrams[name], doc.registry) == evaluate(d, reg)


def test_spans_are_one_based():
    toks, errs = tokenize("a\n  bc", "f")
    assert not errs
    assert (toks[0].span.line, toks[0].span.column) == (1, 1)
    assert (toks[1].span.line, toks[1].span.column, toks[1].span.length) == (2, 3, 2)
