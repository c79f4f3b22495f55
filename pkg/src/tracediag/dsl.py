"""Text format for matrices and trace diagrams (``.tdg`` files).

    matrix A [[1, 2], [3, 4/5]]
    diagram theta { dim 2; node a cilia (x, y); node b cilia (y, x); inputs (); outputs (); }

``#`` starts a comment that runs to the end of the line.
"""
from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from .diagram import Leaf, MatrixNode, MatrixRegistry, NNode, TraceDiagram, fmt_scalar, validate


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    column: int
    length: int

    def __str__(self):
        return f"{self.file}:{self.line}:{self.column}"


@dataclass(frozen=True)
class ParseError:
    span: SourceSpan
    message: str
    hint: str = ""
    related: tuple = ()

    def __str__(self):
        text = f"{self.span}: error: {self.message}"
        if self.hint:
            text += f" (expected {self.hint})"
        for s in self.related:
            text += f"\n  {s}: note: also used here"
        return text


class ParseFailure(Exception):
    def __init__(self, errors: list[ParseError]):
        self.errors = list(errors)
        super().__init__("\n".join(map(str, self.errors)))


@dataclass
class Document:
    registry: MatrixRegistry
    diagrams: dict[str, TraceDiagram] = field(default_factory=dict)


# -- lexer ---------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<inv>\^-1)
  | (?P<int>-?[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_.]*)
  | (?P<punct>[{}()\[\],;:/])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # ident | int | inv | punct | eof
    text: str
    span: SourceSpan


def tokenize(text: str, file: str = "<input>") -> tuple[list[Token], list[ParseError]]:
    tokens, errors = [], []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            bad = text[pos]
            errors.append(ParseError(SourceSpan(file, line, col, 1), f"unexpected character {bad!r}"))
            length = 1
            kind = None
        else:
            kind = m.lastgroup
            length = m.end() - pos
        chunk = text[pos:pos + length]
        if kind not in (None, "ws", "comment"):
            tokens.append(Token(kind, chunk, SourceSpan(file, line, col, length)))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = length - chunk.rfind("\n")
        else:
            col += length
        pos += length
    tokens.append(Token("eof", "", SourceSpan(file, line, col, 0)))
    return tokens, errors


# -- parser --------------------------------------------------------------------


class _Syntax(Exception):
    def __init__(self, error: ParseError):
        self.error = error


class _Parser:
    def __init__(self, tokens: list[Token], file: str):
        self.toks = tokens
        self.pos = 0
        self.file = file
        self.errors: list[ParseError] = []

    @property
    def cur(self) -> Token:
        return self.toks[self.pos]

    def advance(self) -> Token:
        tok = self.cur
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def fail(self, hint: str, message: str | None = None):
        tok = self.cur
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise _Syntax(ParseError(tok.span, message or f"unexpected {found}", hint))

    def at(self, text: str) -> bool:
        return self.cur.kind in ("punct", "ident", "inv") and self.cur.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(repr(text))
        return self.advance()

    def ident(self, what: str = "identifier") -> Token:
        if self.cur.kind != "ident":
            self.fail(what)
        return self.advance()

    def integer(self, what: str = "integer") -> Token:
        if self.cur.kind != "int":
            self.fail(what)
        return self.advance()

    def sync(self, stops: set[str]):
        while self.cur.kind != "eof" and not (self.cur.kind == "punct" and self.cur.text in stops):
            self.advance()

    # grammar

    def file_(self):
        matrices, diagrams = [], []
        while self.cur.kind != "eof":
            try:
                if self.at("matrix"):
                    matrices.append(self.matrix_def())
                elif self.at("diagram"):
                    d = self.diagram_def()
                    if d is not None:
                        diagrams.append(d)
                else:
                    self.fail("'matrix' or 'diagram'")
            except _Syntax as exc:
                self.errors.append(exc.error)
                # skip ahead to something that can start a definition
                self.advance()
                while self.cur.kind != "eof" and not (self.at("matrix") or self.at("diagram")):
                    self.advance()
        return matrices, diagrams

    def rational(self):
        num = self.integer("rational")
        value = Fraction(int(num.text))
        if self.at("/"):
            self.advance()
            den = self.integer("positive integer")
            if int(den.text) <= 0:
                raise _Syntax(ParseError(den.span, "denominator must be positive", "positive integer"))
            value = Fraction(int(num.text), int(den.text))
        return value

    def row(self):
        self.expect("[")
        vals = [self.rational()]
        while self.at(","):
            self.advance()
            vals.append(self.rational())
        self.expect("]")
        return vals

    def matrix_def(self):
        self.expect("matrix")
        name = self.ident("matrix name")
        start = self.cur.span
        self.expect("[")
        rows = [self.row()]
        while self.at(","):
            self.advance()
            rows.append(self.row())
        self.expect("]")
        return name, start, rows

    def edge_list(self):
        self.expect("(")
        out = []
        if not self.at(")"):
            out.append(self.ident("edge id"))
            while self.at(","):
                self.advance()
                out.append(self.ident("edge id"))
        self.expect(")")
        return out

    def diagram_def(self):
        self.expect("diagram")
        name = self.ident("diagram name")
        self.expect("{")
        self.expect("dim")
        dim = self.integer("dimension")
        self.expect(";")
        body = {"name": name, "dim": dim, "items": []}
        while not self.at("}"):
            if self.cur.kind == "eof":
                self.fail("'}'")
            try:
                body["items"].append(self.item())
            except _Syntax as exc:
                self.errors.append(exc.error)
                self.sync({";", "}"})
                if self.at(";"):
                    self.advance()
        self.expect("}")
        return body

    def item(self):
        tok = self.cur
        if self.at("node"):
            self.advance()
            vid = self.ident("vertex id")
            self.expect("cilia")
            edges = self.edge_list()
            if not edges:
                raise _Syntax(ParseError(tok.span, "an n-vertex needs at least one edge", "edge id"))
            self.expect(";")
            return ("node", tok, vid, edges)
        if self.at("mat"):
            self.advance()
            vid = self.ident("vertex id")
            self.expect(":")
            label = self.ident("matrix name")
            inverted = False
            if self.cur.kind == "inv":
                self.advance()
                inverted = True
            self.expect("in")
            ein = self.ident("edge id")
            self.expect("out")
            eout = self.ident("edge id")
            self.expect(";")
            return ("mat", tok, vid, label, inverted, ein, eout)
        if self.at("leaf"):
            self.advance()
            vid = self.ident("leaf id")
            self.expect("edge")
            e = self.ident("edge id")
            self.expect(";")
            return ("leaf", tok, vid, e)
        if self.at("loop"):
            self.advance()
            count = self.integer("loop count")
            if int(count.text) < 0:
                raise _Syntax(ParseError(count.span, "loop count must be non-negative", "non-negative integer"))
            self.expect(";")
            return ("loop", tok, int(count.text))
        if self.at("inputs") or self.at("outputs"):
            self.advance()
            ids = self.edge_list()
            self.expect(";")
            return (tok.text, tok, ids)
        self.fail("'node', 'mat', 'leaf', 'loop', 'inputs' or 'outputs'")


# -- semantic checks -----------------------------------------------------------


def _build(parser: _Parser, matrices, diagrams):
    errors = parser.errors
    entries, mspan = {}, {}
    for name, start, rows in matrices:
        if name.text in entries:
            errors.append(ParseError(name.span, f"matrix {name.text!r} is defined twice", related=(mspan[name.text],)))
            continue
        size = len(rows)
        if any(len(r) != size for r in rows):
            errors.append(ParseError(start, f"matrix {name.text!r} is not square ({size} rows)"))
            continue
        entries[name.text] = rows
        mspan[name.text] = name.span
    registry = MatrixRegistry(entries)

    out: dict[str, TraceDiagram] = {}
    seen: dict[str, SourceSpan] = {}
    for body in diagrams:
        name = body["name"]
        if name.text in seen:
            errors.append(ParseError(name.span, f"diagram {name.text!r} is defined twice", related=(seen[name.text],)))
            continue
        seen[name.text] = name.span
        d = _build_diagram(body, registry, errors)
        if d is not None:
            out[name.text] = d
    return registry, out


def _build_diagram(body, registry: MatrixRegistry, errors: list[ParseError]):
    before = len(errors)
    dim_tok = body["dim"]
    dim = int(dim_tok.text)
    if dim < 2:
        errors.append(ParseError(dim_tok.span, "dim must be at least 2", "integer >= 2"))
    nodes, mats, leaves = [], [], []
    loops = 0
    framing: dict[str, tuple] = {}
    uses = defaultdict(list)  # edge id -> spans
    vertex_at: dict[str, SourceSpan] = {}

    def declare(vid):
        if vid.text in vertex_at:
            errors.append(
                ParseError(vid.span, f"vertex {vid.text!r} is declared twice", related=(vertex_at[vid.text],))
            )
        else:
            vertex_at[vid.text] = vid.span

    for item in body["items"]:
        kind = item[0]
        if kind == "node":
            _, tok, vid, edges = item
            declare(vid)
            if len(edges) != dim:
                errors.append(ParseError(tok.span, f"n-vertex {vid.text!r} has {len(edges)} edges but dim is {dim}"))
            for e in edges:
                uses[e.text].append(e.span)
            nodes.append(NNode(vid.text, tuple(e.text for e in edges)))
        elif kind == "mat":
            _, tok, vid, label, inverted, ein, eout = item
            declare(vid)
            if label.text not in registry:
                errors.append(ParseError(label.span, f"unknown matrix {label.text!r}", "a name from a matrix definition"))
            elif len(registry[label.text]) != dim:
                errors.append(
                    ParseError(
                        label.span, f"matrix {label.text!r} is {len(registry[label.text])}x{len(registry[label.text])} but dim is {dim}"
                    )
                )
            uses[ein.text].append(ein.span)
            uses[eout.text].append(eout.span)
            mats.append(MatrixNode(vid.text, label.text, ein.text, eout.text, inverted))
        elif kind == "leaf":
            _, tok, vid, e = item
            declare(vid)
            uses[e.text].append(e.span)
            leaves.append(Leaf(vid.text, e.text))
        elif kind == "loop":
            loops += item[2]
        else:
            _, tok, ids = item
            if kind in framing:
                errors.append(ParseError(tok.span, f"{kind} declared twice"))
            framing[kind] = (tok, ids)

    for e, spans in uses.items():
        if len(spans) == 1:
            errors.append(ParseError(spans[0], f"edge {e!r} has only one endpoint", "a second use of this edge id"))
        elif len(spans) > 2:
            errors.append(
                ParseError(spans[0], f"edge {e!r} is used {len(spans)} times, expected 2", related=tuple(spans[1:]))
            )

    leaf_ids = {leaf.id for leaf in leaves}
    listed: dict[str, SourceSpan] = {}
    for kind in ("inputs", "outputs"):
        if kind not in framing:
            errors.append(ParseError(body["name"].span, f"diagram has no '{kind}' statement", f"'{kind} (...);'"))
            continue
        for lid in framing[kind][1]:
            if lid.text not in leaf_ids:
                errors.append(ParseError(lid.span, f"{lid.text!r} is not a leaf of this diagram", "leaf id"))
            elif lid.text in listed:
                errors.append(ParseError(lid.span, f"leaf {lid.text!r} is framed twice", related=(listed[lid.text],)))
            else:
                listed[lid.text] = lid.span
    for leaf in leaves:
        if leaf.id in leaf_ids and leaf.id not in listed and all(k in framing for k in ("inputs", "outputs")):
            errors.append(ParseError(vertex_at[leaf.id], f"leaf {leaf.id!r} is neither an input nor an output"))

    if len(errors) > before:
        return None
    d = TraceDiagram(
        dim,
        tuple(nodes),
        tuple(mats),
        tuple(leaves),
        loops,
        tuple(x.text for x in framing["inputs"][1]),
        tuple(x.text for x in framing["outputs"][1]),
    )
    for v in validate(d):  # anything the checks above missed
        errors.append(ParseError(body["name"].span, str(v)))
    return None if len(errors) > before else d


def parse(text: str, file: str = "<input>") -> Document:
    """Parse a ``.tdg`` source; raises ParseFailure carrying every error found."""
    tokens, errors = tokenize(text, file)
    parser = _Parser(tokens, file)
    parser.errors.extend(errors)
    matrices, diagrams = parser.file_()
    registry, out = _build(parser, matrices, diagrams)
    if parser.errors:
        raise ParseFailure(sorted(parser.errors, key=lambda e: (e.span.line, e.span.column)))
    return Document(registry, out)


def parse_file(path) -> Document:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), str(path))


# -- serializer ----------------------------------------------------------------


def _matrix_text(name, rows) -> str:
    body = ", ".join("[" + ", ".join(fmt_scalar(x) for x in row) + "]" for row in rows)
    return f"matrix {name} [{body}]"


def diagram_text(name: str, d: TraceDiagram) -> str:
    parts = [f"diagram {name} {{", f"dim {d.dim};"]
    for v in d.nodes:
        parts.append(f"node {v.id} cilia ({', '.join(v.cilia)});")
    for m in d.mats:
        inv = "^-1" if m.inverted else ""
        parts.append(f"mat {m.id} : {m.matrix}{inv} in {m.in_edge} out {m.out_edge};")
    for leaf in d.leaves:
        parts.append(f"leaf {leaf.id} edge {leaf.edge};")
    if d.free_loops:
        parts.append(f"loop {d.free_loops};")
    parts.append(f"inputs ({', '.join(d.inputs)});")
    parts.append(f"outputs ({', '.join(d.outputs)});")
    parts.append("}")
    return " ".join(parts)


def serialize(registry=None, diagrams=None) -> str:
    """Canonical text: matrices sorted by name, then diagrams sorted by name, one per line."""
    lines = [_matrix_text(name, (registry or {})[name]) for name in sorted(registry or {})]
    lines += [diagram_text(name, d) for name, d in sorted((diagrams or {}).items())]
    return "\n".join(lines)
