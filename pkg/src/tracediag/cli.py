"""Command-line entry point ``tdg``.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import linalg
from .coloring import coefficient, enumerate_extensions, signature
from .diagram import DiagramError, SingularMatrixError, fmt_scalar
from .dsl import ParseFailure, parse_file
from .function import evaluate
from .identities import CATALOG, UnknownIdentity, reports_to_json, verify, verify_all

OK, FAILED, USAGE = 0, 1, 2


class _Usage(Exception):
    pass


def _load(path):
    try:
        return parse_file(path)
    except OSError as exc:
        raise _Usage(f"{path}: {exc.strerror or exc}") from exc
    except UnicodeDecodeError as exc:
        raise _Usage(f"{path}: not valid UTF-8") from exc


def _diagram(args):
    doc = _load(args.file)
    if args.diagram not in doc.diagrams:
        known = ", ".join(sorted(doc.diagrams)) or "none"
        raise _Usage(f"no diagram named {args.diagram!r} (defined: {known})")
    return doc, doc.diagrams[args.diagram]


def cmd_check(args):
    doc = _load(args.file)
    print(f"{args.file}: ok, {len(doc.registry)} matrices, {len(doc.diagrams)} diagrams")
    for name, d in doc.diagrams.items():
        ins, outs = d.arity
        print(f"diagram {name}: dim {d.dim}, {ins} inputs, {outs} outputs, {len(d.edges)} edges")
    return OK


def cmd_eval(args):
    doc, d = _diagram(args)
    if not d.is_closed:
        raise _Usage(f"diagram {args.diagram!r} has leaves; use 'function' for open diagrams")
    print(fmt_scalar(evaluate(d, doc.registry).scalar()))
    return OK


def cmd_function(args):
    doc, d = _diagram(args)
    f = evaluate(d, doc.registry)
    if args.json:
        print(json.dumps(f.to_json(), indent=2))
    else:
        for line in f.format_lines():
            print(line)
    return OK


def cmd_colorings(args):
    doc, d = _diagram(args)
    for k in enumerate_extensions(d):
        edges = " ".join(f"{e}={k[e]}" for e in sorted(k.assignment))
        loops = " loops=(" + ",".join(map(str, k.loop_colors)) + ")" if k.loop_colors else ""
        sig = signature(d, k)
        coef = coefficient(d, k, doc.registry)
        print(f"{edges}{loops} signature={sig:+d} coefficient={fmt_scalar(coef)}")
    return OK


def _emit(reports, as_json):
    if as_json:
        print(reports_to_json(reports))
    else:
        for r in reports:
            print(r.to_line())


def cmd_verify(args):
    try:
        report = verify(args.identity, args.n, k=args.k, i=args.i, seed=args.seed)
    except UnknownIdentity:
        raise _Usage(f"unknown identity {args.identity!r}; known: {', '.join(CATALOG)}")
    _emit([report], args.json)
    if report.status == "invalid":
        print(f"invalid parameters: {report.message}", file=sys.stderr)
        return USAGE
    return OK if report.equal else FAILED


def _n_list(text):
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}")
    if any(v < 2 for v in values):
        raise argparse.ArgumentTypeError("dimensions must be at least 2")
    return values


def cmd_verify_all(args):
    reports = verify_all(args.n, seed=args.seed)
    _emit(reports, args.json)
    failed = [r for r in reports if r.status == "fail"]
    print(f"{len(reports) - len(failed)} of {len(reports)} checks passed", file=sys.stderr)
    return FAILED if failed else OK


def _rows(m):
    return ["  [" + ", ".join(fmt_scalar(x) for x in row) + "]" for row in m]


def cmd_condense(args):
    doc = _load(args.file)
    if doc.diagrams:
        raise _Usage("condense expects a file with matrix definitions only")
    if not doc.registry:
        raise _Usage("no matrices to condense")
    status = OK
    for name in sorted(doc.registry):
        a = doc.registry[name]
        print(f"matrix {name}")
        try:
            value, stages = linalg.dodgson(a)
        except linalg.DodgsonError as exc:
            print(f"{name}: {exc}; det by elimination is {fmt_scalar(linalg.det(a))}", file=sys.stderr)
            status = FAILED
            continue
        for t, m in enumerate(stages):
            print(f"stage {t}:")
            print("\n".join(_rows(m)))
        print(f"det = {fmt_scalar(value)}")
    return status


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tdg", description="Exact trace diagram evaluation and identity checks.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="parse and validate a .tdg file")
    c.add_argument("file")
    c.set_defaults(run=cmd_check)

    for name, fn, helptext in (
        ("eval", cmd_eval, "value of a closed diagram"),
        ("function", cmd_function, "nonzero coefficients of a diagram's function"),
        ("colorings", cmd_colorings, "proper colorings with signature and coefficient"),
    ):
        c = sub.add_parser(name, help=helptext)
        c.add_argument("file")
        c.add_argument("--diagram", required=True)
        if name == "function":
            c.add_argument("--json", action="store_true")
        c.set_defaults(run=fn)

    c = sub.add_parser("verify", help="check one catalog identity")
    c.add_argument("identity")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--k", type=int)
    c.add_argument("--i", type=int)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--json", action="store_true")
    c.set_defaults(run=cmd_verify)

    c = sub.add_parser("verify-all", help="check every catalog identity")
    c.add_argument("--n", type=_n_list, default=[2, 3, 4])
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--json", action="store_true")
    c.set_defaults(run=cmd_verify_all)

    c = sub.add_parser("condense", help="Dodgson condensation of each matrix in a file")
    c.add_argument("file")
    c.set_defaults(run=cmd_condense)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE
    try:
        return args.run(args)
    except ParseFailure as exc:
        for err in exc.errors:
            print(err, file=sys.stderr)
        return USAGE
    except _Usage as exc:
        print(f"tdg: {exc}", file=sys.stderr)
        return USAGE
    except (DiagramError, SingularMatrixError) as exc:
        print(f"tdg: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
