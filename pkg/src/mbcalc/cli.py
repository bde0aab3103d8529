"""Command-line driver: ``mbcalc <command> <file> ...``.

Reports are line-oriented ``key: value``.  Exit status is 0 on success, 1 on
a domain rejection (inapplicable move, negative search, failed filter or
certificate, poset violation) and 2 on parse or I/O errors.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .boundary import boundary_surface
from .errors import (FactRejected, MalformedCertificate, MbsError, NotApplicable,
                     NotMaximallySpread, ParseError, PosetViolation)
from .fmt import (load_facts, parse_certificate, read_document, serialize_surface)
from .invariants import class_x_report, classify_branch, classify_sector, homology
from .model import canonical_code, euler_sectors
from .moves import (applicable_ix, applicable_xi, apply_move, equivalent, parse_descriptor,
                    replay, spread_maximally)
from .order import check_certificate, euler_filter, hasse, minimality


class UsageError(Exception):
    pass


def _yn(flag):
    return "yes" if flag else "no"


def _load(path):
    return read_document(path)


def _surface(doc, name):
    if name not in doc.surfaces:
        raise UsageError(f"no surface named {name!r}")
    return doc.surfaces[name]


def _pair(text):
    a, sep, b = text.partition(",")
    if not sep or not a or not b:
        raise UsageError(f"expected <A>,<B>, got {text!r}")
    return a, b


def cmd_validate(args, out):
    doc = _load(args.file)
    load_facts(doc, Path(args.file).parent)
    out(f"surfaces: {len(doc.surfaces)}")
    for name, X in doc.surfaces.items():
        out(f"surface {name}: ok branches={len(X.branches)} sectors={len(X.sectors)}")
    out(f"facts: {len(doc.facts)}")
    out("status: ok")
    return 0


def cmd_info(args, out):
    X = _surface(_load(args.file), args.name)
    out(f"name: {args.name}")
    for b in X.branches:
        c = classify_branch(X, b.id)
        out(f"branch {b.id}: degree={b.degree} shift={b.shift} orbits={b.orbit_count} wrap={b.wrap} "
            f"normal={_yn(c.normal)} pure={_yn(c.pure)} spreadable={_yn(c.spreadable)}")
    for e in X.sectors:
        out(f"sector {e.id}: {e.sig.describe()} chi={e.sig.euler} kind={classify_sector(X, e.id).kind}")
    out(f"chi_E: {euler_sectors(X)}")
    h = homology(X)
    out(f"H0: {'Z' if h.b0 == 1 else f'Z^{h.b0}'}")
    out(f"H1: {h.format_h1()}")
    out(f"H2: {h.format_h2()}")
    report = class_x_report(X)
    out(f"maximally_spread: {_yn(report.maximally_spread)}")
    out(f"no_disk_sector: {_yn(report.no_disk_sector)}")
    out(f"min_degree: {_yn(report.min_degree_ok)}")
    out(f"essential: {'assumed' if report.essential_assumed else 'unknown'}")
    out(f"class_x: {report.verdict}")
    out(f"minimality: {minimality(X, args.name).verdict}")
    return 0


def cmd_boundary(args, out):
    X = _surface(_load(args.file), args.name)
    for line in boundary_surface(X).as_lines():
        out(line)
    return 0


def cmd_moves(args, out):
    X = _surface(_load(args.file), args.name)
    ix, xi = applicable_ix(X), applicable_xi(X)
    out(f"ix_count: {len(ix)}")
    for m in ix:
        out(f"ix: {m}")
    out(f"xi_count: {len(xi)}")
    for m in xi:
        out(f"xi: {m}")
    return 0


def cmd_apply(args, out):
    X = _surface(_load(args.file), args.name)
    if args.log:
        Y = replay(X, Path(args.log).read_text(encoding="utf-8"))
    elif args.descriptor:
        Y = apply_move(X, parse_descriptor(args.descriptor, X))
    else:
        raise UsageError("give a descriptor or --log")
    out(serialize_surface(args.name, Y).rstrip("\n"))
    return 0


def cmd_spread(args, out):
    X = _surface(_load(args.file), args.name)
    steps = []
    Y = spread_maximally(X, record=steps)
    for m in steps:
        out(f"# {m}")
    out(serialize_surface(args.name, Y).rstrip("\n"))
    return 0


def cmd_canon(args, out):
    X = _surface(_load(args.file), args.name)
    out(f"code: {canonical_code(X).decode('ascii')}")
    return 0


def cmd_equiv(args, out):
    doc = _load(args.file)
    a, b = _pair(args.pair)
    result = equivalent(_surface(doc, a), _surface(doc, b), args.depth)
    out(f"verdict: {result.verdict}")
    if result.equivalent:
        out(f"steps: {len(result.path)}")
        for m, _ in result.path.steps:
            out(f"step: {m}")
        if args.log:
            Path(args.log).write_text(result.path.to_text(), encoding="utf-8")
        return 0
    return 1


def cmd_order(args, out):
    doc = _load(args.file)
    a, b = _pair(args.pair)
    X, Y = _surface(doc, a), _surface(doc, b)
    cert = None
    if args.cert:
        cert = parse_certificate(Path(args.cert).read_text(encoding="utf-8"))
    else:
        for fact in load_facts(doc, Path(args.file).parent):
            if (fact.lower, fact.upper) == (a, b):
                cert = fact.certificate
    filt = euler_filter(X, Y, args.equality, cert)
    out(f"chi_E: {euler_sectors(X)} {euler_sectors(Y)}")
    out(f"euler_filter: {filt}")
    ok = filt.passed
    if cert is None:
        out("certificate: none")
    else:
        verdict = check_certificate(X, Y, cert)
        out(f"certificate: {verdict}")
        if verdict.ok:
            out(f"condition2: {'assumed' if verdict.condition2 else 'missing'}")
        ok = ok and verdict.ok
    out(f"verdict: {'consistent' if ok else 'rejected'}")
    return 0 if ok else 1


def cmd_hasse(args, out):
    doc = _load(args.file)
    diagram = hasse(doc.surfaces, load_facts(doc, Path(args.file).parent))
    Path(args.dot).write_text(diagram.dot, encoding="utf-8")
    out(f"nodes: {diagram.graph.number_of_nodes()}")
    out(f"edges: {diagram.graph.number_of_edges()}")
    for lo, hi in diagram.edges:
        out(f"edge: {lo} -> {hi}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mbcalc",
                                     description="Combinatorics of multibranched surfaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help, with_name=True):
        p = sub.add_parser(name, help=help)
        p.add_argument("file")
        if with_name:
            p.add_argument("name")
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "parse a document and check every surface", with_name=False)
    add("info", cmd_info, "classes, Euler characteristic, homology and class report")
    add("boundary", cmd_boundary, "classify the boundary of the regular neighbourhood")
    add("moves", cmd_moves, "list applicable IX- and XI-moves")
    p = add("apply", cmd_apply, "apply one move or a move log")
    p.add_argument("descriptor", nargs="?")
    p.add_argument("--log", help="file with one descriptor per line")
    add("spread", cmd_spread, "spread maximally (deterministic strategy)")
    add("canon", cmd_canon, "print the canonical code")
    p = add("equiv", cmd_equiv, "bounded IH-move equivalence search", with_name=False)
    p.add_argument("pair", metavar="A,B")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--log", help="write the move path here on success")
    p = add("order", cmd_order, "Euler filter and certificate check for A <= B", with_name=False)
    p.add_argument("pair", metavar="A,B")
    p.add_argument("--cert")
    p.add_argument("--equality", action="store_true")
    p = add("hasse", cmd_hasse, "Hasse diagram of the document's facts", with_name=False)
    p.add_argument("--dot", required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    def out(line):
        print(line)

    try:
        return args.func(args, out)
    except (ParseError, MalformedCertificate, OSError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NotApplicable, NotMaximallySpread, FactRejected, PosetViolation, MbsError) as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
