"""Line-oriented text formats for surface documents (``.mbs``) and
standard-position certificates (``.cert``).

Surface documents::

    surface X1
    branch l1 degree=3 shift=1
    sector A orientable genus=0 boundaries=2
    attach l1.0 A.0 sign=- side=-
    assume essential "why this holds"
    fact X1 le X2 cert=certs/X1_X2.cert

Certificates::

    certificate
    map l1' l1
    copy a A level=0 ysector=A'
    arc n1_leg l1 ysector=A' kind=annulus core=no ends=@0,l1'.0
    cone n1_cone l1 l1' fiber=regular
    glue a.0 n1_leg.0
    assume order_condition2 "why this holds"

Blank lines and ``#`` comments are ignored.  Serialisation is canonical, so
``serialize(parse(text)) == text`` for every file written by this module.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError, ValidationError
from .model import (AssumptionRecord, Attachment, BranchModel, MultibranchedSurface, Sector,
                    SurfaceSig, build)
from .order import (ArcEnd, BranchArc, BranchCone, Certificate, OrderFact, SectorCopy)

ID = r"[A-Za-z_][A-Za-z0-9_']*"
_ID = re.compile(ID + r"\Z")
_REF = re.compile(rf"({ID})\.(\d+)\Z")


@dataclass(frozen=True)
class FactDecl:
    lower: str
    upper: str
    cert: str


@dataclass
class MbsDocument:
    surfaces: dict = field(default_factory=dict)  # name -> MultibranchedSurface
    facts: list = field(default_factory=list)  # FactDecl

    def __eq__(self, other):
        return (isinstance(other, MbsDocument) and list(self.surfaces.items()) == list(other.surfaces.items())
                and self.facts == other.facts)


# ---------------------------------------------------------------- helpers

_TOKEN = re.compile(r'"([^"]*)"|(#.*)|([^\s"]+)|(")')


def _tokens(line, lineno):
    # ids may contain primes, so only double quotes group text
    out = []
    for quoted, comment, bare, stray in _TOKEN.findall(line):
        if comment:
            break
        if stray:
            raise ParseError(lineno, "unterminated quote")
        out.append(bare or quoted)
    return out


def _ident(tok, lineno, what="id"):
    if not _ID.match(tok):
        raise ParseError(lineno, f"bad {what} {tok!r}")
    return tok


def _ref(tok, lineno):
    m = _REF.match(tok)
    if not m:
        raise ParseError(lineno, f"expected <id>.<index>, got {tok!r}")
    return m.group(1), int(m.group(2))


def _options(tokens, lineno, allowed, flags=()):
    opts = {}
    for tok in tokens:
        if tok in flags:
            opts[tok] = True
            continue
        key, sep, value = tok.partition("=")
        if not sep or key not in allowed:
            raise ParseError(lineno, f"unknown key {tok!r}")
        if key in opts:
            raise ParseError(lineno, f"key {key!r} given twice")
        opts[key] = value
    return opts


def _int(value, lineno, key):
    if value is None or not re.fullmatch(r"-?\d+", value):
        raise ParseError(lineno, f"{key} must be an integer")
    return int(value)


def _sign(value, lineno, key):
    if value is None:
        return 1
    if value not in ("+", "-"):
        raise ParseError(lineno, f"{key} must be + or -")
    return 1 if value == "+" else -1


def _assume(toks, lineno):
    if len(toks) != 3:
        raise ParseError(lineno, 'expected: assume <kind> "<citation>"')
    try:
        return AssumptionRecord(toks[1], toks[2])
    except ValidationError as exc:
        raise ParseError(lineno, str(exc)) from None


def _quote(text):
    if '"' in text or "\n" in text:
        raise ValueError("citations may not contain double quotes or newlines")
    return f'"{text}"'


# ---------------------------------------------------------------- surfaces

class _Block:
    def __init__(self, name, lineno):
        self.name, self.lineno = name, lineno
        self.branches, self.sectors, self.attachments, self.assumptions = {}, {}, [], []
        self.orbits_used, self.circles_used = set(), set()

    def finish(self):
        try:
            return build(self.branches.values(), self.sectors.values(), self.attachments,
                         self.assumptions)
        except ValidationError as exc:
            raise ParseError(self.lineno, f"surface {self.name}: {exc}") from None


def _surface_line(block, toks, lineno):
    head = toks[0]
    if head == "branch":
        if len(toks) < 2:
            raise ParseError(lineno, "branch needs an id")
        bid = _ident(toks[1], lineno)
        opts = _options(toks[2:], lineno, ("degree", "shift"))
        if bid in block.branches or bid in block.sectors:
            raise ParseError(lineno, f"id {bid} declared twice")
        try:
            block.branches[bid] = BranchModel(bid, _int(opts.get("degree"), lineno, "degree"),
                                              _int(opts.get("shift", "0"), lineno, "shift"))
        except ValidationError as exc:
            raise ParseError(lineno, str(exc)) from None
    elif head == "sector":
        if len(toks) < 3 or toks[2] not in ("orientable", "nonorientable"):
            raise ParseError(lineno, "expected: sector <id> orientable|nonorientable ...")
        sid = _ident(toks[1], lineno)
        if sid in block.branches or sid in block.sectors:
            raise ParseError(lineno, f"id {sid} declared twice")
        orientable = toks[2] == "orientable"
        key = "genus" if orientable else "crosscaps"
        opts = _options(toks[3:], lineno, (key, "boundaries"))
        try:
            sig = SurfaceSig(orientable, _int(opts.get(key), lineno, key),
                             _int(opts.get("boundaries"), lineno, "boundaries"))
        except ValidationError as exc:
            raise ParseError(lineno, str(exc)) from None
        block.sectors[sid] = Sector(sid, sig)
    elif head == "attach":
        if len(toks) < 3:
            raise ParseError(lineno, "expected: attach <branch>.<orbit> <sector>.<circle>")
        (bid, orbit), (sid, circle) = _ref(toks[1], lineno), _ref(toks[2], lineno)
        opts = _options(toks[3:], lineno, ("sign", "side"))
        if bid not in block.branches:
            raise ParseError(lineno, f"unknown branch {bid}")
        if sid not in block.sectors:
            raise ParseError(lineno, f"unknown sector {sid}")
        if orbit >= block.branches[bid].orbit_count:
            raise ParseError(lineno, f"orbit out of range: {bid} has "
                                     f"{block.branches[bid].orbit_count} orbits")
        if circle >= block.sectors[sid].sig.boundary_count:
            raise ParseError(lineno, f"circle out of range: {sid} has "
                                     f"{block.sectors[sid].sig.boundary_count} circles")
        if (bid, orbit) in block.orbits_used:
            raise ParseError(lineno, f"orbit reused: {bid}.{orbit}")
        if (sid, circle) in block.circles_used:
            raise ParseError(lineno, f"circle reused: {sid}.{circle}")
        block.orbits_used.add((bid, orbit))
        block.circles_used.add((sid, circle))
        block.attachments.append(Attachment(bid, orbit, sid, circle,
                                            _sign(opts.get("sign"), lineno, "sign"),
                                            _sign(opts.get("side"), lineno, "side")))
    elif head == "assume":
        block.assumptions.append(_assume(toks, lineno))
    else:
        raise ParseError(lineno, f"unknown declaration {head!r}")


def parse(text: str) -> MbsDocument:
    doc = MbsDocument()
    block = None
    for lineno, line in enumerate(text.splitlines(), 1):
        toks = _tokens(line, lineno)
        if not toks:
            continue
        if toks[0] == "surface":
            if len(toks) != 2:
                raise ParseError(lineno, "expected: surface <name>")
            if block is not None:
                doc.surfaces[block.name] = block.finish()
            name = _ident(toks[1], lineno, "surface name")
            if name in doc.surfaces:
                raise ParseError(lineno, f"surface {name} declared twice")
            block = _Block(name, lineno)
        elif toks[0] == "fact":
            if len(toks) != 5 or toks[2] != "le" or not toks[4].startswith("cert="):
                raise ParseError(lineno, "expected: fact <name1> le <name2> cert=<path>")
            doc.facts.append(FactDecl(_ident(toks[1], lineno), _ident(toks[3], lineno),
                                      toks[4][len("cert="):]))
        elif block is None:
            raise ParseError(lineno, f"{toks[0]!r} outside a surface block")
        else:
            _surface_line(block, toks, lineno)
    if block is not None:
        doc.surfaces[block.name] = block.finish()
    return doc


def _sign_opts(a):
    out = ""
    if a.sign != 1:
        out += " sign=-"
    if a.side != 1:
        out += " side=-"
    return out


def serialize_surface(name: str, X: MultibranchedSurface) -> str:
    lines = [f"surface {name}"]
    lines += [f"branch {b.id} degree={b.degree} shift={b.shift}" for b in X.branches]
    for e in X.sectors:
        s = e.sig
        if s.orientable:
            lines.append(f"sector {e.id} orientable genus={s.genus} boundaries={s.boundary_count}")
        else:
            lines.append(f"sector {e.id} nonorientable crosscaps={s.genus} boundaries={s.boundary_count}")
    lines += [f"attach {a.branch}.{a.orbit} {a.sector}.{a.circle}{_sign_opts(a)}"
              for a in X.attachments]
    lines += [f"assume {a.kind} {_quote(a.provenance)}"
              for a in sorted(X.assumptions, key=lambda r: (r.kind, r.provenance))]
    return "\n".join(lines) + "\n"


def serialize(doc: MbsDocument) -> str:
    parts = [serialize_surface(name, X) for name, X in doc.surfaces.items()]
    if doc.facts:
        parts.append("".join(f"fact {f.lower} le {f.upper} cert={f.cert}\n" for f in doc.facts))
    return "\n".join(parts)


def read_document(path) -> MbsDocument:
    return parse(Path(path).read_text(encoding="utf-8"))


def load_facts(doc: MbsDocument, base) -> list[OrderFact]:
    """Order facts of ``doc`` with certificates read relative to ``base``."""
    base = Path(base)
    return [OrderFact(f.lower, f.upper, "le", "certificate",
                      parse_certificate((base / f.cert).read_text(encoding="utf-8")))
            for f in doc.facts]


# ---------------------------------------------------------------- certificates

def _end(tok, lineno):
    sign = side = 1
    if tok.startswith("@"):
        return ArcEnd(orbit=_int(tok[1:], lineno, "orbit"))
    ref, _, bits = tok.partition(":")
    yb, yo = _ref(ref, lineno)
    if bits:
        if len(bits) != 2:
            raise ParseError(lineno, f"end bits must be two of +/-, got {bits!r}")
        sign, side = (_sign(c, lineno, "end bit") for c in bits)
    return ArcEnd(ybranch=yb, yorbit=yo, sign=sign, side=side)


def parse_certificate(text: str) -> Certificate:
    copies, arcs, cones, bmap, gluing, assumptions = [], [], [], [], [], []
    started = False
    for lineno, line in enumerate(text.splitlines(), 1):
        toks = _tokens(line, lineno)
        if not toks:
            continue
        head = toks[0]
        if head == "certificate" and len(toks) == 1 and not started:
            started = True
            continue
        if not started:
            raise ParseError(lineno, "certificate files start with 'certificate'")
        if head == "map" and len(toks) == 3:
            bmap.append((_ident(toks[1], lineno), _ident(toks[2], lineno)))
        elif head == "copy" and len(toks) >= 3:
            opts = _options(toks[3:], lineno, ("level", "ysector"))
            if "ysector" not in opts:
                raise ParseError(lineno, "copy needs ysector=")
            copies.append(SectorCopy(_ident(toks[1], lineno), _ident(toks[2], lineno),
                                     _int(opts.get("level"), lineno, "level"),
                                     _ident(opts["ysector"], lineno)))
        elif head == "arc" and len(toks) >= 3:
            opts = _options(toks[3:], lineno, ("ysector", "kind", "core", "ends"))
            if "ysector" not in opts or "ends" not in opts:
                raise ParseError(lineno, "arc needs ysector= and ends=")
            if opts.get("core", "no") not in ("yes", "no"):
                raise ParseError(lineno, "core must be yes or no")
            arcs.append(BranchArc(_ident(toks[1], lineno), _ident(toks[2], lineno),
                                  tuple(_end(t, lineno) for t in opts["ends"].split(",")),
                                  _ident(opts["ysector"], lineno), opts.get("kind", "annulus"),
                                  opts.get("core", "no") == "yes"))
        elif head == "cone" and len(toks) >= 4:
            opts = _options(toks[4:], lineno, ("fiber",))
            cones.append(BranchCone(_ident(toks[1], lineno), _ident(toks[2], lineno),
                                    _ident(toks[3], lineno), opts.get("fiber", "regular")))
        elif head == "glue" and len(toks) == 3:
            gluing.append((_ref(toks[1], lineno), _ref(toks[2], lineno)))
        elif head == "assume":
            assumptions.append(_assume(toks, lineno))
        else:
            raise ParseError(lineno, f"unknown or malformed declaration {head!r}")
    if not started:
        raise ParseError(1, "empty certificate")
    return Certificate(tuple(copies), tuple(arcs), tuple(cones), tuple(bmap), tuple(gluing),
                       tuple(assumptions))


def _fmt_end(e):
    if e.on_boundary:
        return f"@{e.orbit}"
    bits = "" if (e.sign, e.side) == (1, 1) else ":" + "".join("+" if v == 1 else "-"
                                                               for v in (e.sign, e.side))
    return f"{e.ybranch}.{e.yorbit}{bits}"


def serialize_certificate(cert: Certificate) -> str:
    lines = ["certificate"]
    lines += [f"map {yb} {xb}" for yb, xb in cert.branch_map]
    lines += [f"copy {c.pid} {c.xsector} level={c.level} ysector={c.ysector}" for c in cert.copies]
    lines += [f"arc {a.pid} {a.xbranch} ysector={a.ysector} kind={a.kind} "
              f"core={'yes' if a.encircles_core else 'no'} ends={','.join(_fmt_end(e) for e in a.ends)}"
              for a in cert.arcs]
    lines += [f"cone {k.pid} {k.xbranch} {k.ybranch} fiber={k.fiber}" for k in cert.cones]
    lines += [f"glue {cp}.{ci} {ap}.{ej}" for (cp, ci), (ap, ej) in cert.gluing]
    lines += [f"assume {a.kind} {_quote(a.provenance)}" for a in cert.assumptions]
    return "\n".join(lines) + "\n"
