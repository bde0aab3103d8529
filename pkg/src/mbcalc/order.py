"""Necessary conditions and certificates for the order ``X <= Y``, the star
(Seifert) model, minimality reports and Hasse diagrams.

``X <= Y`` means ``Y`` sits in a regular neighbourhood of ``X`` with the
branches of ``Y`` inside the branch neighbourhoods of ``X``.  A certificate
describes ``Y`` in standard position: parallel copies of sectors of ``X``,
annular (or Moebius) pieces in the solid tori around the branches of ``X``,
and the branches of ``Y`` as fibers of those solid tori.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from .errors import FactRejected, MalformedCertificate, PosetViolation, ValidationError
from .model import (AssumptionRecord, Attachment, BranchModel, MultibranchedSurface, Sector,
                    SurfaceSig, build, canonical_code, euler_sectors, is_isomorphic)


# ---------------------------------------------------------------- certificates

@dataclass(frozen=True)
class SectorCopy:
    pid: str
    xsector: str
    level: int
    ysector: str


@dataclass(frozen=True)
class ArcEnd:
    """An end of a branch piece: either on the characteristic annulus of an
    orbit of the X-branch (``orbit``) or on an orbit of a Y-branch."""

    orbit: int | None = None
    ybranch: str | None = None
    yorbit: int | None = None
    sign: int = 1
    side: int = 1

    @property
    def on_boundary(self) -> bool:
        return self.ybranch is None


@dataclass(frozen=True)
class BranchArc:
    pid: str
    xbranch: str
    ends: tuple[ArcEnd, ...]
    ysector: str
    kind: str = "annulus"  # annulus | mobius
    encircles_core: bool = False


@dataclass(frozen=True)
class BranchCone:
    pid: str
    xbranch: str
    ybranch: str
    fiber: str = "regular"  # regular | core


@dataclass(frozen=True)
class Certificate:
    copies: tuple[SectorCopy, ...] = ()
    arcs: tuple[BranchArc, ...] = ()
    cones: tuple[BranchCone, ...] = ()
    branch_map: tuple[tuple[str, str], ...] = ()  # (Y-branch, X-branch)
    # ((copy pid, circle), (arc pid, end index))
    gluing: tuple[tuple[tuple[str, int], tuple[str, int]], ...] = ()
    assumptions: tuple[AssumptionRecord, ...] = ()

    def has_assumption(self, kind: str) -> bool:
        return any(a.kind == kind for a in self.assumptions)


@dataclass(frozen=True)
class Verified:
    condition2: bool
    assumptions: tuple[AssumptionRecord, ...] = ()
    ok: bool = field(default=True, init=False)

    def __str__(self):
        return "verified"


@dataclass(frozen=True)
class Rejected:
    reason: str
    ok: bool = field(default=False, init=False)

    def __str__(self):
        return f"rejected({self.reason})"


def _index_pieces(cert):
    seen = {}
    for p in (*cert.copies, *cert.arcs, *cert.cones):
        if p.pid in seen:
            raise MalformedCertificate(f"piece id {p.pid} used twice")
        seen[p.pid] = p
    return seen


def _check_schema(X, cert):
    for c in cert.copies:
        if not X.has_sector(c.xsector):
            raise MalformedCertificate(f"copy {c.pid}: unknown sector {c.xsector}")
    for a in cert.arcs:
        if not X.has_branch(a.xbranch):
            raise MalformedCertificate(f"arc {a.pid}: unknown branch {a.xbranch}")
        if a.kind not in ("annulus", "mobius"):
            raise MalformedCertificate(f"arc {a.pid}: unknown kind {a.kind}")
        if len(a.ends) != (2 if a.kind == "annulus" else 1):
            raise MalformedCertificate(f"arc {a.pid}: wrong number of ends")
        for e in a.ends:
            if (e.orbit is None) == (e.ybranch is None):
                raise MalformedCertificate(f"arc {a.pid}: each end needs an orbit or a Y-branch")
            if e.on_boundary and not 0 <= e.orbit < X.branch(a.xbranch).orbit_count:
                raise MalformedCertificate(f"arc {a.pid}: orbit {e.orbit} out of range")
            if not e.on_boundary and e.yorbit is None:
                raise MalformedCertificate(f"arc {a.pid}: Y-branch end without orbit")
    for k in cert.cones:
        if not X.has_branch(k.xbranch):
            raise MalformedCertificate(f"cone {k.pid}: unknown branch {k.xbranch}")
        if k.fiber not in ("regular", "core"):
            raise MalformedCertificate(f"cone {k.pid}: unknown fiber {k.fiber}")


def _cone_model(X, cone, m):
    if cone.fiber == "core":
        b = X.branch(cone.xbranch)
        return BranchModel(cone.ybranch, b.wrap * m, (m * b.twist) % (b.wrap * m))
    return BranchModel(cone.ybranch, m, 0)


def check_certificate(X: MultibranchedSurface, Y: MultibranchedSurface, cert: Certificate):
    """Structural verification of a standard-position certificate.

    The condition that no essential annulus lives in ``N(X) - Y`` is not
    decidable here; it is read from the certificate's assumptions and echoed.
    """
    pieces = _index_pieces(cert)
    _check_schema(X, cert)

    levels = {}
    for c in cert.copies:
        if c.level in levels.setdefault(c.xsector, set()):
            return Rejected("level clash")
        levels[c.xsector].add(c.level)

    for a in cert.arcs:
        bd = [e.orbit for e in a.ends if e.on_boundary]
        if len(bd) != len(set(bd)):
            return Rejected(f"arc {a.pid} returns to its own orbit")
        if a.kind == "mobius" and bd:
            return Rejected(f"Moebius piece {a.pid} must lie on a Y-branch")
        closed = len(bd) == 2 or (len(bd) == 0 and len({e.ybranch for e in a.ends}) == 1
                                  and a.kind == "annulus")
        if closed and not a.encircles_core:
            return Rejected(f"arc {a.pid} is boundary-parallel")

    bmap = dict(cert.branch_map)
    cones = {}
    for k in cert.cones:
        if k.ybranch in cones:
            return Rejected("branch map")
        cones[k.ybranch] = k
    if set(bmap) != set(cones) or any(bmap[yb] != k.xbranch for yb, k in cones.items()):
        return Rejected("branch map")
    for a in cert.arcs:
        for e in a.ends:
            if not e.on_boundary and bmap.get(e.ybranch) != a.xbranch:
                return Rejected("branch map")
    if X.has_assumption("atoroidal_branches") or cert.has_assumption("atoroidal_branches"):
        per_x = {}
        for yb, xb in bmap.items():
            per_x[xb] = per_x.get(xb, 0) + 1
        if any(n > 1 for n in per_x.values()):
            return Rejected("branch map")

    # gluing along characteristic annuli
    want_copy = {(c.pid, i) for c in cert.copies
                 for i in range(X.sector(c.xsector).sig.boundary_count)}
    want_end = {(a.pid, j) for a in cert.arcs for j, e in enumerate(a.ends) if e.on_boundary}
    got_copy, got_end = set(), set()
    for (cp, ci), (ap, ej) in cert.gluing:
        if (cp, ci) not in want_copy or (ap, ej) not in want_end:
            return Rejected(f"gluing refers to unknown circle {cp}.{ci} or end {ap}.{ej}")
        if (cp, ci) in got_copy or (ap, ej) in got_end:
            return Rejected("gluing uses a circle twice")
        got_copy.add((cp, ci))
        got_end.add((ap, ej))
        att = X.at_circle(pieces[cp].xsector, ci)
        arc = pieces[ap]
        if (att.branch, att.orbit) != (arc.xbranch, arc.ends[ej].orbit):
            return Rejected(f"gluing {cp}.{ci} ~ {ap}.{ej} crosses characteristic annuli")
        if pieces[cp].ysector != arc.ysector:
            return Rejected(f"gluing {cp}.{ci} ~ {ap}.{ej} joins different Y-sectors")
    if got_copy != want_copy or got_end != want_end:
        return Rejected("gluing leaves circles unmatched")

    # reassembly
    graph = nx.Graph()
    for p in (*cert.copies, *cert.arcs):
        graph.add_node(p.pid)
    graph.add_edges_from((cp, ap) for (cp, _), (ap, _) in cert.gluing)
    ysectors: dict[str, list] = {}
    for p in (*cert.copies, *cert.arcs):
        ysectors.setdefault(p.ysector, []).append(p)
    for name, members in ysectors.items():
        if not nx.is_connected(graph.subgraph(p.pid for p in members)):
            return Rejected(f"pieces of {name} do not connect")

    ends_on = {yb: 0 for yb in cones}
    for a in cert.arcs:
        for e in a.ends:
            if not e.on_boundary:
                ends_on[e.ybranch] += 1
    branches = [_cone_model(X, k, ends_on[k.ybranch]) for k in cert.cones if ends_on[k.ybranch]]
    sectors, attachments = [], []
    for name, members in ysectors.items():
        chi, orientable, circles = 0, True, 0
        for p in members:
            if isinstance(p, SectorCopy):
                sig = X.sector(p.xsector).sig
                chi += sig.euler
                orientable &= sig.orientable
            else:
                orientable &= p.kind == "annulus"
                for e in p.ends:
                    if not e.on_boundary:
                        attachments.append(Attachment(e.ybranch, e.yorbit, name, circles,
                                                      e.sign, e.side))
                        circles += 1
        rest = 2 - chi - circles
        if orientable and (rest < 0 or rest % 2):
            return Rejected(f"pieces of {name} give no orientable surface")
        if not orientable and rest < 1:
            return Rejected(f"pieces of {name} give no non-orientable surface")
        sectors.append(Sector(name, SurfaceSig(orientable, rest // 2 if orientable else rest, circles)))
    try:
        Z = build(branches, sectors, attachments)
    except ValidationError as exc:
        return Rejected(f"reassembly: {exc}")
    if not is_isomorphic(Z, Y):
        return Rejected("reassembled complex is not isomorphic to Y")
    assumed = tuple(cert.assumptions)
    return Verified(any(a.kind == "order_condition2" for a in assumed), assumed)


# ---------------------------------------------------------------- filters

@dataclass(frozen=True)
class FilterResult:
    passed: bool
    reason: str = ""

    def __str__(self):
        return "pass" if self.passed else f"fail({self.reason})"


def euler_filter(X: MultibranchedSurface, Y: MultibranchedSurface, equality_mode: bool = False,
                 certificate: Certificate | None = None) -> FilterResult:
    """Necessary condition ``chi(E_Y) <= chi(E_X)`` for ``X <= Y``; the
    equality mode also checks the shape a certificate must have at equality."""
    cx, cy = euler_sectors(X), euler_sectors(Y)
    if cy > cx:
        return FilterResult(False, f"chi(E_Y)={cy} > chi(E_X)={cx}")
    if not equality_mode:
        return FilterResult(True)
    if certificate is None:
        return FilterResult(False, "equality mode needs a certificate")
    if cy != cx:
        return FilterResult(False, f"chi(E_Y)={cy} < chi(E_X)={cx}")
    for e in X.sectors:
        if e.sig.is_annulus or e.sig.is_mobius:
            continue
        n = sum(1 for c in certificate.copies if c.xsector == e.id)
        if n != 1:
            return FilterResult(False, f"sector {e.id} has {n} copies")
    if any(a.kind != "annulus" for a in certificate.arcs):
        return FilterResult(False, "Moebius piece in a branch neighbourhood")
    return FilterResult(True)


# ---------------------------------------------------------------- star model

def star_replacement(X: MultibranchedSurface) -> MultibranchedSurface:
    """Replace each sector that is neither an annulus nor a Moebius band by a
    cone over its boundary circles times the circle."""
    taken = {b.id for b in X.branches} | {e.id for e in X.sectors}

    def fresh(base):
        name, n = base, 2
        while name in taken:
            name, n = f"{base}{n}", n + 1
        taken.add(name)
        return name

    branches, sectors, attachments = list(X.branches), [], []
    keep = {}
    for e in X.sectors:
        if e.sig.is_annulus or e.sig.is_mobius:
            sectors.append(e)
            keep[e.id] = True
            continue
        core = fresh(f"{e.id}_c")
        branches.append(BranchModel(core, e.sig.boundary_count, 0))
        for j, a in enumerate(X.circles(e.id)):
            leg = fresh(f"{e.id}_{j}")
            sectors.append(Sector(leg, SurfaceSig(True, 0, 2)))
            attachments.append(Attachment(a.branch, a.orbit, leg, 0, a.sign, a.side))
            attachments.append(Attachment(core, j, leg, 1, 1, 1))
    attachments += [a for a in X.attachments if a.sector in keep]
    return build(branches, sectors, attachments, X.assumptions)


@dataclass(frozen=True)
class MinimalityReport:
    subject: str
    assumptions: tuple[AssumptionRecord, ...]
    verdict: str  # minimal | unknown


def minimality(X: MultibranchedSurface, name: str = "X") -> MinimalityReport:
    used = tuple(sorted((a for a in X.assumptions
                         if a.kind in ("atoroidal_branches", "acylindrical_sectors")),
                        key=lambda a: a.kind))
    both = {a.kind for a in used} == {"atoroidal_branches", "acylindrical_sectors"}
    return MinimalityReport(name, used, "minimal" if both else "unknown")


# ---------------------------------------------------------------- Hasse diagram

@dataclass(frozen=True)
class OrderFact:
    lower: str
    upper: str
    relation: str = "le"  # le | incomparable | equal
    evidence: str = "certificate"  # certificate | citation | filter-only
    certificate: Certificate | None = None
    citation: str = ""


@dataclass
class HasseDiagram:
    classes: dict  # node name -> member names
    graph: nx.DiGraph
    dot: str
    flagged: list = field(default_factory=list)  # facts accepted on citation only

    @property
    def edges(self) -> list[tuple[str, str]]:
        return sorted(self.graph.edges)


def _dot(classes, edges):
    lines = ["digraph hasse {"]
    for node in sorted(classes):
        label = "=".join(sorted(classes[node]))
        lines.append(f'  "{node}" [label="{label}"];')
    for lo, hi in sorted(edges):
        lines.append(f'  "{lo}" -> "{hi}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def hasse(family: dict[str, MultibranchedSurface], facts: list[OrderFact],
          equivalence_depth: int = 2) -> HasseDiagram:
    """Transitive reduction of the verified ``le`` facts on isomorphism
    classes (merged further by ``equal`` facts)."""
    parent = {}
    by_code = {}
    for name in sorted(family):
        code = canonical_code(family[name])
        parent[name] = by_code.setdefault(code, name)

    def find(n):
        while parent[n] != n:
            n = parent[n]
        return n

    def union(a, b):
        ra, rb = sorted((find(a), find(b)))
        parent[rb] = ra

    for f in facts:
        for n in (f.lower, f.upper):
            if n not in family:
                raise FactRejected(f"fact mentions unknown surface {n}")
        if f.relation == "equal":
            union(f.lower, f.upper)

    flagged, relation = [], set()
    for f in facts:
        if f.relation != "le":
            continue
        X, Y = family[f.lower], family[f.upper]
        if not euler_filter(X, Y).passed:
            raise FactRejected(f"{f.lower} le {f.upper} fails the Euler filter")
        if f.certificate is not None:
            verdict = check_certificate(X, Y, f.certificate)
            if not verdict.ok:
                raise FactRejected(f"{f.lower} le {f.upper}: {verdict}")
        elif f.citation:
            flagged.append(f)
        else:
            raise FactRejected(f"{f.lower} le {f.upper} has neither certificate nor citation")
        relation.add((f.lower, f.upper))

    # two-cycles between distinct classes must be equivalences
    for lo, hi in sorted(relation):
        if (hi, lo) in relation and find(lo) != find(hi):
            if not _equivalent_within(family[lo], family[hi], equivalence_depth):
                raise PosetViolation((lo, hi))
            union(lo, hi)

    classes = {}
    for name in family:
        classes.setdefault(find(name), []).append(name)
    graph = nx.DiGraph()
    graph.add_nodes_from(sorted(classes))
    graph.add_edges_from((find(lo), find(hi)) for lo, hi in relation if find(lo) != find(hi))
    if not nx.is_directed_acyclic_graph(graph):
        raise PosetViolation(tuple(nx.find_cycle(graph)[0]))
    reduced = nx.transitive_reduction(graph)
    reduced.add_nodes_from(graph.nodes)
    return HasseDiagram(classes, reduced, _dot(classes, reduced.edges), flagged)


def _equivalent_within(X, Y, depth):
    from .moves import equivalent, is_maximally_spread
    if is_isomorphic(X, Y):
        return True
    if not (is_maximally_spread(X) and is_maximally_spread(Y)):
        return False
    return equivalent(X, Y, depth).equivalent
