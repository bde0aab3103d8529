"""IX-, XI- and IH-moves, maximal spreading, bounded equivalence search and
formal compression/tubing.

Moves are pure: they take a surface and return a freshly built one.  Branch
contents are handled as cyclic lists of *entries* ``(sector, circle, sign,
side)`` indexed by orbit.

Conventions for collapsing an annulus ``A`` with ends ``a`` (on ``l1``) and
``b`` (on ``l2``): the branch directions of ``l1`` and ``l2`` agree through
``A`` exactly when ``sign(a) == -sign(b)``.  When they disagree the sheets
taken over from the other branch are listed in reverse meridian order with
sign and side flipped.  XI-moves always create annuli with ends
``(+, +)`` / ``(-, -)`` so that the inverse collapse needs no reversal.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import (InvalidSpec, InvalidSplit, MbsError, NonOrientableUnsupported,
                     NotApplicable, NotMaximallySpread, ValidationError)
from .invariants import classify_branch, classify_sector
from .model import (Attachment, BranchModel, MultibranchedSurface, Sector, SurfaceSig,
                    build, canonical_code)

IX_KINDS = ("ix_normal_annulus", "ix_quasi_normal", "ix_mobius")
XI_KINDS = ("xi_split", "xi_extract", "xi_unmobius")


@dataclass(frozen=True)
class MoveDescriptor:
    kind: str
    target: str
    part: tuple[int, ...] = ()
    rest: tuple[int, ...] = ()

    def __str__(self):
        if self.kind in IX_KINDS or self.kind == "ix":
            return f"ix:{self.target}"
        if self.kind == "xi_split":
            return f"xi-split:{self.target}:{_fmt_arc(self.part)}|{_fmt_arc(self.rest)}"
        if self.kind == "xi_extract":
            return f"xi-extract:{self.target}:{_fmt_arc(self.part)}"
        return f"xi-unmobius:{self.target}"


def _fmt_arc(arc):
    return str(arc[0]) if len(arc) == 1 else f"{arc[0]}-{arc[-1]}"


def _parse_arc(text, modulus):
    m = re.fullmatch(r"(\d+)(?:-(\d+))?", text)
    if not m:
        raise InvalidSpec(f"bad arc {text!r}")
    first = int(m.group(1))
    last = int(m.group(2)) if m.group(2) is not None else first
    if first >= modulus or last >= modulus:
        raise InvalidSpec(f"arc {text!r} leaves 0..{modulus - 1}")
    return tuple((first + i) % modulus for i in range((last - first) % modulus + 1))


def parse_descriptor(text: str, X: MultibranchedSurface) -> MoveDescriptor:
    """Parse the compact syntax ``ix:A``, ``xi-split:l1:0-1|2-3``,
    ``xi-extract:l2:0-1`` or ``xi-unmobius:l2`` against surface ``X``."""
    head, _, body = text.strip().partition(":")
    try:
        if head == "ix":
            kind = {"normal_annulus": "ix_normal_annulus",
                    "quasi_normal_annulus": "ix_quasi_normal",
                    "normal_mobius": "ix_mobius"}.get(classify_sector(X, body).kind)
            if kind is None:
                raise NotApplicable(f"sector {body} admits no IX-move")
            return MoveDescriptor(kind, body)
        if head == "xi-unmobius":
            X.branch(body)
            return MoveDescriptor("xi_unmobius", body)
        target, _, arcs = body.partition(":")
        b = X.branch(target)
        if head == "xi-split":
            p, sep, q = arcs.partition("|")
            if not sep:
                raise InvalidSpec("xi-split needs two arcs separated by '|'")
            return MoveDescriptor("xi_split", target, _parse_arc(p, b.degree), _parse_arc(q, b.degree))
        if head == "xi-extract":
            return MoveDescriptor("xi_extract", target, _parse_arc(arcs, b.orbit_count))
    except KeyError as exc:
        raise InvalidSpec(f"unknown id in {text!r}: {exc}") from None
    raise InvalidSpec(f"unknown move syntax {text!r}")


# ---------------------------------------------------------------- working copy

class _Work:
    def __init__(self, X: MultibranchedSurface):
        self.models = {b.id: [b.degree, b.shift] for b in X.branches}
        self.entries = {b.id: [(a.sector, a.circle, a.sign, a.side) for a in X.entries(b.id)]
                        for b in X.branches}
        self.sectors = {e.id: e.sig for e in X.sectors}
        self.assumptions = X.assumptions

    def fresh(self, base):
        used = set(self.models) | set(self.sectors)
        if base not in used:
            return base
        n = 2
        while f"{base}{n}" in used:
            n += 1
        return f"{base}{n}"

    def drop_branch(self, bid):
        del self.models[bid]
        del self.entries[bid]

    def finish(self) -> MultibranchedSurface:
        branches = [BranchModel(bid, d, s) for bid, (d, s) in self.models.items()]
        attachments = [Attachment(bid, o, sec, circ, sign, side)
                       for bid, ents in self.entries.items()
                       for o, (sec, circ, sign, side) in enumerate(ents)]
        sectors = [Sector(sid, sig) for sid, sig in self.sectors.items()]
        return build(branches, sectors, attachments, self.assumptions)


def _flip(entry):
    sec, circ, sign, side = entry
    return (sec, circ, -sign, -side)


def _after(ents, pos):
    """Entries following ``pos`` cyclically, excluding it."""
    d = len(ents)
    return [ents[(pos + j) % d] for j in range(1, d)]


# ---------------------------------------------------------------- IX-moves

def applicable_ix(X: MultibranchedSurface) -> list[MoveDescriptor]:
    found = []
    for e in X.sectors:
        kind = classify_sector(X, e.id).kind
        if kind == "normal_annulus":
            a, b = X.circles(e.id)
            if a.branch == b.branch:
                continue
            if X.branch(a.branch).degree + X.branch(b.branch).degree - 2 < 1:
                continue
            found.append(MoveDescriptor("ix_normal_annulus", e.id))
        elif kind == "quasi_normal_annulus":
            a, b = sorted(X.circles(e.id), key=lambda t: X.branch(t.branch).wrap)
            k_new = X.branch(b.branch).orbit_count - 1 + X.branch(a.branch).degree - 1
            if k_new >= 1:
                found.append(MoveDescriptor("ix_quasi_normal", e.id))
        elif kind == "normal_mobius":
            (a,) = X.circles(e.id)
            if X.branch(a.branch).degree >= 2:
                found.append(MoveDescriptor("ix_mobius", e.id))
    return found


def apply_ix(X: MultibranchedSurface, m: MoveDescriptor) -> MultibranchedSurface:
    if m.kind == "ix":
        m = parse_descriptor(str(m), X)
    if m not in applicable_ix(X):
        raise NotApplicable(f"{m} is not an applicable IX-move")
    W = _Work(X)
    sector = m.target
    if m.kind == "ix_mobius":
        (a,) = X.circles(sector)
        block = _after(W.entries[a.branch], a.orbit)
        d = len(block)
        W.models[a.branch] = [2 * d, d]
        W.entries[a.branch] = block
    else:
        a, b = sorted(X.circles(sector), key=lambda t: t.circle)
        if m.kind == "ix_normal_annulus":
            # the merged branch keeps the id of the branch carrying circle 0
            tail = _after(W.entries[b.branch], b.orbit)
            if a.sign == b.sign:
                tail = [_flip(x) for x in reversed(tail)]
            merged = _after(W.entries[a.branch], a.orbit) + tail
            W.drop_branch(b.branch)
            W.models[a.branch] = [len(merged), 0]
            W.entries[a.branch] = merged
        else:
            if X.branch(a.branch).wrap != 1:
                a, b = b, a
            block = _after(W.entries[a.branch], a.orbit)
            if a.sign == b.sign:
                block = [_flip(x) for x in reversed(block)]
            l2 = X.branch(b.branch)
            ents = W.entries[b.branch]
            new = ents[:b.orbit] + block + ents[b.orbit + 1:]
            k = len(new)
            W.drop_branch(a.branch)
            W.models[b.branch] = [l2.wrap * k, (k * l2.twist) % (l2.wrap * k)]
            W.entries[b.branch] = new
    del W.sectors[sector]
    return W.finish()


# ---------------------------------------------------------------- XI-moves

def _xi_for_branch(X: MultibranchedSurface, bid: str) -> list[MoveDescriptor]:
    b = X.branch(bid)
    d, k, w = b.degree, b.orbit_count, b.wrap
    found = []
    if w == 1 and d >= 4:
        for c1 in range(d):
            for c2 in range(c1 + 2, d):
                if d - (c2 - c1) < 2:
                    continue
                part = tuple(range(c1, c2))
                rest = tuple(i % d for i in range(c2, c1 + d))
                found.append(MoveDescriptor("xi_split", bid, part, rest))
    if w >= 3 and k >= 2:
        # at w = 2 only the Moebius route is generated
        for size in range(2, k + 1):
            for start in range(k):
                found.append(MoveDescriptor("xi_extract", bid,
                                            tuple((start + i) % k for i in range(size))))
    if w == 2 and k >= 2:
        found.append(MoveDescriptor("xi_unmobius", bid))
    return found


def applicable_xi(X: MultibranchedSurface) -> list[MoveDescriptor]:
    return [m for b in X.branches for m in _xi_for_branch(X, b.id)]


def _is_arc(idx, modulus):
    return all((idx[i] + 1) % modulus == idx[i + 1] for i in range(len(idx) - 1))


def _check_xi(X, m):
    b = X.branch(m.target)
    if m.kind == "xi_split":
        d = b.degree
        ok = (b.wrap == 1 and d >= 4 and len(m.part) >= 2 and len(m.rest) >= 2
              and _is_arc(m.part, d) and _is_arc(m.rest, d)
              and sorted(m.part + m.rest) == list(range(d)))
    elif m.kind == "xi_extract":
        k = b.orbit_count
        ok = (b.wrap >= 3 and k >= 2 and 2 <= len(m.part) <= k and _is_arc(m.part, k)
              and len(set(m.part)) == len(m.part))
    elif m.kind == "xi_unmobius":
        ok = b.wrap == 2 and b.orbit_count >= 2
    else:
        ok = False
    if not ok:
        raise NotApplicable(f"{m} is not an applicable XI-move")


def apply_xi(X: MultibranchedSurface, m: MoveDescriptor) -> MultibranchedSurface:
    _check_xi(X, m)
    W = _Work(X)
    bid = m.target
    b = X.branch(bid)
    ents = W.entries[bid]
    if m.kind == "xi_split":
        other = W.fresh(bid + "q")
        W.models[other] = [0, 0]
        ann = W.fresh(bid + "n")
        W.sectors[ann] = SurfaceSig(True, 0, 2)
        p = [ents[i] for i in m.part] + [(ann, 0, 1, 1)]
        q = [ents[i] for i in m.rest] + [(ann, 1, -1, -1)]
        W.models[bid] = [len(p), 0]
        W.entries[bid] = p
        W.models[other] = [len(q), 0]
        W.entries[other] = q
    elif m.kind == "xi_extract":
        start, size = m.part[0], len(m.part)
        seq = ents[start:] + ents[:start]
        ann = W.fresh(bid + "n")
        W.sectors[ann] = SurfaceSig(True, 0, 2)
        new = W.fresh(bid + "p")
        W.models[new] = [size + 1, 0]
        W.entries[new] = seq[:size] + [(ann, 0, 1, 1)]
        residual = [(ann, 1, -1, -1)] + seq[size:]
        k = len(residual)
        W.models[bid] = [b.wrap * k, (k * b.twist) % (b.wrap * k)]
        W.entries[bid] = residual
    else:
        mob = W.fresh(bid + "m")
        W.sectors[mob] = SurfaceSig(False, 1, 1)
        W.entries[bid] = ents + [(mob, 0, 1, 1)]
        W.models[bid] = [len(ents) + 1, 0]
    return W.finish()


def apply_move(X: MultibranchedSurface, m: MoveDescriptor) -> MultibranchedSurface:
    if m.kind in XI_KINDS:
        return apply_xi(X, m)
    return apply_ix(X, m)


# ---------------------------------------------------------------- spreading

def _spreadable_with_move(X):
    return sorted(b.id for b in X.branches
                  if classify_branch(X, b.id).spreadable and _xi_for_branch(X, b.id))


def is_maximally_spread(X: MultibranchedSurface) -> bool:
    return not any(classify_branch(X, b.id).spreadable for b in X.branches)


def _deterministic_xi(X, bid):
    b = X.branch(bid)
    if b.wrap == 1:
        return MoveDescriptor("xi_split", bid, (0, 1), tuple(range(2, b.degree)))
    if b.wrap == 2:
        return MoveDescriptor("xi_unmobius", bid)
    return MoveDescriptor("xi_extract", bid, tuple(range(b.orbit_count)))


def spread_maximally(X: MultibranchedSurface, strategy: str = "deterministic",
                     record: list | None = None) -> MultibranchedSurface:
    """Apply XI-moves until no branch that admits one is spreadable.

    Normal degree-2 branches are spreadable by definition but admit no
    XI-move; they are left in place.
    """
    if strategy != "deterministic":
        raise ValueError(f"unknown strategy {strategy!r}")
    while True:
        todo = _spreadable_with_move(X)
        if not todo:
            return X
        m = _deterministic_xi(X, todo[0])
        X = apply_xi(X, m)
        if record is not None:
            record.append(m)


def all_spreadings(X: MultibranchedSurface) -> list[tuple[MultibranchedSurface, list]]:
    """Every maximal spreading reachable by XI choices, one per isomorphism
    class, each with the XI descriptors producing it."""
    results, seen = {}, set()
    stack = [(X, [])]
    while stack:
        Z, path = stack.pop()
        c = canonical_code(Z)
        if c in seen:
            continue
        seen.add(c)
        todo = _spreadable_with_move(Z)
        if not todo:
            results[c] = (Z, path)
            continue
        for m in reversed(_xi_for_branch(Z, todo[0])):
            stack.append((apply_xi(Z, m), path + [m]))
    return [results[c] for c in sorted(results)]


def _require_spread(*surfaces):
    for X in surfaces:
        if not is_maximally_spread(X):
            raise NotMaximallySpread("surface has a spreadable branch")


def ih_moves(X: MultibranchedSurface) -> list[tuple[MultibranchedSurface, list]]:
    """IH-neighbours with the primitive moves (an IX then XIs) reaching them."""
    _require_spread(X)
    out = {}
    for m in applicable_ix(X):
        Y = apply_ix(X, m)
        for Z, path in all_spreadings(Y):
            out.setdefault(canonical_code(Z), (Z, [m] + path))
    return [out[c] for c in sorted(out)]


def ih_neighbors(X: MultibranchedSurface) -> list[MultibranchedSurface]:
    return [Z for Z, _ in ih_moves(X)]


# ---------------------------------------------------------------- equivalence

@dataclass
class MovePath:
    steps: list = field(default_factory=list)  # (MoveDescriptor, code after the step)

    def to_text(self) -> str:
        return "".join(f"{m}\n" for m, _ in self.steps)

    def __len__(self):
        return len(self.steps)


def replay(X: MultibranchedSurface, lines) -> MultibranchedSurface:
    """Apply a text move log (one descriptor per line, ``#`` comments)."""
    if isinstance(lines, str):
        lines = lines.splitlines()
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if line:
            X = apply_move(X, parse_descriptor(line, X))
    return X


@dataclass
class EquivalenceResult:
    equivalent: bool
    depth: int
    path: MovePath | None = None
    ih_steps: int = 0

    @property
    def verdict(self) -> str:
        return "yes" if self.equivalent else f"no-within-depth {self.depth}"


def _extend(path, Z, moves):
    for m in moves:
        Z = apply_move(Z, m)
        path.steps.append((m, canonical_code(Z)))
    return Z


def _walk_to(W, target, limit=3):
    """Shortest run of IH-moves from ``W`` to a surface with code ``target``."""
    start = canonical_code(W)
    if start == target:
        return W, []
    prev = {start: None}
    layer = [(W, start)]
    for _ in range(limit):
        nxt = []
        for Z, c in layer:
            for Z2, moves in ih_moves(Z):
                c2 = canonical_code(Z2)
                if c2 in prev:
                    continue
                prev[c2] = (c, moves)
                if c2 == target:
                    chain = []
                    while prev[c2] is not None:
                        c2, mv = prev[c2]
                        chain.append(mv)
                    return Z2, list(reversed(chain))
                nxt.append((Z2, c2))
        layer = nxt
    return None, None


def equivalent(X: MultibranchedSurface, Y: MultibranchedSurface, depth: int) -> EquivalenceResult:
    """Bidirectional breadth-first search over IH-moves, memoised by code.

    A positive answer carries a replayable path from ``X`` to a surface
    isomorphic to ``Y``; a negative one only bounds the search.
    """
    _require_spread(X, Y)
    cx, cy = canonical_code(X), canonical_code(Y)
    if cx == cy:
        return EquivalenceResult(True, depth, MovePath())
    sides = [{cx: (X, None, None)}, {cy: (Y, None, None)}]
    fronts = [[cx], [cy]]
    used = [0, 0]
    meet = None
    while used[0] + used[1] < depth and meet is None and (fronts[0] or fronts[1]):
        i = 0 if (len(fronts[0]) <= len(fronts[1]) and fronts[0]) or not fronts[1] else 1
        here, there = sides[i], sides[1 - i]
        new = []
        for c in fronts[i]:
            for Z, moves in ih_moves(here[c][0]):
                cz = canonical_code(Z)
                if cz in here:
                    continue
                here[cz] = (Z, c, moves)
                new.append(cz)
                if cz in there:
                    meet = cz
                    break
            if meet:
                break
        fronts[i] = new
        used[i] += 1
    if meet is None:
        return EquivalenceResult(False, depth)

    fchain = []
    c = meet
    while sides[0][c][1] is not None:
        fchain.append(sides[0][c][2])
        c = sides[0][c][1]
    path = MovePath()
    W = X
    for moves in reversed(fchain):
        W = _extend(path, W, moves)
    c = meet
    steps = used[0]
    while sides[1][c][1] is not None:
        parent = sides[1][c][1]
        W2, chain = _walk_to(W, parent)
        if W2 is None:
            return _forward_only(X, Y, 2 * depth)
        for moves in chain:
            W = _extend(path, W, moves)
        c = parent
    return EquivalenceResult(True, depth, path, steps)


def _forward_only(X, Y, limit):
    W, chain = _walk_to(X, canonical_code(Y), limit)
    if W is None:
        raise MbsError("equivalence path could not be reconstructed")
    path = MovePath()
    Z = X
    for moves in chain:
        Z = _extend(path, Z, moves)
    return EquivalenceResult(True, limit, path)


# ---------------------------------------------------------------- compression

@dataclass(frozen=True)
class Separating:
    genus_split: tuple[int, int]
    circles: tuple[tuple[int, ...], tuple[int, ...]]


NONSEPARATING = "nonseparating"


@dataclass(frozen=True)
class FormalSurface:
    """A surface-like complex that may carry boundary circles not attached to
    any branch (``free_circles``) or closed sectors; see :meth:`to_surface`."""

    branches: tuple
    sectors: tuple
    attachments: tuple
    free_circles: tuple = ()
    assumptions: frozenset = frozenset()

    @property
    def has_free_circles(self) -> bool:
        return bool(self.free_circles)

    def to_surface(self) -> MultibranchedSurface:
        if self.free_circles:
            raise ValidationError("UnattachedCircle", "complex has free circles",
                                  ", ".join(f"{s}.{c}" for s, c in self.free_circles))
        return build(self.branches, self.sectors, self.attachments, self.assumptions)

    @classmethod
    def of(cls, X: MultibranchedSurface) -> "FormalSurface":
        return cls(X.branches, X.sectors, X.attachments, (), X.assumptions)


def _as_formal(X):
    return X if isinstance(X, FormalSurface) else FormalSurface.of(X)


def _fresh_id(taken, base):
    if base not in taken:
        return base
    n = 2
    while f"{base}{n}" in taken:
        n += 1
    return f"{base}{n}"


def compress_sector(X, sector: str, curve_spec, cap: bool = False) -> FormalSurface:
    """Formal compression of an orientable sector along a curve class.

    ``curve_spec`` is ``"nonseparating"`` or :class:`Separating`.  Cutting
    along a separating curve leaves one new circle on each side; they stay
    free unless ``cap`` pastes the compressing disks on.
    """
    F = _as_formal(X)
    sectors = {e.id: e for e in F.sectors}
    if sector not in sectors:
        from .errors import UnknownSector
        raise UnknownSector(sector)
    sig = sectors[sector].sig
    if not sig.orientable:
        raise NonOrientableUnsupported(f"sector {sector} is non-orientable")
    if sig.genus == 0 and sig.boundary_count <= 2:
        raise InvalidSplit(f"sector {sector} carries no compressible curve class")
    if curve_spec == NONSEPARATING:
        if sig.genus < 1:
            raise InvalidSplit("a non-separating curve needs genus at least one")
        new = tuple(Sector(e.id, SurfaceSig(True, sig.genus - 1, sig.boundary_count))
                    if e.id == sector else e for e in F.sectors)
        return FormalSurface(F.branches, new, F.attachments, F.free_circles, F.assumptions)
    if not isinstance(curve_spec, Separating):
        raise InvalidSplit(f"unknown curve spec {curve_spec!r}")
    g1, g2 = curve_spec.genus_split
    c1, c2 = (tuple(c) for c in curve_spec.circles)
    if g1 < 0 or g2 < 0 or g1 + g2 != sig.genus:
        raise InvalidSplit("genus split does not add up")
    if sorted(c1 + c2) != list(range(sig.boundary_count)):
        raise InvalidSplit("circle bipartition does not cover the boundary")
    if (g1 == 0 and not c1) or (g2 == 0 and not c2):
        raise InvalidSplit("one side would be a disk")
    taken = {e.id for e in F.sectors} | {b.id for b in F.branches}
    ids = [_fresh_id(taken, sector + "_1")]
    taken.add(ids[0])
    ids.append(_fresh_id(taken, sector + "_2"))
    extra = 0 if cap else 1
    renumber = {}
    for side, circles in enumerate((c1, c2)):
        for j, c in enumerate(circles):
            renumber[c] = (ids[side], j)
    out_sectors = []
    for e in F.sectors:
        if e.id == sector:
            out_sectors.append(Sector(ids[0], SurfaceSig(True, g1, len(c1) + extra)))
            out_sectors.append(Sector(ids[1], SurfaceSig(True, g2, len(c2) + extra)))
        else:
            out_sectors.append(e)
    atts = []
    for a in F.attachments:
        if a.sector == sector:
            sid, c = renumber[a.circle]
            a = Attachment(a.branch, a.orbit, sid, c, a.sign, a.side)
        atts.append(a)
    free = tuple(F.free_circles)
    if not cap:
        free += ((ids[0], len(c1)), (ids[1], len(c2)))
    return FormalSurface(F.branches, tuple(out_sectors), tuple(atts), free, F.assumptions)


@dataclass(frozen=True)
class TubeSpec:
    """``kind`` is ``nonseparating`` (one sector) or ``separating`` (two
    sectors joined along their free circles, or whole if none are free)."""

    kind: str
    sectors: tuple[str, ...]
    merged_id: str | None = None


def tube(X, spec: TubeSpec) -> FormalSurface:
    F = _as_formal(X)
    sectors = {e.id: e for e in F.sectors}
    if any(s not in sectors for s in spec.sectors):
        raise InvalidSpec(f"unknown sector in {spec.sectors}")
    if spec.kind == NONSEPARATING:
        if len(spec.sectors) != 1:
            raise InvalidSpec("a non-separating tube acts on one sector")
        (sid,) = spec.sectors
        sig = sectors[sid].sig
        if not sig.orientable:
            raise InvalidSpec("tubing is defined for orientable sectors only")
        new = tuple(Sector(e.id, SurfaceSig(True, sig.genus + 1, sig.boundary_count))
                    if e.id == sid else e for e in F.sectors)
        return FormalSurface(F.branches, new, F.attachments, F.free_circles, F.assumptions)
    if spec.kind != "separating" or len(spec.sectors) != 2 or spec.sectors[0] == spec.sectors[1]:
        raise InvalidSpec("a separating tube joins two distinct sectors")
    s1, s2 = spec.sectors
    e1, e2 = sectors[s1].sig, sectors[s2].sig
    if not (e1.orientable and e2.orientable):
        raise InvalidSpec("tubing is defined for orientable sectors only")
    free = {s: [c for t, c in F.free_circles if t == s] for s in (s1, s2)}
    joined = all(free[s] for s in (s1, s2))
    drop = {s: (free[s][-1] if joined else None) for s in (s1, s2)}
    if joined and any(drop[s] != sectors[s].sig.boundary_count - 1 for s in (s1, s2)):
        raise InvalidSpec("free circle to tube along must be the last circle of its sector")
    merged = spec.merged_id or s1.rsplit("_", 1)[0]
    taken = ({e.id for e in F.sectors} - {s1, s2}) | {b.id for b in F.branches}
    if merged in taken:
        raise InvalidSpec(f"id {merged} already in use")
    b1 = e1.boundary_count - (1 if joined else 0)
    b2 = e2.boundary_count - (1 if joined else 0)
    sig = SurfaceSig(True, e1.genus + e2.genus, b1 + b2)
    out = []
    for e in F.sectors:
        if e.id == s1:
            out.append(Sector(merged, sig))
        elif e.id != s2:
            out.append(e)
    atts = []
    for a in F.attachments:
        if a.sector == s1:
            a = Attachment(a.branch, a.orbit, merged, a.circle, a.sign, a.side)
        elif a.sector == s2:
            a = Attachment(a.branch, a.orbit, merged, b1 + a.circle, a.sign, a.side)
        atts.append(a)
    rest_free = tuple((s, c) for s, c in F.free_circles
                      if not (joined and s in (s1, s2) and c == drop[s]))
    return FormalSurface(F.branches, tuple(out), tuple(atts), rest_free, F.assumptions)
