"""Core value types for multibranched surfaces and their validation.

A surface is stored as a list of branches, each carrying the local model of
its fibered solid torus neighbourhood (degree ``d`` and meridian shift ``s``),
a list of sectors described by their compact closures, and an attachment
table pairing every branch orbit with exactly one sector boundary circle.

Slots ``0..d-1`` are the sheet endpoints on a meridian circle in increasing
meridian order.  Going once along the branch rotates them by ``s``, so the
orbit of slot ``i`` is the residue class of ``i`` modulo ``k = gcd(d, s)``
and every circle attached to the branch wraps ``w = d / k`` times.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Iterable

from .errors import UnknownBranch, UnknownSector, ValidationError

ASSUMPTION_KINDS = ("essential", "atoroidal_branches", "acylindrical_sectors",
                    "order_condition2")


@dataclass(frozen=True, order=True)
class SurfaceSig:
    """Topological type of a sector closure.

    ``genus`` is the crosscap count for non-orientable sectors.
    """

    orientable: bool
    genus: int
    boundary_count: int

    def __post_init__(self):
        if self.genus < 0:
            raise ValidationError("BadValue", f"negative genus {self.genus}")
        if not self.orientable and self.genus < 1:
            raise ValidationError("BadValue", "non-orientable sector needs at least one crosscap")
        if self.boundary_count < 0:
            raise ValidationError("BadValue", "negative boundary count")

    @property
    def euler(self) -> int:
        if self.orientable:
            return 2 - 2 * self.genus - self.boundary_count
        return 2 - self.genus - self.boundary_count

    @property
    def is_disk(self) -> bool:
        return self.orientable and self.genus == 0 and self.boundary_count == 1

    @property
    def is_annulus(self) -> bool:
        return self.orientable and self.genus == 0 and self.boundary_count == 2

    @property
    def is_mobius(self) -> bool:
        return not self.orientable and self.genus == 1 and self.boundary_count == 1

    def describe(self) -> str:
        if self.orientable:
            return f"orientable genus={self.genus} boundaries={self.boundary_count}"
        return f"nonorientable crosscaps={self.genus} boundaries={self.boundary_count}"


def orbit_count(degree: int, shift: int) -> int:
    return gcd(degree, shift % degree) if shift % degree else degree


@dataclass(frozen=True)
class BranchModel:
    id: str
    degree: int
    shift: int = 0

    def __post_init__(self):
        if self.degree < 1:
            raise ValidationError("BadValue", f"degree must be positive, got {self.degree}", self.id)
        if not 0 <= self.shift < self.degree:
            raise ValidationError("BadValue", f"shift must lie in [0, {self.degree})", self.id)

    @property
    def orbit_count(self) -> int:
        return orbit_count(self.degree, self.shift)

    @property
    def wrap(self) -> int:
        return self.degree // self.orbit_count

    @property
    def twist(self) -> int:
        """Rotation of the orbit pattern per longitude, in units of whole periods."""
        return self.shift // self.orbit_count

    @property
    def normal(self) -> bool:
        return self.shift == 0

    @property
    def pure(self) -> bool:
        return self.orbit_count == 1

    def slots(self, orbit: int) -> tuple[int, ...]:
        k = self.orbit_count
        return tuple(range(orbit, self.degree, k))


@dataclass(frozen=True)
class Sector:
    id: str
    sig: SurfaceSig


@dataclass(frozen=True)
class Attachment:
    """One orbit of a branch glued to one boundary circle of a sector.

    ``sign`` compares the circle's orientation with the branch direction and
    ``side`` records which face of the sector looks towards increasing
    meridian angle.  ``wrap`` is an optional requested wrapping number that
    :func:`build` checks against the branch model.
    """

    branch: str
    orbit: int
    sector: str
    circle: int
    sign: int = 1
    side: int = 1
    wrap: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class AssumptionRecord:
    kind: str
    provenance: str = ""

    def __post_init__(self):
        if self.kind not in ASSUMPTION_KINDS:
            raise ValidationError("BadValue", f"unknown assumption kind {self.kind!r}")


@dataclass(frozen=True)
class OrbitView:
    orbit: int
    wrap: int
    slots: tuple[int, ...]
    attachment: Attachment


@dataclass(frozen=True)
class MultibranchedSurface:
    """Immutable validated surface; construct it with :func:`build`."""

    branches: tuple[BranchModel, ...]
    sectors: tuple[Sector, ...]
    attachments: tuple[Attachment, ...]
    assumptions: frozenset = frozenset()

    @cached_property
    def _branch_index(self):
        return {b.id: b for b in self.branches}

    @cached_property
    def _sector_index(self):
        return {e.id: e for e in self.sectors}

    @cached_property
    def _by_orbit(self):
        return {(a.branch, a.orbit): a for a in self.attachments}

    @cached_property
    def _by_circle(self):
        return {(a.sector, a.circle): a for a in self.attachments}

    def branch(self, branch_id: str) -> BranchModel:
        try:
            return self._branch_index[branch_id]
        except KeyError:
            raise UnknownBranch(branch_id) from None

    def sector(self, sector_id: str) -> Sector:
        try:
            return self._sector_index[sector_id]
        except KeyError:
            raise UnknownSector(sector_id) from None

    def has_branch(self, branch_id: str) -> bool:
        return branch_id in self._branch_index

    def has_sector(self, sector_id: str) -> bool:
        return sector_id in self._sector_index

    def at_orbit(self, branch_id: str, orbit: int) -> Attachment:
        return self._by_orbit[(branch_id, orbit)]

    def at_circle(self, sector_id: str, circle: int) -> Attachment:
        return self._by_circle[(sector_id, circle)]

    def entries(self, branch_id: str) -> list[Attachment]:
        """Attachments of a branch listed by orbit index."""
        b = self.branch(branch_id)
        return [self._by_orbit[(b.id, o)] for o in range(b.orbit_count)]

    def circles(self, sector_id: str) -> list[Attachment]:
        e = self.sector(sector_id)
        return [self._by_circle[(e.id, c)] for c in range(e.sig.boundary_count)]

    def wrap_of(self, sector_id: str, circle: int) -> int:
        return self.branch(self.at_circle(sector_id, circle).branch).wrap

    def has_assumption(self, kind: str) -> bool:
        return any(a.kind == kind for a in self.assumptions)

    def with_assumptions(self, records: Iterable[AssumptionRecord]) -> "MultibranchedSurface":
        return MultibranchedSurface(self.branches, self.sectors, self.attachments,
                                    frozenset(self.assumptions) | frozenset(records))

    def code(self) -> bytes:
        from .canon import canonical_code
        return canonical_code(self)

    def __repr__(self):
        return (f"MultibranchedSurface(branches={[(b.id, b.degree, b.shift) for b in self.branches]}, "
                f"sectors={[(e.id, e.sig.describe()) for e in self.sectors]})")


def build(branches, sectors, attachments, assumptions=()) -> MultibranchedSurface:
    """Validate raw lists and return the surface.

    ``sectors`` holds ``Sector`` values or ``(id, SurfaceSig)`` pairs.  The
    first violated invariant raises :class:`ValidationError` naming its kind
    and location.
    """
    branches = tuple(branches)
    sectors = tuple(s if isinstance(s, Sector) else Sector(*s) for s in sectors)
    attachments = tuple(attachments)
    if not branches:
        raise ValidationError("NoBranch", "a multibranched surface needs at least one branch")

    bmap: dict[str, BranchModel] = {}
    for b in branches:
        if b.id in bmap:
            raise ValidationError("DuplicateId", "branch declared twice", b.id)
        bmap[b.id] = b
    smap: dict[str, Sector] = {}
    for e in sectors:
        if e.id in smap or e.id in bmap:
            raise ValidationError("DuplicateId", "sector id already in use", e.id)
        if e.sig.boundary_count < 1:
            raise ValidationError("ClosedSector", "closed sectors never meet a branch", e.id)
        smap[e.id] = e

    for a in attachments:
        if a.branch not in bmap:
            raise ValidationError("BadReference", "unknown branch", a.branch)
        if a.sector not in smap:
            raise ValidationError("BadReference", "unknown sector", a.sector)
        if not 0 <= a.orbit < bmap[a.branch].orbit_count:
            raise ValidationError("BadReference", "orbit index out of range", f"{a.branch}.{a.orbit}")
        if not 0 <= a.circle < smap[a.sector].sig.boundary_count:
            raise ValidationError("BadReference", "circle index out of range", f"{a.sector}.{a.circle}")
        if a.sign not in (1, -1) or a.side not in (1, -1):
            raise ValidationError("BadValue", "sign and side must be +1 or -1", f"{a.sector}.{a.circle}")

    requested: dict[str, set[int]] = {}
    for a in attachments:
        if a.wrap is not None:
            requested.setdefault(a.branch, set()).add(a.wrap)
    for bid, wraps in requested.items():
        if len(wraps) > 1:
            raise ValidationError(
                "NonUniformWrap",
                f"wraps {sorted(wraps)} requested on one branch; a meridian rotation has equal orbits",
                bid)
        (w,) = wraps
        if w != bmap[bid].wrap:
            raise ValidationError("NonUniformWrap",
                                  f"wrap {w} requested but the branch model gives {bmap[bid].wrap}", bid)

    orbit_use: dict[tuple[str, int], Attachment] = {}
    circle_use: dict[tuple[str, int], Attachment] = {}
    for a in attachments:
        if (a.branch, a.orbit) in orbit_use:
            raise ValidationError("ReusedOrbit", "orbit carries two circles", f"{a.branch}.{a.orbit}")
        if (a.sector, a.circle) in circle_use:
            raise ValidationError("ReusedOrbit", "circle attached twice", f"{a.sector}.{a.circle}")
        orbit_use[(a.branch, a.orbit)] = a
        circle_use[(a.sector, a.circle)] = a
    for b in branches:
        for o in range(b.orbit_count):
            if (b.id, o) not in orbit_use:
                raise ValidationError("UnattachedCircle", "orbit has no circle attached", f"{b.id}.{o}")
    for e in sectors:
        for c in range(e.sig.boundary_count):
            if (e.id, c) not in circle_use:
                raise ValidationError("UnattachedCircle", "boundary circle not attached", f"{e.id}.{c}")

    parent = {x: x for x in list(bmap) + list(smap)}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in attachments:
        parent[find(a.branch)] = find(a.sector)
    roots = {find(x) for x in parent}
    if len(roots) > 1:
        raise ValidationError("Disconnected", f"incidence graph has {len(roots)} components")

    order = {b.id: i for i, b in enumerate(branches)}
    clean = tuple(sorted(
        (Attachment(a.branch, a.orbit, a.sector, a.circle, a.sign, a.side) for a in attachments),
        key=lambda a: (order[a.branch], a.orbit)))
    return MultibranchedSurface(branches, sectors, clean, frozenset(assumptions))


def orbits(X: MultibranchedSurface, branch_id: str) -> list[OrbitView]:
    b = X.branch(branch_id)
    return [OrbitView(o, b.wrap, b.slots(o), X.at_orbit(b.id, o)) for o in range(b.orbit_count)]


def euler_sectors(X: MultibranchedSurface) -> int:
    return sum(e.sig.euler for e in X.sectors)


def canonical_code(X: MultibranchedSurface) -> bytes:
    from .canon import canonical_code as _cc
    return _cc(X)


def is_isomorphic(X: MultibranchedSurface, Y: MultibranchedSurface) -> bool:
    return canonical_code(X) == canonical_code(Y)
