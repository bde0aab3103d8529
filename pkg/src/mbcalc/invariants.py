"""Branch and sector classification, Euler characteristic, integral homology
and the combinatorially checkable conditions of the class of admissible
surfaces."""
from __future__ import annotations

from dataclasses import dataclass

from .model import MultibranchedSurface, euler_sectors
from .snf import invariant_factors

__all__ = ["BranchClass", "SectorClass", "ClassXReport", "HomologyReport",
           "euler_sectors", "classify_branch", "classify_sector", "class_x_report",
           "homology", "cellular_chain_complex"]


@dataclass(frozen=True)
class BranchClass:
    normal: bool
    pure: bool
    tribranched_at: bool
    spreadable: bool


@dataclass(frozen=True)
class SectorClass:
    kind: str  # normal_annulus | quasi_normal_annulus | normal_mobius | generic


@dataclass(frozen=True)
class ClassXReport:
    maximally_spread: bool
    no_disk_sector: bool
    min_degree_ok: bool
    essential_assumed: bool
    verdict: str
    reasons: tuple[str, ...] = ()

    @property
    def checkable(self) -> tuple[bool, bool, bool]:
        """Conditions that do not depend on the ambient manifold."""
        return (self.maximally_spread, self.no_disk_sector, self.min_degree_ok)


@dataclass(frozen=True)
class HomologyReport:
    b0: int
    h1_rank: int
    h1_torsion: tuple[int, ...]
    h2_rank: int

    def format_h1(self) -> str:
        return _format_group(self.h1_rank, self.h1_torsion)

    def format_h2(self) -> str:
        return _format_group(self.h2_rank, ())


def _format_group(rank, torsion):
    parts = []
    if rank == 1:
        parts.append("Z")
    elif rank > 1:
        parts.append(f"Z^{rank}")
    parts.extend(f"Z/{t}" for t in torsion)
    return " + ".join(parts) if parts else "0"


def classify_branch(X: MultibranchedSurface, branch_id: str) -> BranchClass:
    b = X.branch(branch_id)
    normal, pure = b.normal, b.pure
    return BranchClass(normal=normal, pure=pure, tribranched_at=b.degree == 3,
                       spreadable=not ((normal and b.degree == 3) or pure))


def classify_sector(X: MultibranchedSurface, sector_id: str) -> SectorClass:
    e = X.sector(sector_id)
    wraps = sorted(X.wrap_of(e.id, c) for c in range(e.sig.boundary_count))
    if e.sig.is_annulus:
        if wraps == [1, 1]:
            return SectorClass("normal_annulus")
        if wraps[0] == 1:
            return SectorClass("quasi_normal_annulus")
    elif e.sig.is_mobius and wraps == [1]:
        return SectorClass("normal_mobius")
    return SectorClass("generic")


def class_x_report(X: MultibranchedSurface) -> ClassXReport:
    spread = not any(classify_branch(X, b.id).spreadable for b in X.branches)
    no_disk = not any(e.sig.is_disk for e in X.sectors)
    degree_ok = all(b.degree >= 3 for b in X.branches)
    essential = X.has_assumption("essential")
    reasons = []
    if not spread:
        reasons.append("maximally_spread")
    if not no_disk:
        reasons.append("disk_sector")
    if not degree_ok:
        reasons.append("min_degree")
    if reasons:
        verdict = "out(" + ",".join(reasons) + ")"
    elif not essential:
        verdict = "conditional(essential)"
        reasons.append("essential")
    else:
        verdict = "in_class"
    return ClassXReport(spread, no_disk, degree_ok, essential, verdict, tuple(reasons))


def cellular_chain_complex(X: MultibranchedSurface):
    """Boundary matrices of a CW structure homotopy equivalent to ``X``.

    Cells: a vertex and a loop per branch; per sector a base vertex, an arc
    from it to each of its circles, ``2g`` handle loops (or ``c`` crosscap
    loops) and one 2-cell.  Returns ``(d1, d2, n0, n1, n2)`` with matrices as
    lists of rows.
    """
    nb = len(X.branches)
    bpos = {b.id: i for i, b in enumerate(X.branches)}
    vertices = nb + len(X.sectors)
    edges = []  # (tail, head) or None for loops
    faces = []
    loop_of = {}
    for b in X.branches:
        loop_of[b.id] = len(edges)
        edges.append(None)
    for si, e in enumerate(X.sectors):
        base = nb + si
        face = {}
        for a in X.circles(e.id):
            edges.append((base, bpos[a.branch]))
            w = X.branch(a.branch).wrap
            col = loop_of[a.branch]
            face[col] = face.get(col, 0) + a.sign * w
        extra = 2 * e.sig.genus if e.sig.orientable else e.sig.genus
        for _ in range(extra):
            if not e.sig.orientable:
                face[len(edges)] = 2
            edges.append(None)
        faces.append(face)
    d1 = [[0] * len(edges) for _ in range(vertices)]
    for j, ends in enumerate(edges):
        if ends is not None:
            d1[ends[1]][j] += 1
            d1[ends[0]][j] -= 1
    d2 = [[0] * len(faces) for _ in range(len(edges))]
    for f, face in enumerate(faces):
        for j, v in face.items():
            d2[j][f] = v
    return d1, d2, vertices, len(edges), len(faces)


def homology(X: MultibranchedSurface) -> HomologyReport:
    d1, d2, n0, n1, n2 = cellular_chain_complex(X)
    r1 = len(invariant_factors(d1)) if n1 else 0
    f2 = invariant_factors(d2) if n2 else []
    r2 = len(f2)
    return HomologyReport(
        b0=n0 - r1,
        h1_rank=n1 - r1 - r2,
        h1_torsion=tuple(d for d in f2 if d > 1),
        h2_rank=n2 - r2,
    )
