"""The boundary of a regular neighbourhood of a surface, assembled from faces.

``N(X)`` splits into the solid tori around the branches and the (possibly
twisted) I-bundle over the sectors; they meet in the characteristic annuli,
one per branch orbit.  ``dN(X)`` is then glued from

* gap annuli on each branch torus: the gap between slots ``i`` and ``i+1``
  is bounded by the upper side of the curve through slot ``i`` and the lower
  side of the curve through slot ``i+1``; gaps are grouped into ``k`` annuli
  by the meridian rotation;
* the two faces ``e x {+1}``, ``e x {-1}`` of each orientable sector, or the
  orientation double cover of a non-orientable one.

Each curve side lies on exactly one gap annulus and one sector face.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .model import MultibranchedSurface

UP, LOW = "up", "low"


@dataclass(frozen=True)
class CharacteristicAnnulus:
    branch: str
    orbit: int
    slope: tuple[int, int]
    sides: tuple[str, str] = (UP, LOW)


@dataclass(frozen=True)
class Face:
    name: tuple
    euler: int
    # (curve side, induced orientation of that curve relative to the branch)
    edges: tuple[tuple[tuple, int], ...]


@dataclass(frozen=True)
class FaceComplex:
    faces: tuple[Face, ...]
    # curve side -> (gap face index, sector face index)
    gluings: dict

    def usage(self) -> Counter:
        return Counter(side for f in self.faces for side, _ in f.edges)


@dataclass(frozen=True, order=True)
class BoundaryComponent:
    orientable: bool
    genus: int  # crosscaps when non-orientable
    euler: int

    def describe(self) -> str:
        if self.orientable:
            if self.genus == 0:
                return "sphere"
            if self.genus == 1:
                return "torus"
            return f"orientable genus {self.genus}"
        return f"nonorientable crosscaps {self.genus}"


@dataclass(frozen=True)
class BoundarySurfaceReport:
    components: tuple[BoundaryComponent, ...]

    @property
    def euler(self) -> int:
        return sum(c.euler for c in self.components)

    def as_lines(self) -> list[str]:
        lines = [f"components: {len(self.components)}", f"chi: {self.euler}"]
        for i, c in enumerate(self.components):
            lines.append(f"component {i}: {c.describe()} chi={c.euler} "
                         f"orientable={'yes' if c.orientable else 'no'}")
        return lines


def characteristic_annuli(X: MultibranchedSurface) -> list[CharacteristicAnnulus]:
    return [CharacteristicAnnulus(b.id, o, (b.wrap, b.twist))
            for b in X.branches for o in range(b.orbit_count)]


def face_complex(X: MultibranchedSurface) -> FaceComplex:
    faces: list[Face] = []
    for b in X.branches:
        k = b.orbit_count
        for g in range(k):
            faces.append(Face(("gap", b.id, g), 0,
                              (((b.id, g, UP), -1), ((b.id, (g + 1) % k, LOW), 1))))
    for e in X.sectors:
        chi = e.sig.euler
        taus = (1, -1)
        if e.sig.orientable:
            buckets = {tau: [] for tau in taus}
        else:
            buckets = {0: []}
        for a in X.circles(e.id):
            for tau in taus:
                side = UP if tau == a.side else LOW
                key = tau if e.sig.orientable else 0
                buckets[key].append(((a.branch, a.orbit, side), tau * a.sign))
        for key, edges in buckets.items():
            faces.append(Face(("sector", e.id, key), chi if e.sig.orientable else 2 * chi,
                              tuple(edges)))
    gluings: dict = {}
    for fi, f in enumerate(faces):
        for side, _ in f.edges:
            gluings.setdefault(side, []).append(fi)
    return FaceComplex(tuple(faces), {s: tuple(v) for s, v in gluings.items()})


def boundary_surface(X: MultibranchedSurface) -> BoundarySurfaceReport:
    fc = face_complex(X)
    n = len(fc.faces)
    signs = [{side: sgn for side, sgn in f.edges} for f in fc.faces]
    adj = [[] for _ in range(n)]
    for side, (fa, fb) in fc.gluings.items():
        # consistent when the two faces induce opposite orientations on the curve
        parity = 0 if signs[fa][side] != signs[fb][side] else 1
        adj[fa].append((fb, parity))
        adj[fb].append((fa, parity))
    colour = [None] * n
    components = []
    for start in range(n):
        if colour[start] is not None:
            continue
        colour[start] = 0
        stack, members, orientable = [start], [], True
        while stack:
            u = stack.pop()
            members.append(u)
            for v, parity in adj[u]:
                want = colour[u] ^ parity
                if colour[v] is None:
                    colour[v] = want
                    stack.append(v)
                elif colour[v] != want:
                    orientable = False
        chi = sum(fc.faces[i].euler for i in members)
        genus = (2 - chi) // 2 if orientable else 2 - chi
        components.append(BoundaryComponent(orientable, genus, chi))
    return BoundarySurfaceReport(tuple(sorted(components)))
