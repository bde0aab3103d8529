"""Worked examples and generators: the Hopf family, the theta graph times a
circle, and random surfaces for property tests."""
from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd

from .errors import BadParameters, LimitsUnsatisfiable, ValidationError
from .model import (AssumptionRecord, Attachment, BranchModel, MultibranchedSurface, Sector,
                    SurfaceSig, build)
from .order import (ArcEnd, BranchArc, BranchCone, Certificate, OrderFact, SectorCopy)

ANNULUS = SurfaceSig(True, 0, 2)

ESSENTIAL = AssumptionRecord(
    "essential", "incompressible and efficient in the Seifert manifold of the Hopf construction")
CONDITION2 = AssumptionRecord(
    "order_condition2", "complement pieces are products over the characteristic annuli")
BOTTOM = (
    AssumptionRecord("atoroidal_branches", "Hopf link exterior is T^2 x I, which has no essential torus"),
    AssumptionRecord("acylindrical_sectors", "the single annulus sector meets no essential annulus off X"),
)


@dataclass(frozen=True)
class HopfFamily:
    p: int
    q: int
    surfaces: dict  # name -> MultibranchedSurface, X1..X4
    certificates: dict  # (lower, upper) -> Certificate
    facts: tuple

    def __getitem__(self, name):
        return self.surfaces[name]


def _att(branch, orbit, sector, circle, sign=1):
    return Attachment(branch, orbit, sector, circle, sign, sign)


def _pure(name, degree):
    return BranchModel(name, degree, 1)


def _blown_up(name):
    return BranchModel(name, 3, 0)


def _hopf_surfaces(p, q):
    x1 = build([_pure("l1", p), _pure("l2", q)], [Sector("A", ANNULUS)],
               [_att("l1", 0, "A", 0), _att("l2", 0, "A", 1)],
               (ESSENTIAL, *BOTTOM))
    x2 = build([_blown_up("l1'"), _pure("l2", q)],
               [Sector("A'", ANNULUS), Sector("A1", ANNULUS)],
               [_att("l1'", 0, "A'", 0), _att("l1'", 1, "A1", 0), _att("l1'", 2, "A1", 1, -1),
                _att("l2", 0, "A'", 1)], (ESSENTIAL,))
    x3 = build([_pure("l1", p), _blown_up("l2'")],
               [Sector("A''", ANNULUS), Sector("A2", ANNULUS)],
               [_att("l1", 0, "A''", 0), _att("l2'", 0, "A''", 1), _att("l2'", 1, "A2", 0),
                _att("l2'", 2, "A2", 1, -1)], (ESSENTIAL,))
    x4 = build([_blown_up("l1'"), _blown_up("l2'")],
               [Sector("A'''", ANNULUS), Sector("A1", ANNULUS), Sector("A2", ANNULUS)],
               [_att("l1'", 0, "A'''", 0), _att("l1'", 1, "A1", 0), _att("l1'", 2, "A1", 1, -1),
                _att("l2'", 0, "A'''", 1), _att("l2'", 1, "A2", 0), _att("l2'", 2, "A2", 1, -1)],
               (ESSENTIAL,))
    return {"X1": x1, "X2": x2, "X3": x3, "X4": x4}


def _blow_up(pid, xbranch, ybranch, yannulus, ysector, wall_orbit=0):
    """Pieces inside N(xbranch) for a regular fiber ``ybranch`` of degree 3:
    one leg out to the wall and one loop around the core."""
    return (
        BranchArc(f"{pid}_leg", xbranch, (ArcEnd(orbit=wall_orbit), ArcEnd(ybranch=ybranch, yorbit=0)),
                  ysector),
        BranchArc(f"{pid}_loop", xbranch,
                  (ArcEnd(ybranch=ybranch, yorbit=1), ArcEnd(ybranch=ybranch, yorbit=2, sign=-1, side=-1)),
                  yannulus, encircles_core=True),
    ), BranchCone(f"{pid}_cone", xbranch, ybranch, "regular")


def _keep(pid, xbranch, ybranch, ysectors, signs=(1,), core=True):
    """Pieces inside N(xbranch) when the Y-branch is (a push-off of) its core:
    one leg per orbit, carrying the given sign and side."""
    arcs = tuple(BranchArc(f"{pid}_leg{o}", xbranch,
                           (ArcEnd(orbit=o), ArcEnd(ybranch=ybranch, yorbit=o, sign=sg, side=sg)),
                           ysectors[o])
                 for o, sg in enumerate(signs))
    return arcs, BranchCone(f"{pid}_cone", xbranch, ybranch, "core" if core else "regular")


def _certificate(copies, parts, gluing):
    arcs = tuple(a for arcs, _ in parts for a in arcs)
    cones = tuple(c for _, c in parts)
    return Certificate(copies=tuple(copies), arcs=arcs, cones=cones,
                       branch_map=tuple((c.ybranch, c.xbranch) for c in cones),
                       gluing=tuple(gluing), assumptions=(CONDITION2,))


def _hopf_certificates():
    certs = {}
    # X1 <= X2: blow up l1, keep l2
    certs[("X1", "X2")] = _certificate(
        [SectorCopy("a", "A", 0, "A'")],
        [_blow_up("n1", "l1", "l1'", "A1", "A'"), _keep("n2", "l2", "l2", ("A'",))],
        [(("a", 0), ("n1_leg", 0)), (("a", 1), ("n2_leg0", 0))])
    certs[("X1", "X3")] = _certificate(
        [SectorCopy("a", "A", 0, "A''")],
        [_keep("n1", "l1", "l1", ("A''",)), _blow_up("n2", "l2", "l2'", "A2", "A''")],
        [(("a", 0), ("n1_leg0", 0)), (("a", 1), ("n2_leg", 0))])
    certs[("X1", "X4")] = _certificate(
        [SectorCopy("a", "A", 0, "A'''")],
        [_blow_up("n1", "l1", "l1'", "A1", "A'''"), _blow_up("n2", "l2", "l2'", "A2", "A'''")],
        [(("a", 0), ("n1_leg", 0)), (("a", 1), ("n2_leg", 0))])
    certs[("X2", "X4")] = _certificate(
        [SectorCopy("a", "A'", 0, "A'''"), SectorCopy("b", "A1", 0, "A1")],
        [_keep("n1", "l1'", "l1'", ("A'''", "A1", "A1"), (1, 1, -1), core=False),
         _blow_up("n2", "l2", "l2'", "A2", "A'''")],
        [(("a", 0), ("n1_leg0", 0)), (("a", 1), ("n2_leg", 0)),
         (("b", 0), ("n1_leg1", 0)), (("b", 1), ("n1_leg2", 0))])
    certs[("X3", "X4")] = _certificate(
        [SectorCopy("a", "A''", 0, "A'''"), SectorCopy("b", "A2", 0, "A2")],
        [_blow_up("n1", "l1", "l1'", "A1", "A'''"),
         _keep("n2", "l2'", "l2'", ("A'''", "A2", "A2"), (1, 1, -1), core=False)],
        [(("a", 0), ("n1_leg", 0)), (("a", 1), ("n2_leg0", 0)),
         (("b", 0), ("n2_leg1", 0)), (("b", 1), ("n2_leg2", 0))])
    return certs


def hopf_family(p: int, q: int, include_shortcut: bool = False) -> HopfFamily:
    """The four surfaces built from a Hopf link with pure branches of degrees
    ``p`` and ``q`` and their successive blow-ups, with certificates for the
    four covering relations (plus ``X1 <= X4`` when ``include_shortcut``)."""
    if p < 3 or q < 3 or gcd(p, q) != 1:
        raise BadParameters(f"need coprime p, q >= 3, got ({p}, {q})")
    surfaces = _hopf_surfaces(p, q)
    certs = _hopf_certificates()
    if not include_shortcut:
        certs.pop(("X1", "X4"))
    facts = tuple(OrderFact(lo, hi, "le", "certificate", certs[(lo, hi)]) for lo, hi in sorted(certs))
    return HopfFamily(p, q, surfaces, certs, facts)


def theta_torus() -> MultibranchedSurface:
    """Theta graph times the circle: two tribranched normal branches joined
    by three annuli."""
    return build([BranchModel("v1", 3, 0), BranchModel("v2", 3, 0)],
                 [Sector(f"A{i}", ANNULUS) for i in range(3)],
                 [a for i in range(3) for a in (_att("v1", i, f"A{i}", 0), _att("v2", i, f"A{i}", 1))])


def random_surface(seed: int, max_branches: int = 3, max_sectors: int = 4,
                   attempts: int = 2000) -> MultibranchedSurface:
    """A random valid surface, deterministic per seed (rejection sampling)."""
    if max_branches < 1 or max_sectors < 1:
        raise LimitsUnsatisfiable("need room for at least one branch and one sector")
    rng = random.Random(seed)
    for _ in range(attempts):
        nb = rng.randint(1, max_branches)
        branches = []
        for i in range(nb):
            d = rng.choice((3, 3, 4, 4, 5, 6)) if rng.random() < 0.9 else rng.choice((1, 2))
            s = 0 if rng.random() < 0.5 else rng.randrange(d)
            branches.append(BranchModel(f"b{i}", d, s))
        orbits = [(b.id, o) for b in branches for o in range(b.orbit_count)]
        ns = rng.randint(1, min(max_sectors, len(orbits)))
        rng.shuffle(orbits)
        cuts = sorted(rng.sample(range(1, len(orbits)), ns - 1))
        groups = [orbits[i:j] for i, j in zip([0] + cuts, cuts + [len(orbits)])]
        sectors, attachments = [], []
        for j, group in enumerate(groups):
            if rng.random() < 0.8:
                sig = SurfaceSig(True, rng.choice((0, 0, 0, 1)), len(group))
            else:
                sig = SurfaceSig(False, rng.choice((1, 1, 2)), len(group))
            sectors.append(Sector(f"e{j}", sig))
            for c, (bid, o) in enumerate(group):
                attachments.append(_att(bid, o, f"e{j}", c, rng.choice((1, -1))))
        try:
            return build(branches, sectors, attachments)
        except ValidationError:
            continue
    raise LimitsUnsatisfiable(f"no valid surface after {attempts} attempts")
