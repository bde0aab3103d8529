from dataclasses import replace
from itertools import combinations

import networkx as nx
import pytest

from mbcalc import (Attachment, BranchModel, Sector, SurfaceSig, build, euler_sectors,
                    hopf_family, is_isomorphic)
from mbcalc.errors import FactRejected, MalformedCertificate, PosetViolation
from mbcalc.order import (ArcEnd, BranchArc, BranchCone, OrderFact, SectorCopy,
                          check_certificate, euler_filter, hasse, minimality, star_replacement)
from mbcalc.model import AssumptionRecord

DIAMOND = [("X1", "X2"), ("X1", "X3"), ("X2", "X4"), ("X3", "X4")]


def pants_surface():
    return build([BranchModel(n, 3, 1) for n in "abc"], [Sector("P", SurfaceSig(True, 0, 3))],
                 [Attachment(n, 0, "P", i) for i, n in enumerate("abc")])


@pytest.mark.parametrize("pair", DIAMOND + [("X1", "X4")])
def test_catalog_certificates_verify(pair):
    fam = hopf_family(3, 4, include_shortcut=True)
    X, Y = fam[pair[0]], fam[pair[1]]
    verdict = check_certificate(X, Y, fam.certificates[pair])
    assert verdict.ok and verdict.condition2
    assert euler_filter(X, Y, equality_mode=True, certificate=fam.certificates[pair]).passed


def test_certificate_for_wrong_target_is_rejected(hopf34):
    cert = hopf34.certificates[("X1", "X2")]
    assert not check_certificate(hopf34["X1"], hopf34["X3"], cert).ok


def test_level_clash(hopf34):
    cert = hopf34.certificates[("X1", "X2")]
    bad = replace(cert, copies=cert.copies + (SectorCopy("a2", "A", 0, "extra"),))
    assert check_certificate(hopf34["X1"], hopf34["X2"], bad).reason == "level clash"


def test_branch_map_without_cone(hopf34):
    cert = hopf34.certificates[("X1", "X2")]
    bad = replace(cert, branch_map=cert.branch_map + (("ghost", "l1"),))
    assert check_certificate(hopf34["X1"], hopf34["X2"], bad).reason == "branch map"


def test_two_branches_in_one_atoroidal_neighbourhood(hopf34):
    cert = hopf34.certificates[("X1", "X2")]
    extra = BranchCone("n3_cone", "l1", "l9", "regular")
    bad = replace(cert, cones=cert.cones + (extra,), branch_map=cert.branch_map + (("l9", "l1"),))
    assert check_certificate(hopf34["X1"], hopf34["X2"], bad).reason == "branch map"


def test_boundary_parallel_loop_rejected(hopf34):
    cert = hopf34.certificates[("X1", "X2")]
    arcs = tuple(replace(a, encircles_core=False) if a.pid == "n1_loop" else a for a in cert.arcs)
    assert "boundary-parallel" in check_certificate(hopf34["X1"], hopf34["X2"],
                                                    replace(cert, arcs=arcs)).reason


def test_gluing_must_cover(hopf34):
    cert = hopf34.certificates[("X1", "X2")]
    assert "unmatched" in check_certificate(hopf34["X1"], hopf34["X2"],
                                            replace(cert, gluing=cert.gluing[:1])).reason


def test_malformed_certificate(hopf34):
    cert = hopf34.certificates[("X1", "X2")]
    with pytest.raises(MalformedCertificate):
        check_certificate(hopf34["X1"], hopf34["X2"],
                          replace(cert, copies=(SectorCopy("a", "nope", 0, "A'"),)))
    with pytest.raises(MalformedCertificate):
        check_certificate(hopf34["X1"], hopf34["X2"],
                          replace(cert, copies=cert.copies + (SectorCopy("a", "A", 1, "A'"),)))


def test_euler_filter_strict_failure():
    pants = pants_surface()
    fam = hopf_family(3, 4)
    assert euler_sectors(pants) == -1
    assert not euler_filter(pants, fam["X1"]).passed
    assert euler_filter(fam["X1"], pants).passed


def test_equality_mode_rejects_moebius_piece(hopf34):
    cert = hopf34.certificates[("X1", "X2")]
    mob = BranchArc("m", "l1", (ArcEnd(ybranch="l1'", yorbit=1),), "M", kind="mobius")
    bad = replace(cert, arcs=cert.arcs + (mob,))
    res = euler_filter(hopf34["X1"], hopf34["X2"], equality_mode=True, certificate=bad)
    assert not res.passed and "Moebius" in res.reason


def test_equality_mode_needs_certificate(hopf34):
    assert not euler_filter(hopf34["X1"], hopf34["X2"], equality_mode=True).passed


def test_star_replacement():
    X = pants_surface()
    star = star_replacement(X)
    assert len(star.branches) == 4 and len(star.sectors) == 3
    assert all(e.sig.is_annulus for e in star.sectors)
    assert {b.id for b in X.branches} <= {b.id for b in star.branches}
    new = [b for b in star.branches if b.id not in "abc"][0]
    assert (new.degree, new.shift) == (3, 0)
    fam = hopf_family(3, 4)
    assert star_replacement(fam["X1"]) == fam["X1"]


def test_minimality(hopf34):
    assert minimality(hopf34["X1"]).verdict == "minimal"
    assert minimality(hopf34["X4"]).verdict == "unknown"
    half = hopf34["X4"].with_assumptions([AssumptionRecord("atoroidal_branches", "cited")])
    assert minimality(half).verdict == "unknown"


def independent_reduction(edges):
    # keep (a, b) unless b is reachable from a through another successor
    succ = {}
    for a, b in edges:
        succ.setdefault(a, set()).add(b)

    def reach(a, skip):
        seen, stack = set(), [n for n in succ.get(a, ()) if (a, n) != skip]
        while stack:
            n = stack.pop()
            if n not in seen:
                seen.add(n)
                stack.extend(succ.get(n, ()))
        return seen

    return sorted((a, b) for a, b in edges if b not in reach(a, (a, b)))


@pytest.mark.parametrize("p,q", [(3, 4), (3, 5), (4, 5)])
def test_hasse_diamond(p, q):
    fam = hopf_family(p, q, include_shortcut=True)
    diagram = hasse(fam.surfaces, list(fam.facts))
    assert diagram.edges == DIAMOND
    assert diagram.edges == independent_reduction([(f.lower, f.upper) for f in fam.facts])
    assert nx.is_directed_acyclic_graph(diagram.graph)
    assert diagram.dot.count("->") == 4


def test_hasse_dot_is_deterministic(hopf34):
    a = hasse(hopf34.surfaces, list(hopf34.facts)).dot
    b = hasse(dict(reversed(list(hopf34.surfaces.items()))), list(reversed(hopf34.facts))).dot
    assert a == b


def test_hasse_two_cycle(hopf34):
    facts = [OrderFact("X2", "X3", evidence="citation", citation="a"),
             OrderFact("X3", "X2", evidence="citation", citation="b")]
    with pytest.raises(PosetViolation):
        hasse({"X2": hopf34["X2"], "X3": hopf34["X3"]}, facts)


def test_hasse_merges_isomorphic(hopf34):
    facts = [OrderFact("X1", "X2", evidence="citation", citation="c"),
             OrderFact("X2", "Y", evidence="citation", citation="c"),
             OrderFact("Y", "X2", evidence="citation", citation="c")]
    diagram = hasse({"X1": hopf34["X1"], "X2": hopf34["X2"], "Y": hopf34["X2"]}, facts)
    assert diagram.edges == [("X1", "X2")]
    assert diagram.classes["X2"] == ["X2", "Y"]


def test_hasse_single_node(hopf34):
    diagram = hasse({"X1": hopf34["X1"]}, [])
    assert list(diagram.graph.nodes) == ["X1"] and diagram.edges == []


def test_hasse_rejects_unsupported_facts(hopf34):
    with pytest.raises(FactRejected):
        hasse(hopf34.surfaces, [OrderFact("X1", "X2", evidence="filter-only")])
    pants = pants_surface()
    with pytest.raises(FactRejected):
        hasse({"P": pants, "X1": hopf34["X1"]},
              [OrderFact("P", "X1", evidence="citation", citation="x")])


def test_all_certified_pairs_reassemble(hopf34):
    for (lo, hi), cert in hopf34.certificates.items():
        assert check_certificate(hopf34[lo], hopf34[hi], cert).ok
    for a, b in combinations(hopf34.surfaces, 2):
        if (a, b) not in hopf34.certificates:
            assert not is_isomorphic(hopf34[a], hopf34[b])
