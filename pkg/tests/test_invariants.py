import pytest
from hypothesis import given, settings, strategies as st

from mbcalc import (Attachment, BranchModel, Sector, SurfaceSig, build, class_x_report,
                    classify_branch, classify_sector, euler_sectors, homology, random_surface)
from mbcalc.snf import invariant_factors

from oracles import expected_mod_p, homology_mod_p


def test_branch_classes():
    X = build([BranchModel("a", 3, 0), BranchModel("b", 4, 0), BranchModel("c", 5, 1),
               BranchModel("d", 6, 2)],
              [Sector("E", SurfaceSig(True, 0, 3 + 4 + 1 + 2))],
              [Attachment(b, o, "E", i) for i, (b, o) in enumerate(
                  [("a", 0), ("a", 1), ("a", 2), ("b", 0), ("b", 1), ("b", 2), ("b", 3),
                   ("c", 0), ("d", 0), ("d", 1)])])
    a, b, c, d = (classify_branch(X, n) for n in "abcd")
    assert a.normal and a.tribranched_at and not a.spreadable
    assert b.normal and b.spreadable
    assert c.pure and not c.spreadable
    assert not d.normal and not d.pure and d.spreadable


def test_sector_kinds(hopf34):
    X2 = hopf34["X2"]
    assert classify_sector(X2, "A'").kind == "quasi_normal_annulus"
    assert classify_sector(X2, "A1").kind == "normal_annulus"
    assert classify_sector(hopf34["X1"], "A").kind == "generic"


def test_euler_of_pair_of_pants():
    X = build([BranchModel(n, 1) for n in "abc"], [Sector("P", SurfaceSig(True, 0, 3))],
              [Attachment(n, 0, "P", i) for i, n in enumerate("abc")])
    assert euler_sectors(X) == -1


@pytest.mark.parametrize("name,h1,h2", [("X1", "Z", "0"), ("X2", "Z^2", "Z"),
                                         ("X3", "Z^2", "Z"), ("X4", "Z^3", "Z^2")])
def test_hopf_homology(hopf34, name, h1, h2):
    h = homology(hopf34[name])
    assert (h.b0, h.format_h1(), h.format_h2()) == (1, h1, h2)


def test_disk_on_doubly_wrapped_branch_is_projective_plane():
    X = build([BranchModel("l", 2, 1)], [Sector("D", SurfaceSig(True, 0, 1))],
              [Attachment("l", 0, "D", 0)])
    h = homology(X)
    assert (h.h1_rank, h.h1_torsion, h.h2_rank) == (0, (2,), 0)


def test_theta_homology(theta):
    h = homology(theta)
    # (theta graph) x S^1: H1 = Z^3, H2 = Z^2
    assert (h.h1_rank, h.h1_torsion, h.h2_rank) == (3, (), 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_homology_matches_simplicial_oracle(seed):
    X = random_surface(seed)
    report = homology(X)
    for p, dims in homology_mod_p(X).items():
        assert dims == expected_mod_p(report, p), (p, report)


@pytest.mark.parametrize("matrix,factors", [
    ([[2, 4, 4], [-6, 6, 12], [10, -4, -16]], [2, 6, 12]),
    ([[0, 0], [0, 0]], []),
    ([[6, 0], [0, 4]], [2, 12]),
    ([[1, 2, 3]], [1]),
])
def test_smith_normal_form(matrix, factors):
    assert invariant_factors(matrix) == factors


@settings(max_examples=80, deadline=None)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=1, max_size=4))
def test_smith_normal_form_determinantal_divisors(rows):
    # product of the first i factors equals the gcd of the i x i minors
    from itertools import combinations
    from math import gcd, prod

    def det(m):
        if len(m) == 1:
            return m[0][0]
        return sum((-1) ** j * m[0][j] * det([r[:j] + r[j + 1:] for r in m[1:]])
                   for j in range(len(m)))

    f = invariant_factors(rows)
    for i in range(1, min(len(rows), 3) + 1):
        g = 0
        for rs in combinations(range(len(rows)), i):
            for cs in combinations(range(3), i):
                g = gcd(g, det([[rows[r][c] for c in cs] for r in rs]))
        assert (prod(f[:i]) if len(f) >= i else 0) == g
    assert all(f[i + 1] % f[i] == 0 for i in range(len(f) - 1))


def test_class_x_report(hopf34, theta):
    assert class_x_report(hopf34["X1"]).verdict == "in_class"
    assert class_x_report(theta).verdict == "conditional(essential)"
    assert class_x_report(theta).checkable == (True, True, True)
    disk = build([BranchModel("l", 4, 0)],
                 [Sector("D", SurfaceSig(True, 0, 1)), Sector("E", SurfaceSig(True, 1, 3))],
                 [Attachment("l", i, "D" if i == 0 else "E", 0 if i == 0 else i - 1) for i in range(4)])
    r = class_x_report(disk)
    assert r.verdict == "out(maximally_spread,disk_sector)"
