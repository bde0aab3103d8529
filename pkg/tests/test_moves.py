import pytest
from hypothesis import given, settings, strategies as st

from mbcalc import (Attachment, BranchModel, Sector, SurfaceSig, applicable_ix, applicable_xi,
                    apply_ix, apply_xi, boundary_surface, build, canonical_code, equivalent,
                    euler_sectors, homology, ih_neighbors, is_isomorphic, random_surface,
                    spread_maximally)
from mbcalc.errors import (InvalidSpec, InvalidSplit, NonOrientableUnsupported, NotApplicable,
                           NotMaximallySpread)
from mbcalc.moves import (NONSEPARATING, FormalSurface, MoveDescriptor, Separating, TubeSpec,
                          compress_sector, ih_moves, is_maximally_spread, parse_descriptor,
                          replay, tube)

ANNULUS = SurfaceSig(True, 0, 2)
MOBIUS = SurfaceSig(False, 1, 1)


def invariants(X):
    return euler_sectors(X), homology(X), boundary_surface(X)


def quasi_example():
    # l1 normal of degree 3, l2 pure (3, 1); A joins them, P is a loop on l1
    return build([BranchModel("l1", 3, 0), BranchModel("l2", 3, 1)],
                 [Sector("A", ANNULUS), Sector("P", ANNULUS)],
                 [Attachment("l1", 0, "A", 0), Attachment("l2", 0, "A", 1),
                  Attachment("l1", 1, "P", 0), Attachment("l1", 2, "P", 1, -1, -1)])


def mobius_example():
    return build([BranchModel("l", 3, 0)], [Sector("Mb", MOBIUS), Sector("P", ANNULUS)],
                 [Attachment("l", 0, "Mb", 0), Attachment("l", 1, "P", 0),
                  Attachment("l", 2, "P", 1, -1, -1)])


def four_slots():
    return build([BranchModel("l", 4, 0)] + [BranchModel(f"m{i}", 1) for i in range(4)],
                 [Sector(f"D{i}", ANNULUS) for i in range(4)],
                 [a for i in range(4) for a in (Attachment("l", i, f"D{i}", 0),
                                                Attachment(f"m{i}", 0, f"D{i}", 1))])


def test_applicable_ix_on_hopf(hopf34):
    assert [str(m) for m in applicable_ix(hopf34["X4"])] == ["ix:A'''"]
    assert [m.kind for m in applicable_ix(hopf34["X2"])] == ["ix_quasi_normal"]
    assert applicable_ix(hopf34["X1"]) == []


def test_ix_normal_annulus_on_x4(hopf34):
    Y = apply_ix(hopf34["X4"], applicable_ix(hopf34["X4"])[0])
    assert [(b.degree, b.shift) for b in Y.branches] == [(4, 0)]
    assert sorted(e.id for e in Y.sectors) == ["A1", "A2"]


def test_ix_quasi_normal_example():
    Y = apply_ix(quasi_example(), MoveDescriptor("ix_quasi_normal", "A"))
    assert [(b.degree, b.shift) for b in Y.branches] == [(6, 2)]
    assert [e.id for e in Y.sectors] == ["P"]
    assert {Y.wrap_of("P", c) for c in (0, 1)} == {3}


def test_ix_mobius_example():
    Y = apply_ix(mobius_example(), MoveDescriptor("ix_mobius", "Mb"))
    assert [(b.degree, b.shift) for b in Y.branches] == [(4, 2)]
    assert {Y.wrap_of("P", c) for c in (0, 1)} == {2}


def test_ix_not_applicable(hopf34):
    with pytest.raises(NotApplicable):
        apply_ix(hopf34["X4"], MoveDescriptor("ix_normal_annulus", "A1"))


def test_xi_enumeration():
    X = four_slots()
    splits = [m for m in applicable_xi(X) if m.target == "l"]
    assert len(splits) == 2 and all(len(m.part) == 2 for m in splits)
    Y6 = apply_ix(quasi_example(), MoveDescriptor("ix_quasi_normal", "A"))
    assert [str(m) for m in applicable_xi(Y6)] == ["xi-extract:l2:0-1", "xi-extract:l2:1-0"]
    Y4 = apply_ix(mobius_example(), MoveDescriptor("ix_mobius", "Mb"))
    assert [m.kind for m in applicable_xi(Y4)] == ["xi_unmobius"]


def test_xi_inverts_examples():
    for X, kind, sector in ((quasi_example(), "ix_quasi_normal", "A"),
                            (mobius_example(), "ix_mobius", "Mb")):
        Y = apply_ix(X, MoveDescriptor(kind, sector))
        assert any(is_isomorphic(apply_xi(Y, m), X) for m in applicable_xi(Y))


def test_xi_rejects_bad_descriptors():
    X = four_slots()
    with pytest.raises(NotApplicable):
        apply_xi(X, MoveDescriptor("xi_split", "l", (0, 2), (1, 3)))
    with pytest.raises(NotApplicable):
        apply_xi(X, MoveDescriptor("xi_unmobius", "l"))


def test_spread_four_slots():
    Y = spread_maximally(four_slots())
    normal3 = [b for b in Y.branches if (b.degree, b.shift) == (3, 0)]
    assert len(normal3) == 2 and is_maximally_spread(Y)
    assert invariants(Y) == invariants(four_slots())


def test_spread_fixes_x1(hopf34):
    assert spread_maximally(hopf34["X1"]) == hopf34["X1"]


def test_spread_extract_example():
    Y6 = apply_ix(quasi_example(), MoveDescriptor("ix_quasi_normal", "A"))
    Z = spread_maximally(Y6)
    assert is_isomorphic(Z, quasi_example())


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 100_000))
def test_spreading_terminates_and_preserves_invariants(seed):
    X = random_surface(seed)
    Y = spread_maximally(X)
    stuck = [b for b in Y.branches if b.normal and b.degree <= 2]
    assert is_maximally_spread(Y) or stuck
    assert invariants(Y) == invariants(X)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 100_000))
def test_every_move_preserves_invariants_and_has_inverse(seed):
    X = random_surface(seed)
    base = invariants(X)
    code = canonical_code(X)
    # XI-moves never create branches of degree below 3 and use only the
    # Moebius route at wrap 2, so collapses touching those have no listed inverse
    invertible = min(b.degree for b in X.branches) >= 3 and all(b.wrap != 2 for b in X.branches)
    for m in applicable_ix(X):
        Y = apply_ix(X, m)
        assert invariants(Y) == base
        if not invertible:
            continue
        assert any(canonical_code(apply_xi(Y, x)) == code for x in applicable_xi(Y)), str(m)
    for m in applicable_xi(X):
        Y = apply_xi(X, m)
        assert invariants(Y) == base
        assert any(canonical_code(apply_ix(Y, i)) == code for i in applicable_ix(Y)), str(m)


def test_ih_neighbors_of_x4(hopf34):
    X4 = hopf34["X4"]
    neighbours = ih_neighbors(X4)
    assert len(neighbours) == 2
    assert any(is_isomorphic(Z, X4) for Z in neighbours)
    for Z in neighbours:
        assert invariants(Z) == invariants(X4)
        assert equivalent(X4, Z, 2).equivalent


def test_ih_neighbors_of_x2_include_itself(hopf34):
    assert any(is_isomorphic(Z, hopf34["X2"]) for Z in ih_neighbors(hopf34["X2"]))
    assert ih_neighbors(hopf34["X1"]) == []


def test_ih_requires_spread():
    with pytest.raises(NotMaximallySpread):
        ih_neighbors(four_slots())


def test_equivalence_search(hopf34):
    res = equivalent(hopf34["X2"], hopf34["X3"], 4)
    assert not res.equivalent and res.verdict == "no-within-depth 4"
    assert equivalent(hopf34["X1"], hopf34["X1"], 0).equivalent


def test_equivalence_path_replays(hopf34):
    X4 = hopf34["X4"]
    for Z in ih_neighbors(X4):
        res = equivalent(X4, Z, 2)
        assert res.verdict == "yes"
        assert is_isomorphic(replay(X4, res.path.to_text()), Z)
        for (m, code), line in zip(res.path.steps, res.path.to_text().splitlines()):
            assert str(m) == line


def test_two_step_equivalence():
    # find a pair two IH-moves apart among random spread surfaces and check the path
    found = 0
    for seed in range(80):
        X = spread_maximally(random_surface(seed))
        if not is_maximally_spread(X):
            continue
        for Z, _ in ih_moves(X)[:2]:
            for W, _ in ih_moves(Z)[:2]:
                res = equivalent(X, W, 3)
                assert res.equivalent
                assert is_isomorphic(replay(X, res.path.to_text()), W)
                found += 1
        if found >= 6:
            break
    assert found >= 1


def test_descriptor_syntax(hopf34):
    X4 = hopf34["X4"]
    assert parse_descriptor("ix:A'''", X4).kind == "ix_normal_annulus"
    Y = apply_ix(X4, parse_descriptor("ix:A'''", X4))
    m = parse_descriptor("xi-split:l1':3-0|1-2", Y)
    assert (m.part, m.rest) == ((3, 0), (1, 2))
    assert str(m) == "xi-split:l1':3-0|1-2"
    with pytest.raises(InvalidSpec):
        parse_descriptor("twist:l1'", Y)


# ---------------------------------------------------------------- compression

def handle_surface(genus, boundaries):
    return build([BranchModel(f"b{i}", 1) for i in range(boundaries)],
                 [Sector("F", SurfaceSig(True, genus, boundaries))],
                 [Attachment(f"b{i}", 0, "F", i) for i in range(boundaries)])


def test_compress_nonseparating():
    F = compress_sector(handle_surface(2, 1), "F", NONSEPARATING)
    X = F.to_surface()
    assert X.sector("F").sig == SurfaceSig(True, 1, 1)
    assert euler_sectors(X) == euler_sectors(handle_surface(2, 1)) + 2


def test_compress_separating():
    F = compress_sector(handle_surface(1, 2), "F", Separating((0, 1), ((0,), (1,))))
    assert [e.sig for e in F.sectors] == [SurfaceSig(True, 0, 2), SurfaceSig(True, 1, 2)]
    assert F.has_free_circles
    with pytest.raises(Exception):
        F.to_surface()
    capped = compress_sector(handle_surface(1, 2), "F", Separating((0, 1), ((0,), (1,))), cap=True)
    assert not capped.has_free_circles
    assert [e.sig for e in capped.sectors] == [SurfaceSig(True, 0, 1), SurfaceSig(True, 1, 1)]


def test_compress_errors(hopf34):
    with pytest.raises(InvalidSplit):
        compress_sector(hopf34["X1"], "A", NONSEPARATING)
    with pytest.raises(InvalidSplit):
        compress_sector(handle_surface(1, 2), "F", Separating((0, 0), ((0,), (1,))))
    with pytest.raises(InvalidSplit):
        compress_sector(handle_surface(1, 1), "F", Separating((0, 1), ((), (0,))))
    nonor = build([BranchModel("b", 1)], [Sector("N", SurfaceSig(False, 2, 1))],
                  [Attachment("b", 0, "N", 0)])
    with pytest.raises(NonOrientableUnsupported):
        compress_sector(nonor, "N", NONSEPARATING)


@pytest.mark.parametrize("genus,bounds,spec", [
    (2, 1, NONSEPARATING),
    (1, 2, Separating((0, 1), ((0,), (1,)))),
    (2, 3, Separating((1, 1), ((0, 2), (1,)))),
])
def test_tube_inverts_compression(genus, bounds, spec):
    X = handle_surface(genus, bounds)
    F = compress_sector(X, "F", spec)
    if spec == NONSEPARATING:
        back = tube(F, TubeSpec(NONSEPARATING, ("F",)))
    else:
        back = tube(F, TubeSpec("separating", tuple(e.id for e in F.sectors), "F"))
    assert is_isomorphic(back.to_surface(), X)


def test_tube_errors():
    with pytest.raises(InvalidSpec):
        tube(handle_surface(1, 1), TubeSpec("separating", ("F", "F")))
    with pytest.raises(InvalidSpec):
        tube(handle_surface(1, 1), TubeSpec(NONSEPARATING, ("G",)))


def test_formal_surface_of_plain_surface(hopf34):
    assert FormalSurface.of(hopf34["X2"]).to_surface() == hopf34["X2"]
