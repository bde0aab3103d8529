import random

import pytest
from hypothesis import given, settings, strategies as st

from mbcalc import Attachment, boundary_surface, build, euler_sectors, random_surface
from mbcalc.boundary import characteristic_annuli, face_complex

from oracles import boundary_by_face_trace


def summary(X):
    return sorted((c.orientable, c.euler) for c in boundary_surface(X).components)


def test_theta_gives_three_tori(theta):
    report = boundary_surface(theta)
    assert [c.describe() for c in report.components] == ["torus"] * 3
    assert summary(theta) == boundary_by_face_trace(theta)


@pytest.mark.parametrize("name,count", [("X1", 1), ("X2", 2), ("X3", 2), ("X4", 3)])
def test_hopf_boundaries(hopf34, name, count):
    X = hopf34[name]
    report = boundary_surface(X)
    assert [c.describe() for c in report.components] == ["torus"] * count
    assert summary(X) == boundary_by_face_trace(X)


def test_characteristic_annuli(hopf34):
    annuli = characteristic_annuli(hopf34["X2"])
    assert [(a.branch, a.orbit, a.slope) for a in annuli] == [
        ("l1'", 0, (1, 0)), ("l1'", 1, (1, 0)), ("l1'", 2, (1, 0)), ("l2", 0, (4, 1))]


def test_every_curve_side_used_twice(hopf34):
    fc = face_complex(hopf34["X4"])
    assert set(fc.usage().values()) == {2}


def scrambled(seed):
    # sides chosen independently of signs: abstract complexes whose
    # neighbourhood boundary may be non-orientable
    X = random_surface(seed)
    rng = random.Random(seed)
    return build(X.branches, X.sectors,
                 [Attachment(a.branch, a.orbit, a.sector, a.circle, a.sign, rng.choice((1, -1)))
                  for a in X.attachments])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_euler_identity_and_face_trace(seed):
    for X in (random_surface(seed), scrambled(seed)):
        report = boundary_surface(X)
        assert report.euler == 2 * euler_sectors(X)
        assert summary(X) == boundary_by_face_trace(X)
        for c in report.components:
            assert c.euler == (2 - 2 * c.genus if c.orientable else 2 - c.genus)


def test_embedded_conventions_give_orientable_boundary():
    for seed in range(30):
        assert all(c.orientable for c in boundary_surface(random_surface(seed)).components)
