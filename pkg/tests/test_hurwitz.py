from collections import Counter

import pytest

from rackbench import perms
from rackbench.catalog import CoveringDesc, Unclassified, build_covering, classify, covering_iso
from rackbench.hurwitz import (B3Space, decompose_cube, enumerate_psl2z_spaces,
                               extract_covering, orbit_of, product_invariant_check,
                               quotient_mod_delta, sigma_cycles, simply_intersecting)
from rackbench.racks import make_affine, make_conjugation, make_dihedral

RACKS = [make_affine(5, 2), make_dihedral(5), make_dihedral(7), make_affine(7, 2)]


def a5_rack():
    g = [perms.parse_cycles("(1 2 3)", 5), perms.parse_cycles("(1 2 3 4 5)", 5)]
    t = make_conjugation(g, perms.parse_cycles("(1 2 3 4 5)", 5))
    idx = {e: i for i, e in enumerate(t.elements)}
    trip = tuple(idx[perms.parse_cycles(c, 5)]
                 for c in ("(1 2 3 4 5)", "(1 2 4 5 3)", "(1 4 3 5 2)"))
    return t, trip


def test_orbit_sizes():
    assert orbit_of(make_affine(5, 2), (1, 1, 2)).n == 24
    assert orbit_of(make_affine(5, 2), (3, 3, 3)).n == 1
    t, trip = a5_rack()
    assert orbit_of(t, trip).n == 20


def test_decoration_follows_hurwitz_moves():
    t = make_affine(5, 2)
    o = orbit_of(t, (1, 1, 2))
    index = {v: i for i, v in enumerate(o.decoration)}
    for p, (x, y, z) in enumerate(o.decoration):
        assert o.s1[p] == index[(t.op[x][y], x, z)]
        assert o.s2[p] == index[(x, t.op[y][z], y)]


@pytest.mark.parametrize("t", RACKS, ids=lambda t: t.name)
def test_decomposition_partitions_cube(t):
    orbs = decompose_cube(t)
    seen = set()
    for o in orbs:
        assert o.braid_ok()
        assert o.delta_central()
        assert product_invariant_check(o)
        assert simply_intersecting(o)
        for v in o.decoration:
            assert v not in seen
            seen.add(v)
    assert len(seen) == t.size ** 3


def test_decomposition_sizes():
    sizes = lambda t: dict(Counter(o.n for o in decompose_cube(t)))
    assert sizes(make_affine(5, 2)) == {1: 5, 24: 5}
    assert sizes(make_dihedral(7)) == {1: 7, 48: 7}
    assert sizes(make_affine(7, 2)) == {1: 7, 42: 1, 49: 6}


def test_sigma_cycles():
    t, trip = a5_rack()
    o = orbit_of(t, trip)
    # 3-cycles, plus cycles of length |⟨1−b⟩| = 5 through v3 and v4
    assert sorted(len(c) for c in sigma_cycles(o, 1)) == [3, 3, 3, 3, 3, 5]
    assert sorted(len(c) for c in sigma_cycles(o, 2)) == [3, 3, 3, 3, 3, 5]
    single = orbit_of(make_affine(5, 2), (0, 0, 0))
    assert [len(c) for c in sigma_cycles(single, 1)] == [1]


def test_not_simply_intersecting():
    # a 1A-shaped covering with N = 2: the labels violate 3a ≡ −1, the cycles meet twice
    s1 = (1, 0)
    s2 = (1, 0)
    assert not simply_intersecting(B3Space(s1, s2))


def test_quotients():
    q = quotient_mod_delta(orbit_of(make_affine(5, 2), (1, 1, 2)))
    assert (q.space.n, q.N) == (6, 4)
    t, trip = a5_rack()
    q = quotient_mod_delta(orbit_of(t, trip))
    assert (q.space.n, q.N) == (4, 5)
    q = quotient_mod_delta(orbit_of(make_affine(5, 2), (2, 2, 2)))
    assert (q.space.n, q.N) == (1, 1)


def test_extract_covering():
    t, trip = a5_rack()
    assert str(extract_covering(orbit_of(t, trip))) == "4A^{5;3,2}"
    d5 = [o for o in decompose_cube(make_dihedral(5)) if o.n == 24]
    assert all(isinstance(extract_covering(o), Unclassified) for o in d5)


@pytest.mark.parametrize("t", [make_affine(5, 2), make_affine(5, 3)], ids=lambda t: t.name)
def test_round_trip(t):
    for o in decompose_cube(t):
        c = classify(o)
        if isinstance(c, CoveringDesc):
            assert covering_iso(build_covering(c), o) is not None


def test_psl2z_enumeration():
    spaces = enumerate_psl2z_spaces(24, 4)
    assert sorted(s.n for s in spaces) == [1, 2, 3, 3, 4, 4, 6, 6, 6, 6, 7, 8, 9, 12, 12,
                                           12, 18, 24]
    assert len(enumerate_psl2z_spaces(1, 4)) == 1
    small = enumerate_psl2z_spaces(12, 3)
    assert all(s.max_xy_cycle() <= 3 for s in small)
    full = [s for s in spaces if s.n <= 12 and s.max_xy_cycle() <= 3]
    assert len(small) == len(full)


def test_psl2z_relations():
    for s in enumerate_psl2z_spaces(12, 4):
        assert s.relations_ok() and s.is_transitive()
