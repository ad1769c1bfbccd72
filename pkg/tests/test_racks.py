import itertools
import random

import pytest

from rackbench import perms
from rackbench.racks import (RackError, RackTable, corollary_size_bound, describe,
                             disjoint_union, inner_group, is_faithful, is_indecomposable,
                             iso_racks, k_stats, make_affine, make_conjugation, make_dihedral,
                             make_trivial, profile, profile_admissible, shape_string,
                             size_bound, survivor_profiles, validate)


def conj_table_oracle(elements):
    # independent: x ▷ y = x y x⁻¹ with products read left to right
    idx = {e: i for i, e in enumerate(elements)}

    def mul(a, b):  # apply a, then b
        return tuple(b[a[i]] for i in range(len(a)))

    def inv(a):
        out = [0] * len(a)
        for i, v in enumerate(a):
            out[v] = i
        return tuple(out)
    return [[idx[mul(mul(x, y), inv(x))] for y in elements] for x in elements]


def test_affine_formula():
    t = make_affine(5, 2)
    assert t.op[0][1] == 2
    for x, y in itertools.product(range(5), repeat=2):
        assert t.op[x][y] == ((1 - 2) * x + 2 * y) % 5


def test_affine_rejects_bad_alpha():
    with pytest.raises(RackError):
        make_affine(5, 1)
    with pytest.raises(RackError):
        make_affine(6, 2)


def test_dihedral():
    t = make_dihedral(5)
    assert t.op[1][2] == 0
    assert t.op == make_affine(5, 4).op
    assert validate(t)["is_crossed_set"]
    with pytest.raises(RackError):
        make_dihedral(4)


def test_conjugation_class_sizes():
    s3 = [perms.parse_cycles("(1 2)", 3), perms.parse_cycles("(1 2 3)", 3)]
    t = make_conjugation(s3, perms.parse_cycles("(1 2)", 3))
    assert t.size == 3
    assert iso_racks(t, make_dihedral(3)) is not None
    a5 = [perms.parse_cycles("(1 2 3)", 5), perms.parse_cycles("(1 2 3 4 5)", 5)]
    assert make_conjugation(a5, perms.parse_cycles("(1 2 3 4 5)", 5)).size == 12
    assert make_conjugation(a5, perms.identity(5)).size == 1


def test_conjugation_matches_left_to_right_products():
    a5 = [perms.parse_cycles("(1 2 3)", 5), perms.parse_cycles("(1 2 3 4 5)", 5)]
    t = make_conjugation(a5, perms.parse_cycles("(1 2 3 4 5)", 5))
    assert [list(r) for r in t.op] == conj_table_oracle(t.elements)
    assert validate(t)["is_crossed_set"]


def test_validate_flags():
    assert validate(make_affine(5, 2)) == {"is_rack": True, "is_quandle": True,
                                           "is_crossed_set": True}
    triv = make_trivial(3)
    f = validate(triv)
    assert f["is_rack"] and f["is_quandle"]
    bad = RackTable(2, [[0, 0], [0, 1]])
    assert not validate(bad)["is_rack"]


def test_inner_group_orders():
    assert inner_group(make_dihedral(5)).order == 10
    assert inner_group(make_trivial(1)).order == 1
    assert inner_group(make_affine(5, 2)).order == 20


def test_indecomposable():
    assert is_indecomposable(make_affine(5, 2))
    assert is_indecomposable(make_dihedral(7))
    assert not is_indecomposable(disjoint_union(make_trivial(1), make_trivial(1)))


def test_profiles():
    assert profile(make_affine(5, 2)).as_dict() == {1: 1, 4: 1}
    assert profile(make_dihedral(5)).as_dict() == {1: 1, 2: 2}
    assert profile(make_trivial(4)).as_dict() == {1: 4}


def alternating_oracle(t, x, y):
    # length of the shortest alternating word x▷(y▷(x▷…)) equal to y
    for n in range(1, 200):
        letters = [x if i % 2 == 0 else y for i in range(n)]
        v = letters[-1]
        for a in reversed(letters[:-1]):
            v = t.op[a][v]
        if v == y:
            return n
    raise AssertionError("no period")


@pytest.mark.parametrize("t", [make_affine(5, 2), make_dihedral(7), make_affine(7, 3),
                               make_affine(7, 2), make_dihedral(5)])
def test_kstats_against_oracle(t):
    ks = k_stats(t, check_all=True)
    expect = {}
    for y in range(1, t.size):
        n = alternating_oracle(t, 0, y)
        expect[n] = expect.get(n, 0) + 1
    assert ks.k == expect
    assert 1 + sum(ks.k.values()) == t.size


def test_kstats_examples():
    assert k_stats(make_dihedral(7)).kn(7) == 6
    ks = k_stats(make_affine(5, 2))
    assert (ks.kn(2), ks.kn(3), ks.kn(4)) == (0, 0, 4)
    assert k_stats(make_trivial(1)).k == {}


def test_size_bound():
    assert size_bound(profile(make_dihedral(5)), 4) == 9
    assert size_bound(profile(make_trivial(1)), 0) == 1
    assert corollary_size_bound(4) == 9


def test_admissible_examples():
    assert not profile_admissible((2, 3))
    assert profile_admissible((2,))
    assert profile_admissible((2, 2, 4))


EIGHTEEN = ["1^a 2", "1^a 3", "1^a 2^2", "1^a 4", "1^a 5", "1^a 2^3", "1^a 2 4",
            "1^a 3^2", "1^a 6", "1^a 7", "1^a 2^4", "1^a 2^2 4", "1^a 2 6", "1^a 4^2",
            "1^a 8", "1^a 3^3", "1^a 3 6", "1^a 9"]


def test_survivor_profiles():
    got = [shape_string(s) for s in survivor_profiles(9)]
    assert sorted(got) == sorted(EIGHTEEN)
    assert [shape_string(s) for s in survivor_profiles(2)] == ["1^a 2"]
    five = [shape_string(s) for s in survivor_profiles(5)]
    assert "1^a 5" in five and "1^a 2 3" not in five
    # 2³ moves six points
    assert "1^a 2^3" not in five
    assert "1^a 2^3" in [shape_string(s) for s in survivor_profiles(6)]


def test_faithful():
    assert is_faithful(make_affine(5, 2))
    assert not is_faithful(make_trivial(2))
    assert is_faithful(make_dihedral(7))


def test_iso():
    assert iso_racks(make_affine(5, 2), make_affine(5, 3)) is None
    t = make_affine(7, 3)
    assert iso_racks(t, t) is not None


def test_iso_random_relabel():
    rng = random.Random(3)
    t = make_affine(7, 2)
    p = list(range(7))
    rng.shuffle(p)
    inv = [0] * 7
    for i, v in enumerate(p):
        inv[v] = i
    op = [[p[t.op[inv[x]][inv[y]]] for y in range(7)] for x in range(7)]
    u = RackTable(7, op)
    f = iso_racks(t, u)
    assert f is not None
    assert all(f[t.op[x][y]] == u.op[f[x]][f[y]] for x in range(7) for y in range(7))


CORPUS = [make_affine(5, 2), make_affine(5, 3), make_dihedral(3), make_dihedral(5),
          make_dihedral(7), make_affine(7, 2), make_affine(7, 3), make_affine(7, 4),
          make_affine(7, 5), make_affine(11, 2), make_affine(13, 4)]


@pytest.mark.parametrize("t", CORPUS, ids=lambda t: t.name)
def test_corpus_invariants(t):
    assert validate(t)["is_crossed_set"]
    ks = k_stats(t, check_all=True)
    p = profile(t)
    for x in range(t.size):
        assert sum(1 for y in range(t.size) if t.op[x][y] == y) == 1 + ks.kn(2)
    assert t.size <= size_bound(p, ks.kprime(2))
    assert profile_admissible(p)
    assert describe(t)["indecomposable"]
