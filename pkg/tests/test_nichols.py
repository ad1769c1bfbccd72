import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from rackbench.automaton import immunity_report
from rackbench.catalog import CoveringDesc, classify
from rackbench.cyclotomic import CycScalar, prime_for, rank_exact, rank_mod_p
from rackbench.hurwitz import decompose_cube, orbit_of
from rackbench.nichols import (CocycleModule, NicholsError, affine_group_model, affine_model_for,
                               braid_equation_ok, classification_pipeline, constant_cocycle,
                               cubic_kernel_block, cubic_matrix_exact, cubic_matrix_mod_p,
                               full_cubic_kernel, immunity_necessary_condition, induced_cocycle,
                               k_inequality_report, k_solution_enumeration, many_cubic_report,
                               threshold, validate_cocycle)
from rackbench.racks import make_affine, make_dihedral, make_trivial

AFF52 = make_affine(5, 2)


def cocycle_oracle(t, value):
    # q(x, y▷z) q(y, z) = q(x▷y, x▷z) q(x, z) with complex values
    r = range(t.size)
    return all(abs(value(x, t.op[y][z]) * value(y, z) - value(t.op[x][y], t.op[x][z]) * value(x, z))
               < 1e-9 for x in r for y in r for z in r)


def operator_oracle(c):
    # 1 + c₁₂ + c₁₂c₂₃ on V⊗V⊗V as a dense complex matrix, built from scratch
    t, d = c.rack, c.rack.size
    z = np.exp(2j * np.pi / c.n)
    idx = lambda x, y, w: (x * d + y) * d + w
    n = d ** 3
    c12 = np.zeros((n, n), dtype=complex)
    c23 = np.zeros((n, n), dtype=complex)
    for x, y, w in itertools.product(range(d), repeat=3):
        c12[idx(t.op[x][y], x, w), idx(x, y, w)] = z ** c.q[x][y]
        c23[idx(x, t.op[y][w], y), idx(x, y, w)] = z ** c.q[y][w]
    return np.eye(n) + c12 + c12 @ c23, c12, c23


def kernel_oracle(c):
    M = operator_oracle(c)[0]
    return M.shape[0] - np.linalg.matrix_rank(M, tol=1e-8)


# -- cocycles -------------------------------------------------------------------------------

def test_constant_cocycles():
    for t in (AFF52, make_dihedral(5), make_trivial(3)):
        for v in (1, -1, (3, 1)):
            c = constant_cocycle(t, v)
            assert validate_cocycle(c)
    with pytest.raises(NicholsError):
        constant_cocycle(AFF52, 2)
    assert constant_cocycle(AFF52, CycScalar.zeta(4, 3)).q[0][0] == 3


def test_perturbed_cocycle_rejected():
    c = constant_cocycle(AFF52, -1)
    q = [list(r) for r in c.q]
    q[1][2] = 0
    assert not validate_cocycle(CocycleModule(AFF52, 2, q))


@pytest.mark.parametrize("q,alpha", [(5, 2), (5, 3), (5, 4), (7, 3), (7, 2), (3, 2)])
def test_induced_cocycles(q, alpha):
    gm = affine_group_model(q, alpha)
    assert gm.rack.op == make_affine(q, alpha).op
    assert gm.n0 == next(k for k in range(1, q) if pow(alpha, k, q) == 1)
    for k in range(gm.n0):
        c = induced_cocycle(gm, k)
        z = np.exp(2j * np.pi / c.n)
        assert cocycle_oracle(c.rack, lambda x, y: z ** c.q[x][y])
        assert {c.q[x][x] for x in range(q)} == {k % c.n}


def test_affine_model_examples():
    assert affine_group_model(7, 3).n0 == 6
    gm = affine_group_model(5, 2)
    assert induced_cocycle(gm, 2).q[0][0] == 2 and gm.n0 == 4
    assert induced_cocycle(gm, 0).q == constant_cocycle(AFF52, 1).q
    with pytest.raises(NicholsError):
        affine_group_model(5, 2, m=6)
    assert affine_model_for(make_dihedral(5)).n0 == 2
    assert affine_model_for(make_trivial(3)) is None


# -- kernels -----------------------------------------------------------------------------

def test_kernel_values_aff5():
    gm = affine_group_model(5, 2)
    o = orbit_of(AFF52, (1, 1, 2))
    assert o.n == 24
    assert cubic_kernel_block(induced_cocycle(gm, 2), o) == 8
    for k in (0, 1, 3):
        assert cubic_kernel_block(induced_cocycle(gm, k), o) <= 5
    # singleton: 1 − 1 + 1
    assert cubic_kernel_block(constant_cocycle(AFF52, -1), orbit_of(AFF52, (0, 0, 0))) == 0


def test_kernel_root_of_unity_cube():
    c = constant_cocycle(make_trivial(1), (3, 1))
    rep = many_cubic_report(c)
    assert rep["kernel_total"] == 1 and rep["threshold"] == 0 and rep["holds"]


@pytest.mark.parametrize("c", [
    constant_cocycle(make_trivial(2), -1), constant_cocycle(make_dihedral(3), -1),
    constant_cocycle(make_dihedral(3), 1), constant_cocycle(make_dihedral(5), -1),
    induced_cocycle(affine_group_model(5, 2), 1), induced_cocycle(affine_group_model(5, 2), 2),
    induced_cocycle(affine_group_model(5, 3), 2), induced_cocycle(affine_group_model(3, 2), 1)],
    ids=lambda c: "%s-%s" % (c.rack.name, c.provenance))
def test_block_additivity(c):
    rep = many_cubic_report(c)
    assert sum(b for _, b in rep["blocks"]) == rep["kernel_total"]
    assert full_cubic_kernel(c) == rep["kernel_total"] == kernel_oracle(c)


@pytest.mark.parametrize("c", [constant_cocycle(make_dihedral(5), -1),
                               induced_cocycle(affine_group_model(5, 2), 1)],
                         ids=lambda c: c.provenance)
def test_braid_equation(c):
    for o in decompose_cube(c.rack):
        assert braid_equation_ok(c, o)
    _, c12, c23 = operator_oracle(c)
    assert np.allclose(c12 @ c23 @ c12, c23 @ c12 @ c23)


def test_braid_equation_detects_bad_table():
    q = [[0] * 5 for _ in range(5)]
    q[1][2] = 1
    c = CocycleModule(AFF52, 2, q)
    assert not all(braid_equation_ok(c, o) for o in decompose_cube(AFF52))


def test_exact_and_modular_ranks_agree():
    gm = affine_group_model(5, 2)
    for k in range(4):
        c = induced_cocycle(gm, k)
        for o in decompose_cube(AFF52):
            M, p = cubic_matrix_mod_p(c, o)
            assert rank_exact(cubic_matrix_exact(c, o)) == rank_mod_p(M, p)
            M2, p2 = cubic_matrix_mod_p(c, o, prime_for(4, 10007))
            assert rank_mod_p(M2, p2) == rank_mod_p(M, p)


def test_many_cubic_reports():
    gm = affine_group_model(5, 2)
    rep = many_cubic_report(induced_cocycle(gm, 2))
    assert (rep["kernel_total"], rep["threshold"], rep["holds"]) == (40, 40, True)
    assert sorted(rep["blocks"]) == [(1, 0)] * 5 + [(24, 8)] * 5
    assert not many_cubic_report(induced_cocycle(gm, 1))["holds"]
    assert many_cubic_report(induced_cocycle(gm, 2), workers=2)["kernel_total"] == 40
    for v in (1, -1):
        assert many_cubic_report(constant_cocycle(make_dihedral(5), v))["kernel_total"] < 40


def test_kernel_below_plague_size():
    # a classified orbit's kernel never exceeds its plague count
    for t in (AFF52, make_affine(5, 3), make_dihedral(5)):
        gm = affine_model_for(t)
        for o in decompose_cube(t):
            cl = classify(o)
            rep = immunity_report(o, cl if isinstance(cl, CoveringDesc) else None)
            cap = math.floor(rep["upper"] * o.n)
            for k in range(gm.n0):
                assert cubic_kernel_block(induced_cocycle(gm, k), o) <= cap


# -- counting arguments -----------------------------------------------------------------------

def test_threshold():
    assert threshold(5) == 40 and threshold(7) == 112 and threshold(1) == 0


def test_immunity_condition_examples():
    r = immunity_necessary_condition(make_dihedral(7), {1: 1, 48: Fraction(14, 48)})
    assert (r["lhs"], r["rhs"], r["passes"]) == (105, 112, False)
    r = immunity_necessary_condition(make_affine(7, 2), {1: 1, 42: Fraction(9, 42),
                                                         49: Fraction(15, 49)})
    assert (r["lhs"], r["passes"]) == (106, False)
    r = immunity_necessary_condition(make_dihedral(5), {1: 1, 24: Fraction(7, 24)})
    assert (r["lhs"], r["rhs"], r["passes"]) == (40, 40, True)
    with pytest.raises(NicholsError):
        immunity_necessary_condition(make_dihedral(5), [1, 2])


def test_k_inequality_examples():
    r = k_inequality_report((0, 4), True)
    assert (r["value"], r["bound"], r["satisfied"]) == (17, 49, True)
    assert not k_inequality_report((0, 7), True)["satisfied"]
    assert k_inequality_report((0, 0), True)["value"] == 25
    from rackbench.racks import k_stats
    assert k_inequality_report(k_stats(AFF52), True)["satisfied"]


# ranges for each k₃′, frozen from the published list
WITH = {2: range(0, 8), 3: range(0, 7), 4: range(0, 6), 5: range(0, 4), 6: range(0, 1)}


def test_k_enumeration_with():
    got = k_solution_enumeration("with")
    expect = {(a, b) for b, r in WITH.items() for a in r if a != 1}
    assert got == expect
    assert max(a + b for a, b in got) <= 9


def test_k_enumeration_without():
    got = k_solution_enumeration("without")
    expect = {(a, b) for b, r in WITH.items() for a in r if a != 1} - {(5, 4), (3, 5)}
    assert got == expect
    with pytest.raises(NicholsError):
        k_solution_enumeration("sometimes")


# -- pipeline ----------------------------------------------------------------------------

def test_pipeline_on_small_database():
    racks = [make_dihedral(5), make_dihedral(7), make_affine(7, 2), make_affine(7, 4),
             make_affine(5, 2), make_affine(5, 3), make_affine(7, 3), make_trivial(2)]
    rep = {e["rack"]: e for e in classification_pipeline(racks)}
    assert rep["Aff(7,3)"]["stage"] == "braided"
    assert rep["T2"]["stage"] == "decomposable"
    for name in ("D7", "Aff(7,2)", "Aff(7,4)"):
        assert rep[name]["stage"] == "immunity"
    assert rep["D5"]["stage"] == "kernel"
    for name in ("Aff(5,2)", "Aff(5,3)"):
        e = rep[name]
        assert e["stage"] == "survivor"
        assert [k["kernel_total"] for k in e["kernels"]] == [25, 25, 40, 25]
