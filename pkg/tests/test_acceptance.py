from fractions import Fraction

import pytest

from rackbench import acceptance
from rackbench.catalog import CoveringDesc, build_covering, classify, covering_iso
from rackbench.hurwitz import orbit_of
from rackbench.racks import make_affine

_cache = {}


def result(k):
    if k not in _cache:
        _cache[k] = acceptance.CRITERIA[k]()
    return _cache[k]


def record(log, k, note=""):
    ok, _ = result(k)
    log[k] = (ok, note)
    return result(k)


def test_criterion_1_psl2z_classes(criteria_log):
    ok, d = record(criteria_log, 1, "18 classes, one per base graph")
    assert d["classes"] == 18 and not d["unmatched_graphs"] and not d["unmatched_spaces"]
    assert d["sizes"] == [1, 2, 3, 3, 4, 4, 6, 6, 6, 6, 7, 8, 9, 12, 12, 12, 18, 24]
    assert ok


def test_criterion_2_aff5_orbits(criteria_log):
    ok, d = record(criteria_log, 2, "(1,1,2) orbit is 6A^{4;0,0}, not 6A^{4;2,2}")
    assert d["orbit_sizes"] == {1: 5, 24: 5}
    assert d["simply_intersecting"]
    assert all(p["holds"] is not False for p in d["exception_predicates"])
    assert d["descriptors_112"] == ["6A^{4;0,0}", "6A^{4;3,1}"]


def test_criterion_2_orbit_is_6A_400():
    o = orbit_of(make_affine(5, 2), (1, 1, 2))
    assert covering_iso(build_covering(CoveringDesc.make("6A", 4, 0, 0)), o) is not None


@pytest.mark.xfail(strict=True, reason="the orbit has σ₁-fixed points (x,x,z); 6A^{4;2,2} has none")
def test_criterion_2_classification_as_stated():
    o = orbit_of(make_affine(5, 2), (1, 1, 2))
    assert str(classify(o)) == "6A^{4;2,2}"


def test_criterion_3_a5_orbit(criteria_log):
    ok, d = record(criteria_log, 3)
    assert (d["orbit_size"], d["classification"], d["identity_holds"]) == (20, "4A^{5;3,2}", True)
    assert ok


def test_criterion_4_weights(criteria_log):
    ok, d = record(criteria_log, 4)
    assert d["omega"] == {"4A^{5;3,2}": "3/10", "6A^{4;2,2}": "7/24", "12C^{1;0,0,0}": "1/3"}
    assert d["table"][0] == ["1", "1/3", "11/24", "1/2"]
    assert ok


def test_criterion_5_theorem_and_necessity(criteria_log):
    ok, d = record(criteria_log, 5, "stated label conditions are not sufficient for 8A, 9A, 12A, 24A")
    assert d["theorem_and_necessity"] and not d["failures"]
    assert d["items"] == 18 * 8


@pytest.mark.xfail(strict=True, reason="9A b≡1 (N=5,7) and unlabelled 8A/12A/24A pass the stated "
                                       "conditions without simply intersecting cycles")
def test_criterion_5_constraints_agree():
    _, d = result(5)
    assert not d["not_sufficient"]


def test_criterion_6_7A(criteria_log):
    ok, d = record(criteria_log, 6)
    assert d["coverings"] == ["7A^{7;2,4,3}"]
    assert d["plague"] == 13 and d["ratio"] == Fraction(13, 49) < d["omega"] == Fraction(47, 168)
    assert ok


def test_criterion_7_small_racks(criteria_log):
    ok, d = record(criteria_log, 7)
    assert d["D5"]["orbits"] == {1: 5, 24: 5}
    assert d["D7"]["orbits"] == {1: 7, 48: 7}
    assert d["Aff(7,2)"]["orbits"] == d["Aff(7,4)"]["orbits"] == {1: 7, 42: 1, 49: 6}
    for name, bounds in acceptance.TABLE_BOUNDS.items():
        for n, frac in d[name]["plague_fraction"].items():
            assert frac <= bounds[n]
    assert ok


def test_criterion_8_immunity_condition(criteria_log):
    ok, d = record(criteria_log, 8)
    assert (d["D7"]["lhs"], d["D7"]["passes"]) == (105, False)
    assert (d["Aff(7,2)"]["lhs"], d["Aff(7,2)"]["passes"]) == (106, False)
    assert (d["Aff(7,4)"]["lhs"], d["Aff(7,4)"]["passes"]) == (106, False)
    assert (d["D5"]["lhs"], d["D5"]["rhs"], d["D5"]["passes"]) == (40, 40, True)
    assert ok


def test_criterion_9_aff5_kernels(criteria_log):
    ok, d = record(criteria_log, 9)
    for name in ("Aff(5,2)", "Aff(5,3)"):
        assert d[name]["minus_one"] == [8] * 5 and d[name]["total"] == 40
        assert all(max(v["blocks24"]) <= 5 for v in d[name]["others"].values())
    assert ok


def test_criterion_10_d5_kernels(criteria_log):
    ok, d = record(criteria_log, 10)
    assert d["totals"] == {0: 10, 1: 35}
    assert ok


def test_criterion_11_inequalities(criteria_log):
    ok, d = record(criteria_log, 11)
    assert d["dropped"] == [(3, 5), (5, 4)]
    assert d["shapes"] == 18 and d["size_bound"] == 33
    assert ok


def test_criterion_12_property_suites(criteria_log):
    ok, d = record(criteria_log, 12)
    assert not d["axiom_failures"] and not d["brute_force_failures"] and not d["zm_failures"]
    assert d["brute_force_spaces"] > 0
    assert ok
