import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_form
from planeram.certify import (BoundParams, Component, ConfigPoint, CurveSlice, InapplicablePart,
                              InvariantViolation, MultiplicityConfig, Prop2Conclusion, SlicePoint,
                              c_lower_bound, corollary_checks, ep_condition, genus_bound,
                              hurwitz_contradiction, lemma5_check, mc_exceeds_N,
                              multiplicity_config_from_map, prop2_inequality, prop3_reduction_identity,
                              prop3_star, prop4_bound, prop4_dimension_constant, prop5_certify,
                              remark2_sweep, theorem1_cubic_multiplicity, theorem1_identity,
                              theorem1_ten_cubics, theorem2_bound)
from planeram.errors import TheoremViolation
from planeram.polycore import HomogeneousForm
from planeram.projmap import (CommonZero, DegreeMismatch, ProjectivePoint, compose, linear_map,
                              perturbed_power_map, power_map)

COORD = [ProjectivePoint(1, 0, 0), ProjectivePoint(0, 1, 0), ProjectivePoint(0, 0, 1)]


# ---------------------------------------------------------------------------
# curves through completely ramified points

def test_hurwitz_examples():
    for d in range(1, 6):
        h = hurwitz_contradiction(1, d)
        assert h.lhs == h.rhs == d * (d - 3) and h.holds
    h = hurwitz_contradiction(2, 1)
    assert (h.lhs, h.rhs, h.holds) == (-2, 1, False)
    h = hurwitz_contradiction(2, 3)
    assert (h.lhs, h.rhs, h.holds) == (18, 27, False)


def test_hurwitz_sweep():
    for m in range(1, 51):
        for d in range(1, 51):
            assert hurwitz_contradiction(m, d).holds == (m == 1)


def test_prop2_cases():
    assert prop2_inequality(2, 2, 1) == (True, Prop2Conclusion.EXCLUDED_ELSEWHERE)
    assert prop2_inequality(2, 2, 2) == (False, Prop2Conclusion.FAILS)
    assert prop2_inequality(3, 1, 1) == (False, Prop2Conclusion.FAILS)
    with pytest.raises(ValueError):
        prop2_inequality(1, 1, 1)


def test_prop2_leaves_nothing_unexplained():
    for m in range(2, 12):
        for d in range(1, 12):
            for c in range(1, d * m + 1):
                holds, why = prop2_inequality(m, d, c)
                if holds:
                    assert why in (Prop2Conclusion.EXCLUDED_ELSEWHERE, Prop2Conclusion.NON_INTEGRAL)


# ---------------------------------------------------------------------------
# nine points

def test_theorem1_values():
    assert theorem1_cubic_multiplicity(2) == 4
    assert theorem1_cubic_multiplicity(3) == Fraction(26, 3)
    with pytest.raises(ValueError):
        theorem1_cubic_multiplicity(1)


def test_theorem1_identity_against_sympy():
    m, a = sp.symbols("m a")
    lhs = 9 * m ** 2 - 9 * m - 9 * a - (10 * m ** 2 - 10 - 12 * a)
    assert sp.expand(lhs - (3 * a - (m ** 2 + 9 * m - 10))) == 0
    assert theorem1_identity()


def test_ten_cubics():
    assert theorem1_ten_cubics(2) and theorem1_ten_cubics(10)
    assert not theorem1_ten_cubics(1)
    assert all(theorem1_ten_cubics(m) for m in range(2, 200))


# ---------------------------------------------------------------------------
# higher dimension

def test_prop3_reduction():
    assert prop3_reduction_identity()
    lhs, rhs, reduced = prop3_star(BoundParams(2, 3, 1, 2))
    assert (lhs, rhs, reduced) == (-2, -2, True)


def test_prop3_reduction_against_sympy():
    m, N, c, d = sp.symbols("m N c d", positive=True)
    M = m ** (N - 3)
    star = (-N + c + (N - 3) * m) * c * M - ((m * c / d) * M * d * (d - 3) + N * d * M * (m * c / d - 1))
    assert sp.simplify(star / M - (c ** 2 - N * c - (m * c * d - N * d))) == 0


def test_c_lower_bound():
    # md / (mN - N + 1)
    c = c_lower_bound(16, 4, 1)
    assert c == Fraction(16, 61)
    assert 16 * c > 4 and mc_exceeds_N(16, 4, 1)
    assert not prop3_star(BoundParams(16, 4, c, 1))[2]
    assert c_lower_bound(9, 3, 1) == Fraction(9, 25) and mc_exceeds_N(9, 3, 1)
    assert c_lower_bound(2, 3, 3) == Fraction(3, 2)
    assert c_lower_bound(2, 3, 0) == 0


@given(st.integers(3, 12), st.integers(1, 6))
@settings(max_examples=60, deadline=None)
def test_mc_exceeds_N_for_large_m(N, d):
    for m in (N * N, N * N + 1, 2 * N * N):
        assert mc_exceeds_N(m, N, d)


def test_prop4_constants():
    assert prop4_bound(3) == 53
    assert prop4_dimension_constant(3) == 36
    assert all(prop4_dimension_constant(N) == 2 * N * N + 6 * N for N in range(3, 40))
    assert ep_condition(10, 3, 1, 3)
    with pytest.raises(ValueError):
        ep_condition(10, 3, 3, 3)


def test_remark2_sweep():
    rows = remark2_sweep()
    assert {r["N"] for r in rows} == set(range(3, 21))
    for r in rows:
        assert r["status"] in ("ep_applies", "no_conditions")
        if r["status"] == "ep_applies":
            assert r["tau_ok"] and r["t_ok"]


def test_theorem2():
    assert theorem2_bound(3) == (35, 3)
    assert theorem2_bound(4) == (63, 6)
    assert theorem2_bound(10) == (399, 45)
    with pytest.raises(ValueError):
        theorem2_bound(2)


# ---------------------------------------------------------------------------
# points of high multiplicity

def test_genus_bound():
    assert genus_bound(6, 3).value == 5
    assert genus_bound(6, 3).coarse == 8
    assert all(genus_bound(b, b).value == 1 for b in range(2, 20))
    for m in range(2, 11):
        g = genus_bound(3 * m * m - 3 * m, m * m - 1)
        assert g.value <= 8


def test_lemma5_reduces_to_part_a():
    slc = CurveSlice(1, 0, (SlicePoint(1), SlicePoint(1)))
    r = lemma5_check(slc, 6, 3)
    assert r.lhs == 6 - 3 * 2 and r.rhs == 0 and r.holds
    a = corollary_checks(slc, 6, 3, parts="a")["a"]
    assert a.bound == 2 and a.value == 2 and a.passed


def test_lemma5_zero_weight():
    slc = CurveSlice(2, 1, (SlicePoint(1, 0), SlicePoint(2, 0)))
    r = lemma5_check(slc, 7, 3)
    assert r.lhs == 14 and r.rhs == 4 and r.holds


def test_lemma5_power_map_slice():
    # B = (xyz)^2 for squaring, D = {x = 0} with a = 2, through two points of E_3
    slc = CurveSlice(1, 2, (SlicePoint(1, mult_B=4), SlicePoint(1, mult_B=4)))
    r = lemma5_check(slc, 6, 3, realizable=True)
    assert (r.lhs, r.rhs, r.holds) == (0, -2, True)


def test_lemma5_rejects_b_below_ad():
    with pytest.raises(InvariantViolation):
        lemma5_check(CurveSlice(2, 2, ()), 3, 2)


def test_lemma5_realizable_failure_is_loud():
    with pytest.raises(TheoremViolation):
        lemma5_check(CurveSlice(1, 0, tuple(SlicePoint(1) for _ in range(5))), 6, 3, realizable=True)


def test_corollary_part_c():
    slc = CurveSlice(3, 0, tuple(SlicePoint(2) for _ in range(4)))
    c = corollary_checks(slc, 12, 3, parts="c")["c"]
    assert c.applicable and c.value == 4 and c.bound == 12


def test_corollary_part_d_boundary_is_inapplicable():
    slc = CurveSlice(1, 1, (SlicePoint(1),))
    out = corollary_checks(slc, 6, 3)
    assert not out["d"].applicable and out["d"].passed is None
    with pytest.raises(InapplicablePart):
        corollary_checks(slc, 6, 3, parts="d")


def test_corollary_part_b_gate():
    slc = CurveSlice(1, 0, (SlicePoint(1),))
    with pytest.raises(InapplicablePart):
        corollary_checks(slc, 6, 3, parts="b")
    slc = CurveSlice(3, 1, (SlicePoint(1), SlicePoint(2)))
    out = corollary_checks(slc, 6, 3, parts="b")
    assert out["b"].value == 1 and out["b"].passed


def test_weights_are_checked():
    with pytest.raises(InvariantViolation):
        SlicePoint(1, Fraction(3, 2))
    with pytest.raises(InvariantViolation):
        SlicePoint(0)


@st.composite
def slices(draw):
    d = draw(st.integers(1, 4))
    a = draw(st.integers(0, 2))
    mults = draw(st.lists(st.integers(1, 3), max_size=6))
    return CurveSlice(d, a, tuple(SlicePoint(k) for k in mults))


@given(slices(), st.integers(2, 6), st.integers(0, 10))
@settings(max_examples=200, deadline=None)
def test_part_a_is_lemma5_with_unit_weight(slc, s, extra):
    b = slc.a * slc.d + extra
    if slc.a:
        return
    lem = lemma5_check(slc.with_weights([1] * len(slc.points)), b, s)
    a = corollary_checks(slc, b, s)["a"]
    # the lemma counts singular points with multiplicity, so it is the stronger
    if lem.holds:
        assert a.passed
    if all(p.smooth for p in slc.points):
        assert a.passed == lem.holds
    assert a.bound == Fraction(b * slc.d, s)


@given(slices(), st.integers(2, 6), st.integers(0, 10))
@settings(max_examples=200, deadline=None)
def test_part_d_from_its_weighted_lemma(slc, s, extra):
    # whenever the weighted lemma holds, q_reg/2 + q_sing <= bd/s follows
    b = slc.a * slc.d + extra
    if slc.q_reg >= slc.d ** 2 or not (slc.mu < slc.d ** 2 and 2 * slc.q_sing <= slc.mu):
        return
    d = slc.d
    pts = list(range(len(slc.points)))
    if slc.q_reg + slc.mu <= d * d:
        h = [Fraction(1, p.mult_D) for p in slc.points]
    else:
        t = Fraction(d * d - slc.q_reg, slc.mu)
        h = [Fraction(1) if p.smooth else t / p.mult_D for p in slc.points]
    if not lemma5_check(slc.with_weights(h), b, s).holds:
        return
    r = corollary_checks(slc, b, s)["d"]
    if slc.q_reg + slc.mu <= d * d:
        assert len(pts) <= Fraction(b * d, s)
    else:
        assert r.passed


# ---------------------------------------------------------------------------
# multiplicity configurations

def _lines_through_special(b, s):
    # a line of multiplicity s - 1 and b - s + 1 further lines each meeting it once
    n = b - s + 1
    comps = (Component(1, s - 1, "L0"),) + tuple(Component(1, 1, f"L{i}") for i in range(1, n + 1))
    points = {}
    for i in range(1, n + 1):
        on = [1] + [0] * n
        on[i] = 1
        points[f"P{i}"] = ConfigPoint(tuple(on), s)
    return MultiplicityConfig(b, s, comps, points, tuple(points))


def test_prop5_power_map():
    config = multiplicity_config_from_map(power_map(2), COORD)
    assert (config.b, config.s, config.N) == (6, 3, 3)
    rep = prop5_certify(config, realizable=True)
    assert rep.satisfied and rep.hypothesis_holds
    assert (rep.size, rep.bound) == (3, 35)


def test_prop5_counterexample_shape():
    config = _lines_through_special(12, 3)
    rep = prop5_certify(config)
    assert rep.size == 10 and not rep.hypothesis_holds
    assert not rep.hypothesis_detail[0]["ok"]


def test_prop5_empty():
    config = MultiplicityConfig(3, 2, (Component(3, 1),), {}, ())
    rep = prop5_certify(config, realizable=True)
    assert rep.satisfied and rep.size == 0


def test_prop5_violation_is_loud():
    # synthetic: a single sextic (degree > b/s, so no hypothesis) with 64 double points
    points = {f"P{i}": ConfigPoint((2,), 2) for i in range(64)}
    config = MultiplicityConfig(6, 2, (Component(6, 1),), points, tuple(points))
    rep = prop5_certify(config)
    assert rep.hypothesis_holds and not rep.satisfied
    with pytest.raises(TheoremViolation):
        prop5_certify(config, realizable=True)


def test_config_invariants():
    with pytest.raises(InvariantViolation):
        MultiplicityConfig(5, 3, (Component(1, 2),), {}, ())
    with pytest.raises(InvariantViolation):
        MultiplicityConfig(2, 3, (Component(1, 2),), {"P": ConfigPoint((1,))}, ("P",))
    with pytest.raises(InvariantViolation):
        MultiplicityConfig(2, 2, (Component(1, 2),), {}, ("P",))


def test_config_json_round_trip():
    config = _lines_through_special(8, 3)
    again = MultiplicityConfig.from_json(config.to_json())
    assert again == config
    assert prop5_certify(again).to_json() == prop5_certify(config).to_json()


def _invertible(rng):
    while True:
        try:
            return linear_map([[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)])
        except (CommonZero, DegreeMismatch):
            continue


def test_prop5_on_random_maps():
    rng = random.Random(55)
    done = 0
    while done < 50:
        m = 2 if done < 25 else 3
        g = HomogeneousForm({(0, 0, 0): rng.randint(-3, 3)}) if m == 2 else random_form(rng, 1, box=2)
        try:
            core = perturbed_power_map(m, g)
        except (CommonZero, DegreeMismatch):
            continue
        L1, L2 = _invertible(rng), _invertible(rng)
        f = compose(L1, compose(core, L2))
        config = multiplicity_config_from_map(f, [L1(P) for P in COORD])
        rep = prop5_certify(config, realizable=True)
        assert rep.satisfied and rep.size == 3
        done += 1
