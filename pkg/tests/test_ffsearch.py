import random

import pytest

import oracles
from conftest import random_map
from planeram.errors import BudgetExceeded
from planeram.ffsearch import (FiberCensus, SearchJob, candidate_lifts, completely_ramified_points,
                               default_primes, family_maps, ff_fiber_census, lift_candidates,
                               reduce_map, run_search)
from planeram.polycore import BadReduction
from planeram.projmap import ProjectivePoint, compose, map_to_json, power_map, validate
from planeram.ramify import fiber

COORD = {ProjectivePoint(1, 0, 0), ProjectivePoint(0, 1, 0), ProjectivePoint(0, 0, 1)}
COORD_MOD = {(1, 0, 0), (0, 1, 0), (0, 0, 1)}


def _nonzero(table):
    return {k: v for k, v in table.items() if v}


# ---------------------------------------------------------------------------
# census

def test_census_over_prime_field():
    c = ff_fiber_census(reduce_map(power_map(2), 5), 1)
    assert c.points_evaluated == 31
    for P in COORD:
        assert c.count(P) == 1
    assert c.count(ProjectivePoint(1, 1, 1)) == 4
    assert _nonzero(c.as_table()) == oracles.brute_force_fiber_counts(power_map(2), 5)


def test_census_over_quadratic_extension():
    c = ff_fiber_census(reduce_map(power_map(2), 5), 2)
    assert c.points_evaluated == 651
    assert c.candidates() == COORD_MOD
    assert _nonzero(c.as_table()) == oracles.brute_force_extension_counts(power_map(2), 5)


@pytest.mark.parametrize("seed", range(4))
def test_census_matches_brute_force_on_random_maps(seed):
    f = random_map(random.Random(seed), 2)
    for p in (7, 11):
        try:
            fmap = reduce_map(f, p)
            c1, c2 = ff_fiber_census(fmap, 1), ff_fiber_census(fmap, 2)
        except BadReduction:
            continue
        assert _nonzero(c1.as_table()) == oracles.brute_force_fiber_counts(f, p)
        assert _nonzero(c2.as_table()) == oracles.brute_force_extension_counts(f, p)
        assert c2.points_evaluated == (p * p) ** 2 + p * p + 1
        assert int(c1.counts.sum()) == c1.points_evaluated


def test_identity_has_singleton_fibres():
    c = ff_fiber_census(reduce_map(power_map(1), 7), 1)
    assert set(c.counts.tolist()) == {1}


def test_census_index_round_trip():
    p = 7
    for i in range(p * p + p + 1):
        assert FiberCensus.index(FiberCensus.point(i, p), p) == i


def test_census_budget():
    with pytest.raises(BudgetExceeded):
        ff_fiber_census(reduce_map(power_map(2), 5), 2, budget=100)


def test_bad_reduction_detected():
    f = validate("x^2", "y^2", "11*z^2 + x*y")
    with pytest.raises(BadReduction):
        ff_fiber_census(reduce_map(f, 11), 1)
    rep = completely_ramified_points(f, [11, 13, 17])
    assert rep.skipped_primes == (11,)
    assert set(rep.verified) == COORD


# ---------------------------------------------------------------------------
# lifting

def _candidates(f, primes):
    return {p: ff_fiber_census(reduce_map(f, p), 2).candidates() for p in primes}


def test_lift_power_map_small_primes():
    f = power_map(2)
    assert set(lift_candidates(f, _candidates(f, [5, 7]))) == COORD


def test_lift_needs_two_primes():
    with pytest.raises(ValueError):
        lift_candidates(power_map(2), _candidates(power_map(2), [5]))
    with pytest.raises(ValueError):
        completely_ramified_points(power_map(2), [11])


def test_map_without_completely_ramified_points():
    f = validate("x^2 + y*z", "y^2 + x*z", "z^2 + x*y + x^2")
    rep = completely_ramified_points(f)
    assert rep.verified == ()
    for P in rep.lifted:
        assert not fiber(f, P).completely_ramified


def test_lifts_are_verified_exactly():
    f = random_map(random.Random(8), 2)
    cens = _candidates(f, default_primes(2))
    lifted = candidate_lifts(cens, 3)
    kept = lift_candidates(f, cens, 3)
    assert set(kept) <= set(lifted)
    assert all(fiber(f, P).completely_ramified for P in kept)


def test_no_false_negatives_over_corpus(maps):
    for name, (f, cr) in maps.items():
        for p in default_primes(f.m, 3):
            try:
                c = ff_fiber_census(reduce_map(f, p), 2)
            except BadReduction:
                continue
            for P in cr:
                assert c.count(P) == 1, (name, p, str(P))


def test_default_primes():
    assert default_primes(2) == [11, 13]
    assert all(p > 32 for p in default_primes(4, 4))


# ---------------------------------------------------------------------------
# searches

def test_power_family():
    rep = run_search(SearchJob("power", degrees=(2, 3, 4)))
    assert rep.complete and len(rep.records) == 3
    for r in rep.records:
        assert set(r.verified_points) == COORD
        assert r.constraints["clean"] and not r.discovery


def test_perturbed_family_single_prime():
    rep = run_search(SearchJob("perturbed", degrees=(2,), primes=(101,)))
    assert rep.complete and len(rep.records) == 3
    assert all(len(r.verified_points) <= 9 for r in rep.records)
    assert all(set(r.verified_points) == COORD for r in rep.records)


def test_composition_family():
    job = SearchJob("composition", components=(map_to_json(power_map(2)),))
    rep = run_search(job)
    (r,) = rep.records
    assert r.m == 4 and set(r.verified_points) == COORD
    assert compose(power_map(2), power_map(2)) == power_map(4)


def test_search_is_deterministic():
    job = SearchJob("perturbed", degrees=(3,), box=(0, 1), max_maps=3, seed=7)
    assert family_maps(job) == family_maps(job)
    assert run_search(job).to_json() == run_search(job).to_json()


def test_search_budget_keeps_partial_report():
    # m = 2 at p = 11, 13 needs 43494 points, m = 3 far more
    job = SearchJob("power", degrees=(2, 3), budget=100_000)
    with pytest.raises(BudgetExceeded) as exc:
        run_search(job)
    partial = exc.value.partial
    assert partial is not None and not partial.complete
    assert len(partial.records) == 1


def test_job_validation_and_json():
    with pytest.raises(ValueError):
        SearchJob("power", degrees=(2,), primes=(7, 11))
    with pytest.raises(ValueError):
        SearchJob("power", degrees=(2,), budget=0)
    with pytest.raises(ValueError):
        SearchJob("powers")
    with pytest.raises(ValueError):
        SearchJob("power", degrees=(1,))
    job = SearchJob("perturbed", degrees=(2, 3), box=(-1, 1), primes=(53, 59), seed=3)
    assert SearchJob.from_json(job.to_json()) == job
