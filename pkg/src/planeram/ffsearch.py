"""Finite-field fibre census and the search for completely ramified points.

The census reduces a map mod p, evaluates it on every point of P^2(F_q)
for q = p or p^2 and counts preimages of each F_p-rational target.  A
rational completely ramified point reduces, at a prime of good reduction,
to a target with exactly one preimage, so the census yields candidates.
Candidates are lifted to small-height rational points and then decided by
the exact fibre computation; the census itself never certifies anything.
"""

from __future__ import annotations

import itertools
import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded, TheoremViolation
from .pointconf import PointConfiguration, configuration_constraints
from .polycore import BadReduction, HomogeneousForm, PrimeFieldPolynomial, _is_prime, monomials
from .projmap import (PlaneEndomorphism, ProjectivePoint, compose, map_to_json,
                      perturbed_power_map, power_map, small_points)
from .ramify import fiber

__all__ = [
    "FiniteFieldMap",
    "FiberCensus",
    "CRPointsReport",
    "SearchJob",
    "SearchReport",
    "MapRecord",
    "BudgetExceeded",
    "BadReduction",
    "TheoremViolation",
    "reduce_map",
    "ff_fiber_census",
    "candidate_lifts",
    "lift_candidates",
    "default_primes",
    "completely_ramified_points",
    "family_maps",
    "run_search",
]

log = logging.getLogger(__name__)

DEFAULT_POINT_BUDGET = 1_000_000_000
_CHUNK = 1 << 21


# ---------------------------------------------------------------------------
# reduction mod p

@dataclass(frozen=True)
class FiniteFieldMap:
    p: int
    forms: tuple[PrimeFieldPolynomial, PrimeFieldPolynomial, PrimeFieldPolynomial]
    m: int
    source: str = ""

    def __post_init__(self):
        if any(f.p != self.p for f in self.forms):
            raise ValueError("forms over different primes")


def reduce_map(f: PlaneEndomorphism, p: int) -> FiniteFieldMap:
    """Reduction of f mod p after clearing a common denominator.

    Raises BadReduction when p divides a denominator left after scaling or a
    reduced coordinate form vanishes; base points over F_p or F_p^2 are
    detected by the census itself.
    """
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    coeffs = [c for g in f.forms for c in g.terms.values()]
    den = math.lcm(*(c.denominator for c in coeffs))
    num = math.gcd(*(int(c * den) for c in coeffs))
    scale = Fraction(den, num)
    forms = tuple(PrimeFieldPolynomial.reduce(g * scale, p) for g in f.forms)
    if any(g.is_zero for g in forms):
        raise BadReduction(f"a coordinate form vanishes mod {p}")
    return FiniteFieldMap(p, forms, f.m, str(f))


# ---------------------------------------------------------------------------
# arithmetic in F_p and F_p^2 on numpy arrays; elements are pairs (a, b)
# standing for a + b*alpha with alpha^2 = n a non-residue

class _Field:
    def __init__(self, p: int, e: int):
        if e not in (1, 2):
            raise ValueError("extension degree must be 1 or 2")
        self.p, self.e = p, e
        self.q = p ** e
        self.n = next(k for k in range(2, p) if pow(k, (p - 1) // 2, p) == p - 1) if p > 2 else 1
        self.inv = np.array([0] + [pow(k, -1, p) for k in range(1, p)], dtype=np.int64)

    def elements(self, idx: np.ndarray):
        p = self.p
        return (idx % p).astype(np.int64), (idx // p).astype(np.int64)

    def mul(self, x, y):
        p, n = self.p, self.n
        a, b = x
        c, d = y
        return (a * c + n * (b * d % p)) % p, (a * d + b * c) % p

    def add(self, x, y):
        return (x[0] + y[0]) % self.p, (x[1] + y[1]) % self.p

    def scale(self, x, c: int):
        return x[0] * c % self.p, x[1] * c % self.p

    def inverse(self, x):
        p, n = self.p, self.n
        a, b = x
        norm = (a * a - n * (b * b % p)) % p
        ni = self.inv[norm]
        return a * ni % p, (-b) * ni % p

    @staticmethod
    def is_zero(x):
        return (x[0] == 0) & (x[1] == 0)


def _evaluate(field: _Field, form: PrimeFieldPolynomial, powers):
    shape = powers[0][1][0].shape
    acc = (np.zeros(shape, dtype=np.int64), np.zeros(shape, dtype=np.int64))
    for e, c in form.terms.items():
        t = None
        for var, k in enumerate(e):
            if k:
                pw = powers[var][k]
                t = pw if t is None else field.mul(t, pw)
        if t is None:
            t = (np.ones(shape, dtype=np.int64), np.zeros(shape, dtype=np.int64))
        acc = field.add(acc, field.scale(t, c))
    return acc


def _powers(field: _Field, x, m: int):
    out = [None, x]
    for _ in range(2, m + 1):
        out.append(field.mul(out[-1], x))
    return out


@dataclass(frozen=True)
class FiberCensus:
    """Preimage counts over P^2(F_{p^e}) of every point of P^2(F_p).

    Targets are indexed as (1:y:z) -> y*p + z, (0:1:z) -> p^2 + z,
    (0:0:1) -> p^2 + p.
    """

    p: int
    e: int
    counts: np.ndarray
    points_evaluated: int

    @staticmethod
    def index(point: Sequence[int], p: int) -> int:
        a, b, c = (v % p for v in point)
        if a:
            inv = pow(a, -1, p)
            return (b * inv % p) * p + c * inv % p
        if b:
            return p * p + c * pow(b, -1, p) % p
        return p * p + p

    @staticmethod
    def point(i: int, p: int) -> tuple[int, int, int]:
        if i < p * p:
            return (1, i // p, i % p)
        if i < p * p + p:
            return (0, 1, i - p * p)
        return (0, 0, 1)

    def count(self, point) -> int:
        if isinstance(point, ProjectivePoint):
            red = point.reduce(self.p)
            if red is None:
                raise BadReduction(f"{point} reduces to zero mod {self.p}")
            point = red
        return int(self.counts[self.index(point, self.p)])

    def candidates(self) -> set[tuple[int, int, int]]:
        return {self.point(int(i), self.p) for i in np.flatnonzero(self.counts == 1)}

    def as_table(self) -> dict[tuple[int, int, int], int]:
        return {self.point(i, self.p): int(c) for i, c in enumerate(self.counts)}


def _point_blocks(field: _Field):
    """Chunks of normalized points of P^2(F_q), as (x, y, z) element pairs."""
    q = field.q
    one = lambda k: (np.ones(k, dtype=np.int64), np.zeros(k, dtype=np.int64))
    zero = lambda k: (np.zeros(k, dtype=np.int64), np.zeros(k, dtype=np.int64))
    rows = max(1, _CHUNK // q)
    v_all = np.arange(q, dtype=np.int64)
    for u0 in range(0, q, rows):
        u1 = min(q, u0 + rows)
        u = np.repeat(np.arange(u0, u1, dtype=np.int64), q)
        v = np.tile(v_all, u1 - u0)
        k = len(u)
        yield one(k), field.elements(u), field.elements(v)
    yield zero(q), one(q), field.elements(v_all)
    yield zero(1), zero(1), one(1)


def ff_fiber_census(fmap: FiniteFieldMap, extension_degree: int = 2,
                    budget: int = DEFAULT_POINT_BUDGET) -> FiberCensus:
    """Count preimages in P^2(F_{p^e}) of each point of P^2(F_p).

    Raises BadReduction if some point of P^2(F_{p^e}) maps to zero, and
    BudgetExceeded if the enumeration would exceed `budget` points.
    """
    p = fmap.p
    field = _Field(p, extension_degree)
    q = field.q
    total = q * q + q + 1
    if total > budget:
        raise BudgetExceeded(f"census needs {total} points, budget {budget}")
    counts = np.zeros(p * p + p + 1, dtype=np.int64)
    for x, y, z in _point_blocks(field):
        pw = [_powers(field, c, fmap.m) for c in (x, y, z)]
        img = [_evaluate(field, g, pw) for g in fmap.forms]
        z0, z1, z2 = (field.is_zero(c) for c in img)
        if np.any(z0 & z1 & z2):
            raise BadReduction(f"the reduced map has a base point over F_{q}")
        piv = np.where(~z0, 0, np.where(~z1, 1, 2))
        pa = np.choose(piv, [img[0][0], img[1][0], img[2][0]])
        pb = np.choose(piv, [img[0][1], img[1][1], img[2][1]])
        inv = field.inverse((pa, pb))
        norm = [field.mul(c, inv) for c in img]
        rational = (norm[0][1] == 0) & (norm[1][1] == 0) & (norm[2][1] == 0)
        a0, a1, a2 = (c[0] for c in norm)
        code = np.where(piv == 0, a1 * p + a2, np.where(piv == 1, p * p + a2, p * p + p))
        counts += np.bincount(code[rational], minlength=len(counts))
    return FiberCensus(p, extension_degree, counts, total)


# ---------------------------------------------------------------------------
# lifting

def candidate_lifts(censuses: dict[int, set], height: int = 4) -> list[ProjectivePoint]:
    """Rational points of height <= `height` whose reduction is a candidate at every prime."""
    out = []
    for P in small_points(height):
        ok = True
        for p, cands in censuses.items():
            red = P.reduce(p)
            if red is None or red not in cands:
                ok = False
                break
        if ok:
            out.append(P)
    return out


def lift_candidates(f: PlaneEndomorphism, censuses: dict[int, set],
                    height: int = 4) -> list[ProjectivePoint]:
    """Lift candidates found at two or more primes and keep the exact survivors."""
    if len(censuses) < 2:
        raise ValueError("lifting needs candidates from at least two primes")
    return [P for P in candidate_lifts(censuses, height) if fiber(f, P).completely_ramified]


def default_primes(m: int, count: int = 2) -> list[int]:
    """The smallest `count` primes above 2m^2."""
    out = []
    p = 2 * m * m + 1
    while len(out) < count:
        if _is_prime(p):
            out.append(p)
        p += 1
    return out


@dataclass(frozen=True)
class CRPointsReport:
    map: dict
    points: tuple[tuple[ProjectivePoint, int], ...]  # (point, local degree)
    census_candidates: dict[int, int]
    lifted: tuple[ProjectivePoint, ...]
    skipped_primes: tuple[int, ...]
    height: int

    @property
    def verified(self) -> tuple[ProjectivePoint, ...]:
        return tuple(p for p, _ in self.points)

    def to_json(self) -> dict:
        return {
            "map": self.map,
            "verified_points": [{"point": str(p), "local_degree": str(d)} for p, d in self.points],
            "census_candidates": {str(p): str(c) for p, c in sorted(self.census_candidates.items())},
            "lifted": [str(p) for p in self.lifted],
            "skipped_primes": [str(p) for p in self.skipped_primes],
            "height": str(self.height),
            "note": "census is a candidate filter; only exact fibres certify",
        }


def completely_ramified_points(f: PlaneEndomorphism, primes: Sequence[int] | None = None,
                               height: int = 4, budget: int = DEFAULT_POINT_BUDGET,
                               allow_single_prime: bool = False) -> CRPointsReport:
    """Rational completely ramified points of height <= `height`.

    Primes of bad reduction are skipped (and logged).  With fewer than two
    good primes left the search is refused unless `allow_single_prime`.
    """
    f.require_nonlinear()
    primes = list(primes) if primes is not None else default_primes(f.m)
    if len(set(primes)) != len(primes):
        raise ValueError("primes must be distinct")
    cens: dict[int, set] = {}
    skipped = []
    spent = 0
    for p in primes:
        try:
            c = ff_fiber_census(reduce_map(f, p), 2, budget - spent)
        except BadReduction as exc:
            log.info("skipping p=%d: %s", p, exc)
            skipped.append(p)
            continue
        spent += c.points_evaluated
        cens[p] = c.candidates()
    if len(cens) < 2 and not allow_single_prime:
        raise ValueError(f"need two primes of good reduction, got {sorted(cens)}")
    if not cens:
        raise ValueError("no prime of good reduction")
    lifted = candidate_lifts(cens, height)
    pts = []
    for P in lifted:
        rep = fiber(f, P)
        if rep.completely_ramified:
            pts.append((P, rep.rational_points[0][1]))
    return CRPointsReport(map_to_json(f), tuple(pts), {p: len(c) for p, c in cens.items()},
                          tuple(lifted), tuple(skipped), height)


# ---------------------------------------------------------------------------
# search over families

@dataclass(frozen=True)
class SearchJob:
    """A family of maps to search.

    family: "power" (one map per degree), "perturbed" (every g of degree
    m - 2 with coefficients in `box`) or "composition" (all ordered
    compositions of the maps in `components`, given as JSON descriptors).
    """

    family: str
    degrees: tuple[int, ...] = (2,)
    box: tuple[int, ...] = (-1, 0, 1)
    components: tuple[dict, ...] = ()
    primes: tuple[int, ...] | None = None
    seed: int = 0
    budget: int = DEFAULT_POINT_BUDGET
    height: int = 4
    max_maps: int | None = None

    def __post_init__(self):
        if self.family not in ("power", "perturbed", "composition"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.budget <= 0:
            raise ValueError("budget must be positive")
        if self.primes is not None:
            if len(set(self.primes)) != len(self.primes):
                raise ValueError("primes must be distinct")
            top = max(self.degrees) if self.family != "composition" else 1
            if any(p <= 2 * top * top for p in self.primes):
                raise ValueError("primes must exceed 2m^2")
        if any(m < 2 for m in self.degrees):
            raise ValueError("searches need m >= 2")

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "degrees": [str(m) for m in self.degrees],
            "box": [str(c) for c in self.box],
            "components": list(self.components),
            "primes": None if self.primes is None else [str(p) for p in self.primes],
            "seed": str(self.seed),
            "budget": str(self.budget),
            "height": str(self.height),
            "max_maps": None if self.max_maps is None else str(self.max_maps),
        }

    @classmethod
    def from_json(cls, data) -> "SearchJob":
        return cls(
            family=data["family"],
            degrees=tuple(int(m) for m in data.get("degrees", ["2"])),
            box=tuple(int(c) for c in data.get("box", ["-1", "0", "1"])),
            components=tuple(data.get("components", ())),
            primes=None if data.get("primes") is None else tuple(int(p) for p in data["primes"]),
            seed=int(data.get("seed", 0)),
            budget=int(data.get("budget", DEFAULT_POINT_BUDGET)),
            height=int(data.get("height", 4)),
            max_maps=None if data.get("max_maps") is None else int(data["max_maps"]),
        )


def family_maps(job: SearchJob) -> list[PlaneEndomorphism]:
    from .projmap import map_from_json
    maps: list[PlaneEndomorphism] = []
    if job.family == "power":
        maps = [power_map(m) for m in job.degrees]
    elif job.family == "perturbed":
        for m in job.degrees:
            mons = monomials(3, m - 2)
            for coeffs in itertools.product(job.box, repeat=len(mons)):
                g = HomogeneousForm(dict(zip(mons, coeffs)))
                maps.append(perturbed_power_map(m, g if not g.is_zero else None))
    else:
        comps = [map_from_json(c) for c in job.components]
        for a, b in itertools.product(comps, repeat=2):
            maps.append(compose(a, b))
    seen, unique = set(), []
    for f in maps:
        key = tuple(sorted(map_to_json(f).items()))
        if key not in seen:
            seen.add(key)
            unique.append(f)
    if job.max_maps is not None and len(unique) > job.max_maps:
        unique = random.Random(job.seed).sample(unique, job.max_maps)
    return unique


@dataclass(frozen=True)
class MapRecord:
    map: dict
    m: int
    verified_points: tuple[ProjectivePoint, ...]
    census_candidates: dict[int, int]
    skipped_primes: tuple[int, ...]
    constraints: dict
    discovery: bool

    def to_json(self) -> dict:
        return {
            "map": self.map,
            "m": str(self.m),
            "verified_points": [str(p) for p in self.verified_points],
            "census_candidates": {str(p): str(c) for p, c in sorted(self.census_candidates.items())},
            "skipped_primes": [str(p) for p in self.skipped_primes],
            "constraint_report": self.constraints,
            "discovery": self.discovery,
        }


@dataclass
class SearchReport:
    job: SearchJob
    records: list[MapRecord] = field(default_factory=list)
    complete: bool = False

    @property
    def discoveries(self) -> list[MapRecord]:
        return [r for r in self.records if r.discovery]

    def to_json(self) -> dict:
        records = sorted((r.to_json() for r in self.records),
                         key=lambda r: (r["map"]["f0"], r["map"]["f1"], r["map"]["f2"]))
        return {
            "job": self.job.to_json(),
            "records": records,
            "maps": str(len(self.records)),
            "discoveries": [r["map"] for r in records if r["discovery"]],
            "complete": self.complete,
            "note": "census is a candidate filter; only exact fibres certify",
        }


def _check_theorem1(points: Sequence[ProjectivePoint]) -> dict:
    rep = configuration_constraints(PointConfiguration(tuple(points)))
    if len(points) > 9 or not rep.theorem_consistent:
        raise TheoremViolation(f"completely ramified set violates the nine-point constraints: "
                               f"{[str(p) for p in points]}")
    return rep.to_json()


def run_search(job: SearchJob) -> SearchReport:
    """Census, lift and exact verification for every map of the family.

    Raises BudgetExceeded (with the partial report attached) when the point
    budget runs out.  Maps whose verified set has more than three points are
    flagged as discoveries.
    """
    report = SearchReport(job)
    spent = 0
    for f in family_maps(job):
        primes = list(job.primes) if job.primes is not None else default_primes(f.m)
        remaining = job.budget - spent
        try:
            cr = completely_ramified_points(f, primes, job.height, remaining,
                                            allow_single_prime=True)
        except BudgetExceeded as exc:
            raise BudgetExceeded(f"budget exhausted after {len(report.records)} maps",
                                 partial=report) from exc
        spent += sum((p ** 2) ** 2 + p ** 2 + 1 for p in primes if p not in cr.skipped_primes)
        pts = cr.verified
        report.records.append(MapRecord(map_to_json(f), f.m, pts, cr.census_candidates,
                                        cr.skipped_primes, _check_theorem1(pts), len(pts) > 3))
        if len(pts) > 3:
            log.warning("map %s has %d completely ramified points", f, len(pts))
    report.complete = True
    return report
