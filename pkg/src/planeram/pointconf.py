"""Linear systems of plane curves through finite point sets.

Dimensions of linear systems with multiplicity conditions, subset scans for
collinear / conconic / concubic subsets, and the search for many points on
a curve of low degree.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .errors import BudgetExceeded
from .linalg import nullspace, rank
from .polycore import HomogeneousForm, monomials
from .projmap import ProjectivePoint

__all__ = [
    "PointConfiguration",
    "SearchBudgetExceeded",
    "ConstraintReport",
    "EPWitness",
    "condition_rows",
    "linear_system_dimension",
    "linear_system",
    "curve_through",
    "configuration_constraints",
    "max_points_on_curve",
    "ellia_peskine_search",
    "ep_hypothesis",
    "random_points",
]


class SearchBudgetExceeded(BudgetExceeded):
    pass


@dataclass(frozen=True)
class PointConfiguration:
    points: tuple[ProjectivePoint, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        pts = tuple(p if isinstance(p, ProjectivePoint) else ProjectivePoint(*p)
                    for p in self.points)
        if len(set(pts)) != len(pts):
            raise ValueError("configuration points must be distinct")
        if self.labels is not None and len(self.labels) != len(pts):
            raise ValueError("one label per point")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def subset(self, idx: Iterable[int]) -> "PointConfiguration":
        idx = list(idx)
        labels = None if self.labels is None else tuple(self.labels[i] for i in idx)
        return PointConfiguration(tuple(self.points[i] for i in idx), labels)

    def add(self, point: ProjectivePoint) -> "PointConfiguration":
        return PointConfiguration(self.points + (point,))

    def to_json(self) -> list[list[str]]:
        return [[str(c) for c in p.coords] for p in self.points]

    @classmethod
    def from_json(cls, data) -> "PointConfiguration":
        if isinstance(data, str):
            data = json.loads(data)
        if isinstance(data, dict):
            return cls(tuple(ProjectivePoint(*(int(c) for c in p)) for p in data["points"]),
                       tuple(data["labels"]) if data.get("labels") else None)
        return cls(tuple(ProjectivePoint(*(int(c) for c in p)) for p in data))


def random_points(n: int, rng: random.Random, box: int = 10 ** 4) -> PointConfiguration:
    pts = []
    while len(pts) < n:
        c = [rng.randint(-box, box) for _ in range(3)]
        if any(c):
            p = ProjectivePoint(*c)
            if p not in pts:
                pts.append(p)
    return PointConfiguration(tuple(pts))


# ---------------------------------------------------------------------------
# evaluation matrices

def condition_rows(point: ProjectivePoint, d: int, r: int = 1) -> list[list[int]]:
    """Linear conditions for a degree-d curve to have multiplicity >= r at point.

    One row per partial derivative of order < r in the affine chart of the
    first nonzero coordinate.  Rows are scaled to integers.
    """
    k = point.chart
    K = point[k]
    (i1, i2) = [i for i in range(3) if i != k]
    A, B = point[i1], point[i2]
    mons = monomials(3, d)
    rows = []
    for total in range(r):
        for i in range(total + 1):
            j = total - i
            row = []
            for e in mons:
                e1, e2 = e[i1], e[i2]
                if e1 < i or e2 < j:
                    row.append(0)
                else:
                    row.append(comb(e1, i) * comb(e2, j) * A ** (e1 - i)
                               * B ** (e2 - j) * K ** e[k])
            rows.append(row)
    return rows


def _conditions(config: PointConfiguration | Sequence[ProjectivePoint],
                base_conditions: Sequence[tuple[ProjectivePoint, int]] | None):
    req: dict[ProjectivePoint, int] = {}
    for p in config:
        req[p] = max(req.get(p, 0), 1)
    for p, r in base_conditions or ():
        if r < 1:
            raise ValueError("multiplicity conditions need r >= 1")
        req[p] = max(req.get(p, 0), r)
    return req


def _matrix(config, d, base_conditions=None) -> list[list[int]]:
    rows = []
    for p, r in _conditions(config, base_conditions).items():
        rows.extend(condition_rows(p, d, r))
    return rows


def linear_system_dimension(config, d: int,
                            base_conditions: Sequence[tuple[ProjectivePoint, int]] | None = None) -> int:
    """Projective dimension of degree-d curves through the points; -1 if empty."""
    if d < 1:
        raise ValueError("d must be at least one")
    rows = _matrix(config, d, base_conditions)
    return d * (d + 3) // 2 - rank(rows) if rows else d * (d + 3) // 2


def linear_system(config, d: int, base_conditions=None) -> list[HomogeneousForm]:
    """Basis of the vector space of degree-d forms satisfying the conditions."""
    mons = monomials(3, d)
    rows = _matrix(config, d, base_conditions)
    basis = nullspace(rows, len(mons)) if rows else nullspace([], len(mons))
    return [HomogeneousForm(dict(zip(mons, v))).primitive() for v in basis]


def curve_through(config, d: int, base_conditions=None) -> HomogeneousForm | None:
    """The unique curve of degree d through the points, or None if not unique."""
    basis = linear_system(config, d, base_conditions)
    return basis[0] if len(basis) == 1 else None


# ---------------------------------------------------------------------------
# configuration constraints

def _subsets_on_curve(config: PointConfiguration, d: int, size: int) -> list[tuple[int, ...]]:
    # subsets of `size` points lying on some curve of degree d
    out = []
    for idx in itertools.combinations(range(len(config)), size):
        rows = [condition_rows(config.points[i], d)[0] for i in idx]
        if rank(rows) < size:
            out.append(idx)
    return out


def _is_singular_at(F: HomogeneousForm, p: ProjectivePoint) -> bool:
    return all(F.diff(i).evaluate(p.coords) == 0 for i in range(3))


@dataclass(frozen=True)
class ConstraintReport:
    """Violations of the general-position conditions on a configuration.

    For nine points, ``unique_cubic`` records whether exactly one cubic
    passes through them and ``singular_at`` lists the points where that
    cubic is singular.
    """

    size: int
    collinear_triples: tuple[tuple[int, ...], ...]
    six_on_conic: tuple[tuple[int, ...], ...]
    ten_on_cubic: tuple[tuple[int, ...], ...]
    unique_cubic: bool | None = None
    cubic: HomogeneousForm | None = None
    singular_at: tuple[int, ...] = ()

    @property
    def clean(self) -> bool:
        return not (self.collinear_triples or self.six_on_conic or self.ten_on_cubic)

    @property
    def theorem_consistent(self) -> bool:
        """Could these be the completely ramified points of an endomorphism?"""
        if self.size > 9 or not (self.clean):
            return False
        if self.size == 9:
            return bool(self.unique_cubic and self.singular_at)
        return True

    def to_json(self) -> dict:
        return {
            "size": str(self.size),
            "collinear_triples": [[str(i) for i in t] for t in self.collinear_triples],
            "six_on_conic": [[str(i) for i in t] for t in self.six_on_conic],
            "ten_on_cubic": [[str(i) for i in t] for t in self.ten_on_cubic],
            "unique_cubic": self.unique_cubic,
            "cubic": None if self.cubic is None else str(self.cubic),
            "singular_at": [str(i) for i in self.singular_at],
            "clean": self.clean,
            "theorem_consistent": self.theorem_consistent,
        }


def configuration_constraints(config: PointConfiguration) -> ConstraintReport:
    if len(config) > 16:
        raise ValueError("subset scans are limited to 16 points")
    triples = _subsets_on_curve(config, 1, 3)
    sixes = _subsets_on_curve(config, 2, 6)
    tens = _subsets_on_curve(config, 3, 10)
    unique = None
    cubic = None
    sing: tuple[int, ...] = ()
    if len(config) == 9:
        cubic = curve_through(config, 3)
        unique = cubic is not None
        if unique:
            sing = tuple(i for i, p in enumerate(config.points) if _is_singular_at(cubic, p))
    return ConstraintReport(len(config), tuple(triples), tuple(sixes), tuple(tens),
                            unique, cubic, sing)


# ---------------------------------------------------------------------------
# many points on a curve of low degree

@dataclass(frozen=True)
class EPWitness:
    t: int
    subset: tuple[int, ...]
    curve: HomogeneousForm
    required: int


def _form_of(vec, d):
    return HomogeneousForm(dict(zip(monomials(3, d), vec))).primitive()


def max_points_on_curve(config: PointConfiguration, t: int, budget: int = 10 ** 6):
    """Largest subset of the configuration on one curve of degree t.

    A maximal such subset is either everything or cut out by the unique
    curve through some r = t(t+3)/2 independent points, so it suffices to
    scan independent r-subsets.  Returns (indices, curve).
    """
    n = len(config)
    r = t * (t + 3) // 2
    evals = [condition_rows(p, t)[0] for p in config.points]
    if n == 0:
        return (), None
    if rank(evals) <= r:
        basis = nullspace(evals, len(evals[0]))
        return tuple(range(n)), _form_of(basis[0], t)
    best: tuple[tuple[int, ...], HomogeneousForm | None] = ((), None)
    nodes = 0
    seen: set[HomogeneousForm] = set()
    for idx in itertools.combinations(range(n), r):
        nodes += 1
        if nodes > budget:
            raise SearchBudgetExceeded(f"more than {budget} subsets", partial=best)
        rows = [evals[i] for i in idx]
        if rank(rows) < r:
            continue
        vec = nullspace(rows, len(evals[0]))[0]
        curve = _form_of(vec, t)
        if curve in seen:
            continue
        seen.add(curve)
        on = tuple(i for i in range(n) if sum(a * b for a, b in zip(evals[i], vec)) == 0)
        if len(on) > len(best[0]):
            best = (on, curve)
    return best


def ep_hypothesis(n: int, tau: int, s: int) -> bool:
    """s^2 <= n and tau > s - 3 + n/s."""
    return s * s <= n and Fraction(tau) > s - 3 + Fraction(n, s)


def ellia_peskine_search(config: PointConfiguration, tau: int, s: int,
                         budget: int = 10 ** 6) -> EPWitness | None:
    """Look for 0 < t < s and at least t(tau - t + 3) points on a curve of degree t.

    Exhaustive at desk scale; returns the witness for the smallest such t,
    or None.
    """
    n = len(config)
    if n == 0:
        return None
    if n > 14:
        raise ValueError("exhaustive search is limited to 14 points")
    for t in range(1, s):
        need = t * (tau - t + 3)
        if need > n:
            continue
        on, curve = max_points_on_curve(config, t, budget)
        if curve is not None and len(on) >= need:
            return EPWitness(t, on, curve, need)
    return None
