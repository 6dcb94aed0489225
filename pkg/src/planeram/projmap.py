"""Endomorphisms of the projective plane and rational points."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .polycore import (XYZ, HomogeneousForm, Poly, binary_form_roots,
                       gcd, parse_form, rational_roots, resultant)

__all__ = [
    "ProjectivePoint",
    "PlaneEndomorphism",
    "CommonZero",
    "DegreeMismatch",
    "DegreeOneError",
    "validate",
    "compose",
    "evaluate",
    "power_map",
    "perturbed_power_map",
    "identity_map",
    "linear_map",
    "map_from_json",
    "map_to_json",
    "small_points",
]


class CommonZero(ValueError):
    """The three forms share a projective zero.

    ``point`` is a rational common zero when one was found; ``witness`` is
    a binary form whose roots carry the common zeros otherwise.
    """

    def __init__(self, message, point=None, witness=None):
        super().__init__(message)
        self.point = point
        self.witness = witness


class DegreeMismatch(ValueError):
    pass


class DegreeOneError(ValueError):
    """A theorem-level operation was asked about a map of degree one."""


@dataclass(frozen=True, init=False)
class ProjectivePoint:
    """Rational point of P^2 stored as coprime integers, first nonzero positive."""

    coords: tuple[int, int, int]

    def __init__(self, *coords):
        if len(coords) == 1 and not isinstance(coords[0], (int, Fraction)):
            coords = tuple(coords[0])
        if len(coords) != 3:
            raise ValueError("a point of P^2 needs three coordinates")
        fr = [Fraction(c) for c in coords]
        if not any(fr):
            raise ValueError("(0:0:0) is not a projective point")
        den = math.lcm(*(c.denominator for c in fr))
        ints = [int(c * den) for c in fr]
        g = math.gcd(*ints)
        ints = [v // g for v in ints]
        if next(v for v in ints if v) < 0:
            ints = [-v for v in ints]
        object.__setattr__(self, "coords", tuple(ints))

    @classmethod
    def parse(cls, text: str) -> "ProjectivePoint":
        parts = text.replace("(", "").replace(")", "").split(":")
        return cls(*(Fraction(p.strip()) for p in parts))

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    @property
    def chart(self) -> int:
        """Index of the first nonzero coordinate."""
        return next(i for i, c in enumerate(self.coords) if c)

    def affine(self, chart: int | None = None) -> tuple[Fraction, Fraction]:
        """Coordinates in the chart where coordinate `chart` equals one."""
        k = self.chart if chart is None else chart
        if not self.coords[k]:
            raise ValueError(f"{self} is at infinity for chart {k}")
        return tuple(Fraction(c, self.coords[k])
                     for i, c in enumerate(self.coords) if i != k)

    def reduce(self, p: int) -> tuple[int, int, int] | None:
        """Canonical representative mod p, first nonzero coordinate 1."""
        red = [c % p for c in self.coords]
        k = next((i for i, c in enumerate(red) if c), None)
        if k is None:
            return None
        inv = pow(red[k], -1, p)
        return tuple(c * inv % p for c in red)

    def height(self) -> int:
        return max(abs(c) for c in self.coords)

    def __str__(self):
        return ":".join(str(c) for c in self.coords)

    def __repr__(self):
        return f"ProjectivePoint({self})"


def small_points(height: int) -> Iterable[ProjectivePoint]:
    """Rational points with coordinates bounded by `height`, by height."""
    seen = set()
    for h in range(1, height + 1):
        for c in itertools.product(range(-h, h + 1), repeat=3):
            if max(map(abs, c)) != h or math.gcd(*c) != 1:
                continue
            pt = ProjectivePoint(*c)
            if pt not in seen:
                seen.add(pt)
                yield pt


@dataclass(frozen=True)
class PlaneEndomorphism:
    """A triple of base-point-free forms of common degree m.

    Build instances with :func:`validate`; the constructor only checks
    degrees.
    """

    f0: HomogeneousForm
    f1: HomogeneousForm
    f2: HomogeneousForm

    def __post_init__(self):
        degs = {f.degree for f in self.forms}
        if None in degs:
            raise DegreeMismatch("coordinate forms must be nonzero")
        if len(degs) != 1:
            raise DegreeMismatch(f"coordinate forms have degrees {sorted(degs)}")
        if self.m < 1:
            raise DegreeMismatch("degree must be at least one")

    @property
    def forms(self) -> tuple[HomogeneousForm, HomogeneousForm, HomogeneousForm]:
        return (self.f0, self.f1, self.f2)

    @property
    def m(self) -> int:
        return self.f0.degree

    @property
    def topological_degree(self) -> int:
        return self.m ** 2

    @property
    def degree_one(self) -> bool:
        return self.m == 1

    def require_nonlinear(self):
        if self.m < 2:
            raise DegreeOneError("operation requires a map of degree at least two")

    def __call__(self, point: ProjectivePoint) -> ProjectivePoint:
        return evaluate(self, point)

    def descriptor(self) -> dict[str, str]:
        return {"f0": str(self.f0), "f1": str(self.f1), "f2": str(self.f2)}

    def __str__(self):
        return f"({self.f0} : {self.f1} : {self.f2})"


# ---------------------------------------------------------------------------
# base-point freeness

def _linear_change(center: ProjectivePoint) -> list[list[int]]:
    """Invertible integer matrix whose last column is `center`."""
    k = center.chart
    units = [i for i in range(3) if i != k]
    cols = [[int(i == u) for i in range(3)] for u in units] + [list(center.coords)]
    return [[cols[j][i] for j in range(3)] for i in range(3)]


def _apply_matrix(form: Poly, A) -> HomogeneousForm:
    """form(A . (x, y, z))."""
    imgs = [Poly.linear(A[i], XYZ) for i in range(3)]
    return HomogeneousForm.from_poly(form.subs(dict(zip(XYZ, imgs))))


def _common_zero_witness(forms: Sequence[HomogeneousForm]):
    """None if the forms have no common zero in P^2, else (point, witness)."""
    f0, f1, f2 = forms
    m = f0.degree
    h = gcd(gcd(f0, f1), f2)
    if not h.is_constant():
        return _point_on_curve(h), h
    center = next(p for p in small_points(m + 1) if f0.evaluate(p.coords) != 0)
    A = _linear_change(center)
    g = [_apply_matrix(f, A) for f in forms]

    def back(pt):
        v = [sum(A[i][j] * pt[j] for j in range(3)) for i in range(3)]
        return ProjectivePoint(*v)

    # common zeros on the line y = 0 of the new coordinates
    line = [gi.specialize(1, 0) for gi in g]
    hl = gcd(gcd(line[0], line[1]), line[2])
    if not hl.is_constant():
        pt = None
        for (a, c), _ in binary_form_roots(hl, (0, 2)):
            pt = back((a, 0, c))
            break
        return pt, hl
    # affine part y = 1: gcd over m+1 members of the pencil g1 + t g2
    g0a = g[0].specialize(1, 1)
    C = None
    used = 0
    for t in range(m + 2):
        member = (g[1] + g[2] * t).specialize(1, 1)
        if member.is_zero:
            continue
        Rt = resultant(g0a, member, 2)
        C = Rt if C is None else gcd(C, Rt)
        used += 1
        if not C.is_zero and C.is_constant():
            return None
        if used == m + 1:
            break
    pt = None
    for x0, _ in rational_roots(C):
        fibre = [gi.specialize(0, x0).specialize(1, 1) for gi in g]
        hz = None
        for q in fibre:
            if not q.is_zero:
                hz = q if hz is None else gcd(hz, q)
        for z0, _ in rational_roots(hz) if hz is not None and not hz.is_constant() else []:
            pt = back((x0, 1, z0))
            break
        if pt is not None:
            break
    return pt, C


def _point_on_curve(h: Poly) -> ProjectivePoint | None:
    # rational point of V(h) found on a coordinate line, if any
    for i in range(3):
        others = [j for j in range(3) if j != i]
        line = h.specialize(i, 0)
        if line.is_zero:
            v = [0, 0, 0]
            v[others[0]] = 1
            return ProjectivePoint(*v)
        for (a, b), _ in binary_form_roots(line, tuple(others)):
            v = [0, 0, 0]
            v[others[0]], v[others[1]] = a, b
            return ProjectivePoint(*v)
    return None


def validate(f0, f1=None, f2=None) -> PlaneEndomorphism:
    """Check that three forms define a morphism P^2 -> P^2.

    Accepts three forms (or strings in the polynomial grammar), or a single
    sequence of three.  Raises :class:`CommonZero` when the forms share a
    zero and :class:`DegreeMismatch` on unequal degrees.  Maps of degree
    one are returned with ``degree_one`` set.
    """
    if f1 is None and f2 is None:
        f0, f1, f2 = f0
    forms = [parse_form(f) if isinstance(f, str) else HomogeneousForm.from_poly(f)
             for f in (f0, f1, f2)]
    fmap = PlaneEndomorphism(*forms)
    found = _common_zero_witness(fmap.forms)
    if found is not None:
        point, witness = found
        where = f" at ({point})" if point is not None else ""
        raise CommonZero(f"forms have a common zero{where}", point, witness)
    return fmap


def compose(f: PlaneEndomorphism, g: PlaneEndomorphism) -> PlaneEndomorphism:
    """f o g, of degree m_f * m_g."""
    forms = [fi.compose(g.forms) for fi in f.forms]
    return validate(forms)


def evaluate(f: PlaneEndomorphism, point: ProjectivePoint) -> ProjectivePoint:
    return ProjectivePoint(*(fi.evaluate(point.coords) for fi in f.forms))


# ---------------------------------------------------------------------------
# families

def _monomial(e) -> HomogeneousForm:
    return HomogeneousForm({tuple(e): 1})


def power_map(m: int) -> PlaneEndomorphism:
    return validate([_monomial((m, 0, 0)), _monomial((0, m, 0)), _monomial((0, 0, m))])


def identity_map() -> PlaneEndomorphism:
    return power_map(1)


def linear_map(A: Sequence[Sequence[int]]) -> PlaneEndomorphism:
    return validate([HomogeneousForm.from_poly(Poly.linear(row)) for row in A])


def perturbed_power_map(m: int, g: HomogeneousForm | str | None = None) -> PlaneEndomorphism:
    """(x^m : y^m : z^m + x*y*g) with g a form of degree m - 2."""
    if m < 2:
        raise ValueError("perturbed power maps need m >= 2")
    if isinstance(g, str):
        g = parse_form(g)
    third = _monomial((0, 0, m))
    if g is not None and not g.is_zero:
        if g.degree != m - 2:
            raise DegreeMismatch(f"g must have degree {m - 2}")
        third = third + _monomial((1, 1, 0)) * g
    return validate([_monomial((m, 0, 0)), _monomial((0, m, 0)), third])


def map_from_json(data) -> PlaneEndomorphism:
    """Map descriptor ``{"f0": ..., "f1": ..., "f2": ...}`` (dict or text)."""
    if isinstance(data, str):
        data = json.loads(data)
    return validate([data["f0"], data["f1"], data["f2"]])


def map_to_json(f: PlaneEndomorphism) -> dict[str, str]:
    return f.descriptor()
