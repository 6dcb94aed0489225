"""Ramification of plane endomorphisms.

Ramification divisor, fibres with local degrees, complete ramification,
multiplicities of the direct image of the ramification divisor, and the
germ examples whose residual ramification is empty.

Local degrees and intersection numbers come from Fulton's algorithm on
affine charts, so everything is exact.  Fibre points are only resolved over
Q; the mass of the remaining geometric points is tracked as a number.
"""

from __future__ import annotations

import enum
import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import TheoremViolation
from .polycore import (XYZ, HomogeneousForm, Poly, binary_form_roots,
                       divexact, factor_components, gcd, jacobian_determinant,
                       rational_roots, resultant, squarefree_decompose)
from .projmap import PlaneEndomorphism, ProjectivePoint, small_points

__all__ = [
    "CRStatus",
    "PlaneDivisor",
    "FiberReport",
    "PushforwardResult",
    "Prop1Check",
    "Prop2Audit",
    "InfiniteIntersection",
    "JacobianIdenticallyZero",
    "GenericityFailure",
    "ShearExhausted",
    "UnsupportedComponent",
    "ramification_divisor",
    "rational_common_zeros",
    "fiber",
    "local_intersection",
    "intersection_at",
    "point_multiplicity",
    "pushforward_multiplicity",
    "check_prop1",
    "verify_example1",
    "verify_example2",
    "prop2_audit",
    "direct_image",
    "pushforward_divisor",
    "is_smooth_point",
]


class InfiniteIntersection(ValueError):
    """The two curves share a component through the point."""


class JacobianIdenticallyZero(ArithmeticError):
    pass


class GenericityFailure(RuntimeError):
    pass


class ShearExhausted(RuntimeError):
    pass


class UnsupportedComponent(NotImplementedError):
    """A component whose image cannot be computed by rational parametrization."""


_UV = ("u", "v")


# ---------------------------------------------------------------------------
# divisors

@dataclass(frozen=True)
class PlaneDivisor:
    """Formal sum of pairwise coprime square-free forms."""

    components: tuple[tuple[HomogeneousForm, int], ...]

    def __post_init__(self):
        comps = []
        for form, k in self.components:
            if k < 1:
                raise ValueError("multiplicities must be positive")
            comps.append((HomogeneousForm.from_poly(form).primitive(), int(k)))
        object.__setattr__(self, "components", tuple(comps))

    @classmethod
    def from_form(cls, F: Poly) -> "PlaneDivisor":
        return cls(tuple(squarefree_decompose(HomogeneousForm.from_poly(F))))

    @property
    def total_degree(self) -> int:
        return sum(k * f.degree for f, k in self.components)

    def form(self) -> HomogeneousForm:
        out = HomogeneousForm({(0, 0, 0): 1})
        for f, k in self.components:
            out = out * f ** k
        return out

    def multiplicity_at(self, point: ProjectivePoint) -> int:
        return sum(k * point_multiplicity(f, point) for f, k in self.components)

    def multiplicity_of(self, curve: HomogeneousForm) -> int:
        """Largest a with curve^a dividing the divisor's form."""
        F = self.form()
        curve = HomogeneousForm.from_poly(curve)
        a = 0
        while True:
            try:
                F = divexact(F, curve)
            except ArithmeticError:
                return a
            a += 1

    def __str__(self):
        return " + ".join(f"{k}*[{f}]" if k > 1 else f"[{f}]"
                          for f, k in self.components) or "0"


def ramification_divisor(f: PlaneEndomorphism) -> PlaneDivisor:
    """Zero divisor of the Jacobian determinant; degree 3m - 3."""
    f.require_nonlinear()
    J = jacobian_determinant(f.forms)
    if J.is_zero:
        raise JacobianIdenticallyZero(f"Jacobian of {f} vanishes identically")
    R = PlaneDivisor.from_form(J)
    if R.total_degree != 3 * f.m - 3:
        raise TheoremViolation(f"ramification divisor of degree {R.total_degree}")
    return R


# ---------------------------------------------------------------------------
# local intersection numbers

def _truncate(P: Poly, n: int) -> Poly:
    return Poly._raw(P.gens, {e: c for e, c in P.terms.items() if sum(e) <= n})


def _fulton(F: Poly, G: Poly) -> int:
    """Intersection multiplicity at the origin of two plane polynomials.

    With no common component through the origin, I <= deg F * deg G = n, so
    m^n lies in the local ideal and by Nakayama terms of order > n (less
    what has already been counted) can be dropped at every step.
    """
    if F.is_zero or G.is_zero:
        raise InfiniteIntersection("zero polynomial")
    if F.evaluate((0, 0)) or G.evaluate((0, 0)):
        return 0
    h = gcd(F, G)
    if not h.is_constant() and h.evaluate((0, 0)) == 0:
        raise InfiniteIntersection("common component through the point")
    bound = F.total_degree * G.total_degree
    y = Poly.var(F.gens[1], F.gens)
    total = 0
    while True:
        F, G = _truncate(F, bound - total), _truncate(G, bound - total)
        if F.evaluate((0, 0)) or G.evaluate((0, 0)):
            return total
        if F.is_zero or G.is_zero:
            # G in m^(n+1) forces F to be a unit
            raise InfiniteIntersection("zero polynomial")  # pragma: no cover
        F0, G0 = F.specialize(1, 0), G.specialize(1, 0)
        r = F0.degree_in(0)
        s = G0.degree_in(0)
        if r > s:
            F, G, F0, G0, r, s = G, F, G0, F0, s, r
        if r < 0:
            if s < 0:
                raise InfiniteIntersection("common component through the point")
            # F = y * H, and I(y, G) is the order of G(x, 0) at 0
            total += min(e[0] for e in G0.terms)
            F = divexact(F, y)
            continue
        c = G0.terms[(s, 0)] / F0.terms[(r, 0)]
        shifted = {(e[0] + s - r, e[1]): v * c for e, v in F.terms.items()
                   if sum(e) + s - r <= bound - total}
        G = G - Poly._raw(F.gens, shifted)


def local_intersection(F: Poly, G: Poly, at: Sequence = (0, 0)) -> int:
    """Intersection multiplicity I_at(F, G) of two affine plane curves."""
    if F.nvars != 2 or G.nvars != 2:
        raise ValueError("local_intersection expects polynomials in two variables")
    G = F._coerce(G)
    if any(at):
        F, G = F.translate(at), G.translate(at)
    return _fulton(F, G)


def _at_origin(F: Poly, point: ProjectivePoint) -> Poly:
    k = point.chart
    aff = F.dehomogenize(k)
    a = point.affine(k)
    aff = aff.translate(a) if any(a) else aff
    return Poly._raw(_UV, aff.terms)


def intersection_at(F: Poly, G: Poly, point: ProjectivePoint) -> int:
    """Local intersection number of two ternary forms at a rational point."""
    return _fulton(_at_origin(F, point), _at_origin(G, point))


def point_multiplicity(F: Poly, point: ProjectivePoint) -> int:
    """Multiplicity of the curve F = 0 at the point (0 if not on it)."""
    return _at_origin(F, point).lowest_degree()


def is_smooth_point(F: Poly, point: ProjectivePoint) -> bool:
    return point_multiplicity(F, point) == 1


# ---------------------------------------------------------------------------
# fibres

def _nonzero_gcd(polys):
    h = None
    for q in polys:
        if not q.is_zero:
            h = q if h is None else gcd(h, q)
    return h


def rational_common_zeros(F: HomogeneousForm, G: HomogeneousForm) -> list[ProjectivePoint]:
    """Rational points of V(F, G), assumed finite."""
    pts = set()
    # line z = 0
    Fl, Gl = F.specialize(2, 0), G.specialize(2, 0)
    h = _nonzero_gcd([Fl, Gl])
    if h is None:
        raise InfiniteIntersection("both curves contain the line z = 0")
    if not h.is_constant():
        for (a, b), _ in binary_form_roots(h, (0, 1)):
            pts.add(ProjectivePoint(a, b, 0))
    # chart z = 1
    Fa, Ga = F.specialize(2, 1), G.specialize(2, 1)
    if Fa.degree_in(1) <= 0 and Ga.degree_in(1) <= 0:
        xs = _nonzero_gcd([Fa, Ga])
        if xs is not None and not xs.is_constant():
            raise InfiniteIntersection("common vertical line")
        return sorted(pts, key=lambda p: p.coords)
    r = resultant(Fa, Ga, 1)
    if r.is_zero:
        raise InfiniteIntersection("curves share a component")
    for x0, _ in rational_roots(r):
        hy = _nonzero_gcd([Fa.specialize(0, x0), Ga.specialize(0, x0)])
        if hy is None:
            raise InfiniteIntersection(f"common line x = {x0}")
        if hy.is_constant():
            continue
        for y0, _ in rational_roots(hy):
            pts.add(ProjectivePoint(x0, y0, 1))
    return sorted(pts, key=lambda p: p.coords)


class CRStatus(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class FiberReport:
    """Fibre of a map over a rational target point.

    ``rational_points`` pairs each rational fibre point with its local
    degree; ``irrational_mass`` is the total local degree of the remaining
    geometric points, so the two always add up to m^2.
    """

    target: ProjectivePoint
    m: int
    rational_points: tuple[tuple[ProjectivePoint, int], ...]
    irrational_mass: int
    status: CRStatus
    certificate: str

    @property
    def completely_ramified(self) -> bool:
        return self.status is CRStatus.TRUE

    @property
    def rational_mass(self) -> int:
        return sum(d for _, d in self.rational_points)

    @property
    def fully_rational(self) -> bool:
        return self.irrational_mass == 0


def _fiber_minors(f: PlaneEndomorphism, P: ProjectivePoint):
    k = P.chart
    return [f.forms[j] * P[k] - f.forms[k] * P[j] for j in range(3) if j != k]


def fiber(f: PlaneEndomorphism, P: ProjectivePoint) -> FiberReport:
    """Rational fibre points over P with their local degrees.

    With P_k the first nonzero coordinate of P, the fibre scheme is cut out
    by the two minors P_k f_j - P_j f_k (j != k): f_k does not vanish on the
    fibre, so these generate the ideal of f^{-1}(P) locally.
    """
    f.require_nonlinear()
    M1, M2 = _fiber_minors(f, P)
    points = rational_common_zeros(M1, M2)
    rat = tuple((x, intersection_at(M1, M2, x)) for x in points)
    total = f.m ** 2
    mass = sum(d for _, d in rat)
    if mass > total:
        raise TheoremViolation(f"fibre mass {mass} exceeds {total}")
    irr = total - mass
    if len(rat) == 1 and irr == 0:
        status, cert = CRStatus.TRUE, f"single rational point of local degree {total}"
    elif len(rat) >= 2:
        status, cert = CRStatus.FALSE, f"{len(rat)} distinct rational fibre points"
    elif len(rat) == 1:
        status, cert = CRStatus.FALSE, (
            f"rational point of local degree {rat[0][1]} < {total}")
    else:
        # a lone geometric fibre point would be Galois-stable, hence rational
        status, cert = CRStatus.FALSE, "no rational fibre point"
    return FiberReport(P, f.m, rat, irr, status, cert)


# ---------------------------------------------------------------------------
# direct image multiplicities

def _derive_seed(root: int, point: ProjectivePoint) -> int:
    h = hashlib.sha256(f"{root}|{point}".encode()).digest()
    return int.from_bytes(h[:8], "big")


def _random_line_through(point: ProjectivePoint, rng: random.Random, box: int = 10 ** 4):
    while True:
        v = [rng.randint(-box, box) for _ in range(3)]
        a, b, c = point.coords
        L = (b * v[2] - c * v[1], c * v[0] - a * v[2], a * v[1] - b * v[0])
        if any(L):
            return L


@dataclass(frozen=True)
class PushforwardResult:
    value: int
    method: str  # "exact" or "lower_bound"
    contributions: tuple[tuple[ProjectivePoint, int], ...]
    trials: tuple[int, ...]


def pushforward_multiplicity(f: PlaneEndomorphism, R: PlaneDivisor | None,
                             y: ProjectivePoint, seed: int = 0,
                             fibre: FiberReport | None = None,
                             max_lines: int = 5) -> PushforwardResult:
    """mult_y(f_* R) via the projection formula.

    For a general line L through y, mult_y(f_* R) = (f_* R . L)_y, which is
    the sum over fibre points x of I_x(R, f^* L).  Two random lines must
    agree on the minimal value; otherwise up to `max_lines` are tried.  Only
    rational fibre points are summed, so the result is a lower bound unless
    the fibre is fully rational.
    """
    f.require_nonlinear()
    R = ramification_divisor(f) if R is None else R
    Rform = R.form()
    fibre = fiber(f, y) if fibre is None else fibre
    rng = random.Random(_derive_seed(seed, y))
    trials: list[tuple[int, tuple]] = []
    for _ in range(max_lines):
        L = _random_line_through(y, rng)
        pull = f.f0 * L[0] + f.f1 * L[1] + f.f2 * L[2]
        try:
            contrib = tuple((x, intersection_at(Rform, pull, x))
                            for x, _ in fibre.rational_points)
        except InfiniteIntersection:
            continue
        trials.append((sum(c for _, c in contrib), contrib))
        low = min(t[0] for t in trials)
        if sum(1 for t in trials if t[0] == low) >= 2:
            best = next(t for t in trials if t[0] == low)
            method = "exact" if fibre.fully_rational else "lower_bound"
            return PushforwardResult(low, method, best[1], tuple(t[0] for t in trials))
    raise GenericityFailure(
        f"no two of {len(trials)} random lines through {y} agreed")


@dataclass(frozen=True)
class Prop1Check:
    """mult_y(f_* R) against the sum of (local degree - 1) over the fibre.

    When the fibre is not fully rational both sides are restricted to the
    rational fibre points (``partial``); the inequality holds term by term,
    so the restricted check is still sound.
    """

    target: ProjectivePoint
    lhs: int
    rhs: int
    partial: bool
    terms: tuple[tuple[ProjectivePoint, int, int], ...]  # (x, delta_x, I_x(R, f^*L))

    @property
    def slack(self) -> int:
        return self.lhs - self.rhs

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs and all(i >= d - 1 for _, d, i in self.terms)


def check_prop1(f: PlaneEndomorphism, y: ProjectivePoint, seed: int = 0,
                R: PlaneDivisor | None = None) -> Prop1Check:
    fibre = fiber(f, y)
    push = pushforward_multiplicity(f, R, y, seed=seed, fibre=fibre)
    contrib = dict(push.contributions)
    terms = tuple((x, d, contrib[x]) for x, d in fibre.rational_points)
    rhs = sum(d - 1 for _, d in fibre.rational_points)
    check = Prop1Check(y, push.value, rhs, not fibre.fully_rational, terms)
    if not check.holds:
        raise TheoremViolation(f"mult_y(f_*R) inequality fails at {y}: {check}")
    return check


# ---------------------------------------------------------------------------
# germ examples

def verify_example1(m: int) -> bool:
    """u = x^m, v = y^m: ramification x^(m-1) y^(m-1), preimage of uv = 0 reduced to xy."""
    if m < 2:
        raise ValueError("m must be at least two")
    x, y = Poly.var("x", ("x", "y")), Poly.var("y", ("x", "y"))
    u, v = x ** m, y ** m
    J = jacobian_determinant([u, v])
    locus = set(squarefree_decompose(J))
    pulled = {p for p, _ in squarefree_decompose(u * v)}
    return locus == {(x, m - 1), (y, m - 1)} and pulled == {x, y}


def verify_example2(m: int) -> bool:
    """u = (x^m - y^m)/2, v = xy: the ramification locus is x^m + y^m and
    the preimage of u^2 + v^m = 0 is twice the ramification divisor."""
    if m % 2 == 0 or not 3 <= m <= 9:
        raise ValueError("m must be odd with 3 <= m <= 9")
    gens = ("x", "y")
    x, y = Poly.var("x", gens), Poly.var("y", gens)
    u = (x ** m - y ** m) / 2
    v = x * y
    target = x ** m + y ** m
    J = jacobian_determinant([u, v])
    locus_ok = squarefree_decompose(J) == [(target.primitive(), 1)]
    identity_ok = u ** 2 + v ** m == target ** 2 / 4
    pulled = squarefree_decompose(u ** 2 + v ** m)
    double_ok = pulled == [(target.primitive(), 2)]
    return locus_ok and identity_ok and double_ok


# ---------------------------------------------------------------------------
# curves through completely ramified points

@dataclass(frozen=True)
class Prop2Audit:
    degree: int
    points: tuple[tuple[ProjectivePoint, bool, bool], ...]  # (point, smooth on D, completely ramified)
    count: int
    bound: int

    @property
    def holds(self) -> bool:
        return self.count <= self.bound

    @property
    def witnesses(self) -> tuple[ProjectivePoint, ...]:
        return tuple(p for p, sm, cr in self.points if sm and cr)


def prop2_audit(f: PlaneEndomorphism, D: HomogeneousForm,
                points: Sequence[ProjectivePoint]) -> Prop2Audit:
    """Count completely ramified points in the smooth locus of D (at most 3d - 1)."""
    f.require_nonlinear()
    D = HomogeneousForm.from_poly(D)
    if any(k > 1 for _, k in squarefree_decompose(D)):
        raise ValueError("D must be square-free")
    rows = []
    for P in points:
        if D.evaluate(P.coords) != 0:
            raise ValueError(f"{P} is not on D")
        smooth = is_smooth_point(D, P)
        rows.append((P, smooth, fiber(f, P).completely_ramified))
    count = sum(1 for _, sm, cr in rows if sm and cr)
    audit = Prop2Audit(D.degree, tuple(rows), count, 3 * D.degree - 1)
    if not audit.holds:
        raise TheoremViolation(f"{count} completely ramified smooth points on a "
                               f"curve of degree {D.degree}")
    return audit


# ---------------------------------------------------------------------------
# direct image of the ramification divisor

_ST = ("s", "t")


def _line_parametrization(L: HomogeneousForm):
    from .linalg import nullspace
    coeffs = [L.terms.get(e, Fraction(0)) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    p, q = nullspace([coeffs])
    return [Poly.linear([p[i], q[i]], _ST) for i in range(3)]


def _conic_parametrization(C: HomogeneousForm, search_height: int = 6):
    P = None
    for i in range(3):
        others = tuple(j for j in range(3) if j != i)
        line = C.specialize(i, 0)
        if line.is_zero:
            continue
        for (a, b), _ in binary_form_roots(line, others):
            v = [Fraction(0)] * 3
            v[others[0]], v[others[1]] = a, b
            cand = ProjectivePoint(*v)
            if is_smooth_point(C, cand):
                P = cand
                break
        if P is not None:
            break
    if P is None:
        for cand in small_points(search_height):
            if C.evaluate(cand.coords) == 0 and is_smooth_point(C, cand):
                P = cand
                break
    if P is None:
        raise UnsupportedComponent(f"no smooth rational point found on {C}")
    k = P.chart
    e = [[int(i == u) for i in range(3)] for u in range(3) if u != k]
    v = [Poly.linear([e[0][i], e[1][i]], _ST) for i in range(3)]
    Cv = C.subs(dict(zip(XYZ, v)), _ST)
    grad = [C.diff(i).evaluate(P.coords) for i in range(3)]
    lin = v[0] * grad[0] + v[1] * grad[1] + v[2] * grad[2]
    return [Cv * P[i] - lin * v[i] for i in range(3)]


def _implicitize(params: Sequence[Poly], n: int) -> Poly:
    """Equation (with multiplicity) of the image of P^1 under binary forms of degree n."""
    mats = ([[1, 0, 0], [0, 1, 0], [0, 0, 1]],
            [[1, 1, 1], [1, 2, 3], [1, 3, 7]],
            [[2, 1, 3], [1, 4, 1], [3, 1, 5]])
    gens = ("V", "W", "t")
    for M in mats:
        q = [sum((params[j] * M[i][j] for j in range(3)), Poly.const(0, _ST))
             for i in range(3)]
        if q[0].is_zero:
            continue
        q1 = [Poly._raw(gens, {(0, 0, e[1]): c for e, c in qi.specialize(0, 1).terms.items()})
              for qi in q]
        V = Poly.var("V", gens)
        W = Poly.var("W", gens)
        A = q1[1] - V * q1[0]
        B = q1[2] - W * q1[0]
        res = resultant(A, B, "t", degrees=(n, n))
        if res.is_zero:
            continue
        aff = res.restrict_gens(("V", "W"))
        if aff.total_degree > n:
            continue
        Gp = aff.homogenize("U", n, position=0)  # over (U, V, W)
        # back to target coordinates: (U, V, W) = M (X, Y, Z)
        imgs = [Poly.linear(M[i], XYZ) for i in range(3)]
        return Gp.subs(dict(zip(("U", "V", "W"), imgs)), XYZ)
    raise ArithmeticError("implicitization failed for all coordinate choices")


def direct_image(f: PlaneEndomorphism, C: HomogeneousForm) -> tuple[HomogeneousForm, int]:
    """Image curve of an irreducible component and the degree of f on it.

    Returns (G, delta) with f_*[C] = delta * [G].  Only lines and conics with
    a smooth rational point are supported.
    """
    C = HomogeneousForm.from_poly(C)
    if C.degree == 1:
        param = _line_parametrization(C)
    elif C.degree == 2:
        param = _conic_parametrization(C)
    else:
        raise UnsupportedComponent(f"component of degree {C.degree}: {C}")
    n = f.m * C.degree
    image = [fi.subs(dict(zip(XYZ, param)), _ST) for fi in f.forms]
    common = gcd(gcd(image[0], image[1]), image[2])
    if not common.is_constant():
        raise ArithmeticError("parametrized image has base points")
    H = _implicitize(image, n)
    parts = squarefree_decompose(H)
    if len(parts) != 1:
        raise ArithmeticError(f"image of an irreducible curve split as {parts}")
    G, delta = parts[0]
    if G.total_degree * delta != n:
        raise ArithmeticError("projection formula degree mismatch")
    return HomogeneousForm.from_poly(G), delta


def pushforward_divisor(f: PlaneEndomorphism, R: PlaneDivisor | None = None) -> PlaneDivisor:
    """f_* R as a divisor, component by component.

    Raises :class:`UnsupportedComponent` when R has a component other than a
    line or a conic with a rational point.
    """
    f.require_nonlinear()
    R = ramification_divisor(f) if R is None else R
    acc: dict[HomogeneousForm, int] = {}
    for comp, k in R.components:
        for irr, j in factor_components(comp):
            G, delta = direct_image(f, irr)
            G = G.primitive()
            acc[G] = acc.get(G, 0) + k * j * delta
    B = PlaneDivisor(tuple(sorted(acc.items(), key=lambda t: str(t[0]))))
    if B.total_degree != 3 * f.m ** 2 - 3 * f.m:
        raise TheoremViolation(f"direct image of degree {B.total_degree}")
    return B
