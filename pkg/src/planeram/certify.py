"""Scalar inequalities and combinatorial certificates.

Every numeric bound is exact (integers and Fractions).  "Less than X"
statements are returned as inclusive maxima X - 1, with the strictness
recorded alongside.

Synthetic configurations are legal input: for them the inequalities are
only reported.  Pass ``realizable=True`` for data computed from an actual
map or curve, and a failed inequality becomes a :class:`TheoremViolation`.
"""

from __future__ import annotations

import enum
import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import TheoremViolation
from .polycore import Poly

__all__ = [
    "TheoremViolation",
    "InvariantViolation",
    "InapplicablePart",
    "BoundParams",
    "HurwitzCheck",
    "hurwitz_contradiction",
    "Prop2Conclusion",
    "prop2_inequality",
    "theorem1_cubic_multiplicity",
    "theorem1_identity",
    "theorem1_ten_cubics",
    "prop3_star",
    "prop3_reduction_identity",
    "c_lower_bound",
    "mc_exceeds_N",
    "genus_bound",
    "GenusBound",
    "SlicePoint",
    "CurveSlice",
    "Lemma5Result",
    "lemma5_check",
    "corollary_checks",
    "MultiplicityConfig",
    "ConfigPoint",
    "Component",
    "Prop5Report",
    "prop5_certify",
    "prop4_bound",
    "prop4_dimension_constant",
    "prop4_fixed_part_max",
    "ep_condition",
    "remark2_sweep",
    "theorem2_bound",
    "REMARK1_BOUNDS",
    "multiplicity_config_from_map",
    "Lemma5Geometric",
    "lemma5_geometric",
    "high_multiplicity_points",
    "lemma5_slices",
]


class InvariantViolation(ValueError):
    pass


class InapplicablePart(ValueError):
    pass


# ---------------------------------------------------------------------------
# model contradiction

@dataclass(frozen=True)
class HurwitzCheck:
    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs


def hurwitz_contradiction(m: int, d: int) -> HurwitzCheck:
    """md(md - 3) against m^2 d(d - 3) + 3d(m^2 - 1); lhs - rhs = 3d(1 - m)."""
    if m < 1 or d < 1:
        raise ValueError("m and d must be positive")
    return HurwitzCheck(m * d * (m * d - 3), m * m * d * (d - 3) + 3 * d * (m * m - 1))


# ---------------------------------------------------------------------------
# curves through completely ramified points

class Prop2Conclusion(enum.Enum):
    FAILS = "inequality fails"
    EXCLUDED_ELSEWHERE = "m=2,c=1,d=2 excluded elsewhere"
    NON_INTEGRAL = "mc/d not an integer"
    C_EXCEEDS_DM = "c exceeds dm"
    UNEXPLAINED = "unexplained"


def prop2_inequality(m: int, d: int, c: int) -> tuple[bool, Prop2Conclusion]:
    """c(c - 3) >= dmc - 3d, with the case analysis that rules it out.

    The inequality forces c < d; when mc > 3 it is then self-contradictory,
    leaving m = 2, c = 1, where integrality of mc/d forces d = 2.
    """
    if m < 2 or d < 1 or c < 1:
        raise ValueError("need m >= 2, d >= 1, c >= 1")
    holds = c * (c - 3) >= d * m * c - 3 * d
    if not holds:
        return False, Prop2Conclusion.FAILS
    if c > d * m:
        return True, Prop2Conclusion.C_EXCEEDS_DM
    if (m * c) % d:
        return True, Prop2Conclusion.NON_INTEGRAL
    if (m, c, d) == (2, 1, 2):
        return True, Prop2Conclusion.EXCLUDED_ELSEWHERE
    return True, Prop2Conclusion.UNEXPLAINED


# ---------------------------------------------------------------------------
# nine points and ten cubics

def theorem1_identity() -> bool:
    """9m^2 - 9m - 9a - (8(m^2-1-a) + 2(m^2-1-2a)) == 3a - (m^2 + 9m - 10)."""
    gens = ("m", "a")
    m, a = Poly.var("m", gens), Poly.var("a", gens)
    lower = (m ** 2 - 1 - a) * 8 + (m ** 2 - 1 - a * 2) * 2
    expanded_ok = lower == m ** 2 * 10 - 10 - a * 12
    diff = m ** 2 * 9 - m * 9 - a * 9 - lower
    return expanded_ok and diff == a * 3 - (m ** 2 + m * 9 - 10)


def theorem1_cubic_multiplicity(m: int) -> Fraction:
    """Lower bound (m^2 + 9m - 10)/3 for the multiplicity of the cubic in f_*R."""
    if m < 2:
        raise ValueError("m must be at least two")
    if not theorem1_identity():
        raise TheoremViolation("rearrangement identity failed")
    return Fraction(m * m + 9 * m - 10, 3)


def theorem1_ten_cubics(m: int) -> bool:
    """10(m^2 + 9m - 10) > 3m^2 - 3m."""
    return 10 * (m * m + 9 * m - 10) > 3 * m * m - 3 * m


# ---------------------------------------------------------------------------
# higher dimension

@dataclass(frozen=True)
class BoundParams:
    m: int
    N: int
    c: Fraction
    d: int

    def __post_init__(self):
        object.__setattr__(self, "c", Fraction(self.c))
        if self.m < 1 or self.N < 3 or self.d < 1 or self.c < 0:
            raise InvariantViolation(f"invalid parameters {self}")


def _prop3_sides(m, N, c, d, M):
    # (*) multiplied through by d
    lhs = (c - N + (N - 3) * m) * c * M * d
    rhs = m * c * M * d * (d - 3) + N * d * M * (m * c - d)
    return lhs, rhs


def prop3_reduction_identity() -> bool:
    """d * ((*) lhs - rhs) == M d (c^2 - Nc - (mcd - Nd)) as polynomials, M = m^(N-3)."""
    gens = ("m", "N", "c", "d", "M")
    m, N, c, d, M = (Poly.var(g, gens) for g in gens)
    lhs, rhs = _prop3_sides(m, N, c, d, M)
    return lhs - rhs == M * d * (c ** 2 - N * c - (m * c * d - N * d))


def prop3_star(params: BoundParams) -> tuple[Fraction, Fraction, bool]:
    """Both sides of (*) with the common factor m^(N-3) cancelled, and c^2 - Nc >= mcd - Nd."""
    m, N, c, d = params.m, params.N, params.c, params.d
    lhs = (c - N + (N - 3) * m) * c
    rhs = Fraction(m) * c * (d - 3) + N * d * (Fraction(m) * c / d - 1)
    reduced = c * c - N * c >= m * c * d - N * d
    if (lhs >= rhs) != reduced:
        raise TheoremViolation("(*) and its reduced form disagree")
    return lhs, rhs, reduced


def c_lower_bound(m: int, N: int, d: int) -> Fraction:
    """md / (mN - N + 1)."""
    return Fraction(m * d, m * N - N + 1)


def mc_exceeds_N(m: int, N: int, d: int) -> bool:
    return m * c_lower_bound(m, N, d) > N


# ---------------------------------------------------------------------------
# points of high multiplicity

@dataclass(frozen=True)
class GenusBound:
    value: int
    coarse: Fraction


def genus_bound(b, s: int) -> GenusBound:
    """floor(b(b-1) / (s(s-1))) and the coarse 2(b/s)^2."""
    b = Fraction(b)
    if b < 1 or s < 2:
        raise ValueError("need b >= 1 and s >= 2")
    return GenusBound(math.floor(b * (b - 1) / (s * (s - 1))), 2 * (b / s) ** 2)


@dataclass(frozen=True)
class SlicePoint:
    mult_D: int
    h: Fraction = Fraction(1)
    mult_B: int | None = None
    label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "h", Fraction(self.h))
        if not 0 <= self.h <= 1:
            raise InvariantViolation("weights must lie in [0, 1]")
        if self.mult_D < 1:
            raise InvariantViolation("points of the slice lie on D")

    @property
    def smooth(self) -> bool:
        return self.mult_D == 1


@dataclass(frozen=True)
class CurveSlice:
    """An irreducible curve D of degree d, its multiplicity a in B, and D ∩ E_s."""

    d: int
    a: int
    points: tuple[SlicePoint, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if self.d < 1 or self.a < 0:
            raise InvariantViolation("need d >= 1 and a >= 0")

    def q(self, r: int, h=None) -> Fraction:
        hs = [p.h for p in self.points] if h is None else h
        return sum((w * p.mult_D ** r for w, p in zip(hs, self.points)), Fraction(0))

    def with_weights(self, h: Sequence) -> "CurveSlice":
        return CurveSlice(self.d, self.a, tuple(
            SlicePoint(p.mult_D, Fraction(w), p.mult_B, p.label) for p, w in zip(self.points, h)))

    @property
    def q_reg(self) -> int:
        return sum(1 for p in self.points if p.smooth)

    @property
    def q_sing(self) -> int:
        return sum(1 for p in self.points if not p.smooth)

    @property
    def mu(self) -> int:
        return sum(p.mult_D for p in self.points if not p.smooth)


@dataclass(frozen=True)
class Lemma5Result:
    lhs: Fraction
    rhs: Fraction
    q1: Fraction
    q2: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs


def lemma5_check(slc: CurveSlice, b, s: int, realizable: bool = False) -> Lemma5Result:
    """bd - s q_{1,h} >= a(d^2 - q_{2,h})."""
    b = Fraction(b)
    if b < slc.a * slc.d:
        raise InvariantViolation("b < ad")
    q1, q2 = slc.q(1), slc.q(2)
    res = Lemma5Result(b * slc.d - s * q1, slc.a * (slc.d ** 2 - q2), q1, q2)
    if realizable and not res.holds:
        raise TheoremViolation(f"Lemma 5 inequality fails: {res}")
    return res


@dataclass(frozen=True)
class PartResult:
    part: str
    applicable: bool
    value: Fraction | None = None
    bound: Fraction | None = None
    note: str = ""

    @property
    def passed(self) -> bool | None:
        if not self.applicable:
            return None
        return self.value <= self.bound


def _part(slc, b, s, name, subset=None) -> PartResult:
    d, a = slc.d, slc.a
    bound = Fraction(b) * d / s
    pts = slc.points
    if name == "a":
        if a != 0:
            return PartResult("a", False, note="D is a component of B")
        lemma5_check(slc.with_weights([1] * len(pts)), b, s)
        return PartResult("a", True, Fraction(len(pts)), bound)
    if name == "b":
        if a < 1 or not d > Fraction(b) / s:
            return PartResult("b", False, note="needs a >= 1 and d > b/s")
        h = [1 if p.smooth else 0 for p in pts]
        lemma5_check(slc.with_weights(h), b, s)
        return PartResult("b", True, Fraction(slc.q_reg), bound)
    if name == "c":
        I = [i for i, p in enumerate(pts) if not p.smooth] if subset is None else list(subset)
        if sum(pts[i].mult_D for i in I) > d * d:
            return PartResult("c", False, note="sum of multiplicities over I exceeds d^2")
        h = [Fraction(1, p.mult_D) if i in I else 0 for i, p in enumerate(pts)]
        lemma5_check(slc.with_weights(h), b, s)
        return PartResult("c", True, Fraction(len(I)), bound)
    if name == "d":
        q_reg, q_sing, mu = slc.q_reg, slc.q_sing, slc.mu
        if q_reg >= d * d:
            return PartResult("d", False, note="q_reg >= d^2")
        value = Fraction(q_reg, 2) + q_sing
        if q_reg + mu <= d * d:
            via_c = _part(slc, b, s, "c", range(len(pts)))
            return PartResult("d", True, value, bound, f"via part c: |D ∩ E_s| = {via_c.value}")
        t = Fraction(d * d - q_reg, mu)
        if not 0 < t < 1:
            raise InvariantViolation(f"weight t = {t} outside (0, 1)")
        h = [1 if p.smooth else t / p.mult_D for p in pts]
        lemma5_check(slc.with_weights(h), b, s)
        return PartResult("d", True, value, bound, f"t = {t}")
    raise ValueError(f"unknown part {name!r}")


def corollary_checks(slc: CurveSlice, b, s: int, parts: str | None = None,
                     subset: Sequence[int] | None = None,
                     realizable: bool = False) -> dict:
    """Evaluate the corollary parts a-d on a slice.

    With ``parts`` given explicitly, an inapplicable part raises
    :class:`InapplicablePart`; otherwise it is recorded as such.
    """
    names = parts or "abcd"
    out = {}
    for name in names:
        r = _part(slc, b, s, name, subset if name == "c" else None)
        if parts is not None and not r.applicable:
            raise InapplicablePart(f"part {name}: {r.note}")
        if realizable and r.applicable and not r.passed:
            raise TheoremViolation(f"corollary part {name} fails: {r}")
        out[name] = r
    d = slc.d
    out["mu"] = slc.mu
    out["mu_lt_d2"] = slc.mu < d * d
    out["q_sing_le_mu_half"] = 2 * slc.q_sing <= slc.mu
    if realizable and not (out["mu_lt_d2"] and out["q_sing_le_mu_half"]):
        raise TheoremViolation("singular-point count facts fail on a realizable slice")
    return out


# ---------------------------------------------------------------------------
# multiplicity configurations

@dataclass(frozen=True)
class Component:
    degree: int
    multiplicity: int
    label: str = ""


@dataclass(frozen=True)
class ConfigPoint:
    """A point with its multiplicity on each component of B (0 if not on it)."""

    on: tuple[int, ...]
    mult_B: int | None = None

    def total(self, comps: Sequence[Component]) -> int:
        return sum(c.multiplicity * k for c, k in zip(comps, self.on))


@dataclass(frozen=True)
class MultiplicityConfig:
    b: Fraction
    s: int
    components: tuple[Component, ...]
    points: Mapping[str, ConfigPoint]
    E_s: tuple[str, ...]
    exhaustive: bool = True

    def __post_init__(self):
        object.__setattr__(self, "b", Fraction(self.b))
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "E_s", tuple(self.E_s))
        if self.s < 2 or self.b <= 0:
            raise InvariantViolation("need s >= 2 and b > 0")
        for c in self.components:
            if c.degree < 1 or c.multiplicity < 1:
                raise InvariantViolation(f"bad component {c}")
        if self.exhaustive and sum(c.degree * c.multiplicity for c in self.components) != self.b:
            raise InvariantViolation("b differs from the sum of a_i d_i")
        for pid in self.E_s:
            if pid not in self.points:
                raise InvariantViolation(f"unknown point {pid}")
            pt = self.points[pid]
            if len(pt.on) != len(self.components):
                raise InvariantViolation(f"point {pid} needs one entry per component")
            mult = pt.mult_B if pt.mult_B is not None else pt.total(self.components)
            if self.exhaustive and pt.mult_B is not None and pt.mult_B != pt.total(self.components):
                raise InvariantViolation(f"point {pid}: mult_B inconsistent with components")
            if mult < self.s:
                raise InvariantViolation(f"point {pid} has multiplicity {mult} < s")

    @property
    def N(self) -> int:
        return math.floor(self.b / self.s) + 1

    def to_json(self) -> dict:
        return {
            "b": str(self.b),
            "s": str(self.s),
            "components": [{"degree": str(c.degree), "multiplicity": str(c.multiplicity),
                            "label": c.label} for c in self.components],
            "points": {pid: {"on": [str(k) for k in p.on],
                             **({"mult_B": str(p.mult_B)} if p.mult_B is not None else {})}
                       for pid, p in sorted(self.points.items())},
            "E_s": list(self.E_s),
            "exhaustive": self.exhaustive,
        }

    @classmethod
    def from_json(cls, data) -> "MultiplicityConfig":
        if isinstance(data, str):
            data = json.loads(data)
        comps = tuple(Component(int(c["degree"]), int(c["multiplicity"]), c.get("label", ""))
                      for c in data["components"])
        points = {pid: ConfigPoint(tuple(int(k) for k in p["on"]),
                                   int(p["mult_B"]) if "mult_B" in p else None)
                  for pid, p in data["points"].items()}
        return cls(Fraction(data["b"]), int(data["s"]), comps, points,
                   tuple(data["E_s"]), bool(data.get("exhaustive", True)))


@dataclass(frozen=True)
class Prop5Report:
    N: int
    bound: int  # inclusive maximum, the theorem says |E_s| < bound + 1
    size: int
    hypothesis_holds: bool
    hypothesis_detail: tuple[dict, ...]
    component_slices: tuple[dict, ...]
    realizable: bool

    @property
    def satisfied(self) -> bool:
        return self.size <= self.bound

    def to_json(self) -> dict:
        return {
            "N": str(self.N),
            "bound": str(self.bound),
            "strict_bound": str(self.bound + 1),
            "E_s": str(self.size),
            "satisfied": self.satisfied,
            "hypothesis_holds": self.hypothesis_holds,
            "hypothesis": list(self.hypothesis_detail),
            "component_slices": list(self.component_slices),
            "realizable": self.realizable,
        }


def prop5_certify(config: MultiplicityConfig, realizable: bool = False) -> Prop5Report:
    """Check the smooth-locus hypothesis and |E_s| < 4N^2."""
    N = config.N
    b, s = config.b, config.s
    detail = []
    slices = []
    for i, comp in enumerate(config.components):
        on = [config.points[p].on[i] for p in config.E_s if config.points[p].on[i] > 0]
        smooth = sum(1 for k in on if k == 1)
        low = comp.degree <= b / s
        ok = (not low) or smooth <= N * comp.degree - 1
        detail.append({"component": str(i), "degree": str(comp.degree),
                       "low_degree": low, "smooth_points": str(smooth),
                       "allowed": str(N * comp.degree - 1) if low else "unbounded",
                       "ok": ok})
        # "any curve of degree d carries < (3/2) N d points of E_s"
        slices.append({"component": str(i), "points": str(len(on)),
                       "limit": str(Fraction(3 * N * comp.degree, 2)),
                       "below": Fraction(len(on)) < Fraction(3 * N * comp.degree, 2)})
    hyp = all(d["ok"] for d in detail)
    report = Prop5Report(N, 4 * N * N - 1, len(config.E_s), hyp, tuple(detail),
                         tuple(slices), realizable)
    if realizable and hyp:
        if not report.satisfied:
            raise TheoremViolation(f"|E_s| = {report.size} >= 4N^2 = {4 * N * N}")
        bad = [sl for sl in slices if not sl["below"]]
        if bad:
            raise TheoremViolation(f"components with too many points of E_s: {bad}")
    return report


# ---------------------------------------------------------------------------
# bounds in higher dimension

REMARK1_BOUNDS = {3: 11, 4: 23}  # informational: |E| < 12 for N = 3, < 24 for N = 4


def prop4_bound(N: int) -> int:
    """Largest possible |E|: E has less than 6N^2 points."""
    if N < 3:
        raise ValueError("N must be at least three")
    return 6 * N * N - 1


def prop4_dimension_constant(N: int) -> int:
    """4N(4N+3)/2 - 6N^2, which equals 2N^2 + 6N."""
    return 4 * N * (4 * N + 3) // 2 - 6 * N * N


def prop4_fixed_part_max(N: int) -> int:
    """Largest fixed-part degree l with (4N-l)(4N-l+3) >= 4N^2 + 12N."""
    return max(l for l in range(0, 4 * N + 1)
               if (4 * N - l) * (4 * N - l + 3) >= 4 * N * N + 12 * N)


def ep_condition(tau: int, s: int, t: int, N: int) -> bool:
    """t(tau - t + 3) >= Nt + (t-1)(t-2)/2."""
    if not 0 < t < s:
        raise ValueError("need 0 < t < s")
    return t * (tau - t + 3) >= N * t + Fraction((t - 1) * (t - 2), 2)


def remark2_sweep(Ns: Sequence[int] = range(3, 21)) -> list[dict]:
    """Arithmetic of the EP step for every N and 0 <= l < 4N/3.

    For each (N, l): A = 4N^2 - 4Nl + (l-1)(l-2)/2, tau = 4N - l,
    s = floor(sqrt(A)).  Records whether tau > s - 3 + A/s, whether
    ep_condition holds for all 0 < t < s, and whether the points left on the
    free part number at least A.  When A <= 0 the free part imposes no
    conditions at all and the step is not needed.
    """
    rows = []
    for N in Ns:
        l = 0
        while 3 * l < 4 * N:
            A = 4 * N * N - 4 * N * l + (l - 1) * (l - 2) // 2
            tau = 4 * N - l
            free = 4 * N * N - N * l - l * (l - 3) // 2
            row = {"N": N, "l": l, "A": A, "tau": tau, "free_points": free}
            if A <= 0:
                row.update(status="no_conditions", s=None, tau_ok=None, t_ok=None,
                           enough_points=None)
            else:
                s = math.isqrt(A)
                tau_ok = tau > s - 3 + Fraction(A, s)
                t_ok = all(ep_condition(tau, s, t, N) for t in range(1, s))
                row.update(status="ep_applies" if tau_ok and t_ok else "fails",
                           s=s, tau_ok=tau_ok, t_ok=t_ok, enough_points=free >= A)
            rows.append(row)
            l += 1
    return rows


def theorem2_bound(N: int) -> tuple[int, int]:
    """(4N^2 - 1, N(N-1)/2): the bound and the power-map witness count."""
    if N < 3:
        raise ValueError("N must be at least three")
    bound = 4 * N * N - 1
    witness = N * (N - 1) // 2
    if witness > bound:
        raise TheoremViolation("power-map witness exceeds the bound")
    return bound, witness


# ---------------------------------------------------------------------------
# data derived from actual maps

def multiplicity_config_from_map(f, points, B=None, s: int | None = None) -> MultiplicityConfig:
    """Configuration for B = f_*R, s = m^2 - 1 and the given points.

    Points of multiplicity below s on B are kept in the table but left out
    of E_s.
    """
    from .ramify import point_multiplicity, pushforward_divisor
    B = pushforward_divisor(f) if B is None else B
    s = f.m ** 2 - 1 if s is None else s
    comps = tuple(Component(F.total_degree, k, str(F)) for F, k in B.components)
    table = {}
    es = []
    for P in points:
        on = tuple(point_multiplicity(F, P) for F, _ in B.components)
        cp = ConfigPoint(on, sum(k * c.multiplicity for k, c in zip(on, comps)))
        table[str(P)] = cp
        if cp.mult_B >= s:
            es.append(str(P))
    return MultiplicityConfig(Fraction(B.total_degree), s, comps, table, tuple(es))


@dataclass(frozen=True)
class Lemma5Geometric:
    """Both routes for one slice.

    ``total`` is D'.D read off the restriction of D' to a parametrization of
    D; ``local`` lists, per point of D ∩ E_s, the Fulton intersection number,
    the root order along the parametrization, and mult_y(D').
    """

    slice: CurveSlice
    combinatorial: Lemma5Result
    b: int
    s: int
    total: int
    local: tuple[tuple[int, int, int], ...]

    @property
    def consistent(self) -> bool:
        d, a = self.slice.d, self.slice.a
        if self.total != (self.b - a * d) * d:
            return False
        if sum(i for i, _, _ in self.local) > self.total:
            return False
        for (i, order, mdp), p in zip(self.local, self.slice.points):
            if i != order or i < mdp * p.mult_D:
                return False
            if p.h * mdp * p.mult_D < p.h * (self.s - a * p.mult_D) * p.mult_D:
                return False
        lhs, rhs = self.combinatorial.lhs, self.combinatorial.rhs
        chain = self.slice.q(1) * self.s - a * self.slice.q(2)
        return lhs - rhs == self.total - chain and self.total >= chain


def _parametrize(D):
    from .ramify import _conic_parametrization, _line_parametrization
    if D.total_degree == 1:
        return _line_parametrization(D)
    if D.total_degree == 2:
        return _conic_parametrization(D)
    raise ValueError("slices are parametrized lines or conics")


def _parameter_of(param, P):
    """(s0, t0) with param(s0, t0) proportional to P."""
    from .polycore import binary_form_roots, gcd
    from .projmap import ProjectivePoint
    k = P.chart
    minors = [q for q in (param[j] * P[k] - param[k] * P[j] for j in range(3) if j != k)
              if not q.is_zero]
    h = minors[0] if len(minors) == 1 else gcd(*minors)
    for (s0, t0), _ in binary_form_roots(h, (0, 1)):
        vals = [q.evaluate((s0, t0)) for q in param]
        if any(vals) and ProjectivePoint(*vals) == P:
            return s0, t0
    raise ValueError(f"{P} is not on the parametrized curve")


def _root_order(form_st, P, param) -> int:
    from .polycore import NotDivisible, divexact
    s0, t0 = _parameter_of(param, P)
    lin = Poly.linear([t0, -s0], ("s", "t"))
    order = 0
    while True:
        try:
            form_st = divexact(form_st, lin)
        except NotDivisible:
            return order
        order += 1


def lemma5_geometric(B, D, E_s, h: Sequence, s: int) -> Lemma5Geometric:
    """Combinatorial and geometric sides of Lemma 5 for an actual curve D.

    D must be an irreducible line or conic (with a rational point); E_s
    points of multiplicity >= s on B.  Raises TheoremViolation if either
    route contradicts the lemma.
    """
    from .polycore import XYZ, HomogeneousForm, divexact, factor_components, gcd
    from .ramify import intersection_at, point_multiplicity
    D = HomogeneousForm.from_poly(D).primitive()
    if [k for _, k in factor_components(D)] != [1]:
        raise ValueError("D must be irreducible")
    a = B.multiplicity_of(D)
    Dp = divexact(B.form(), D ** a) if a else B.form()
    if not gcd(Dp, D).is_constant():
        raise TheoremViolation("D' still contains D")
    b, d = B.total_degree, D.total_degree
    param = _parametrize(D)
    restricted = Dp.subs(dict(zip(XYZ, param)), ("s", "t"))
    if restricted.is_zero:
        raise TheoremViolation("D' vanishes on D")
    # the parametrization has degree d, so deg(D' o param) = (b - ad) d = D'.D
    total = restricted.total_degree
    on_D = [y for y in E_s if D.evaluate(y.coords) == 0]
    hs = [Fraction(w) for w in h][:len(on_D)]
    hs += [Fraction(1)] * (len(on_D) - len(hs))
    pts, local = [], []
    for y, w in zip(on_D, hs):
        mB = B.multiplicity_at(y)
        if mB < s:
            raise ValueError(f"{y} has multiplicity {mB} < s on B")
        mD = point_multiplicity(D, y)
        pts.append(SlicePoint(mD, w, mB, str(y)))
        local.append((intersection_at(Dp, D, y), _root_order(restricted, y, param),
                      point_multiplicity(Dp, y)))
    slc = CurveSlice(d, a, tuple(pts))
    comb = lemma5_check(slc, b, s, realizable=True)
    geo = Lemma5Geometric(slc, comb, b, s, total, tuple(local))
    if not geo.consistent:
        raise TheoremViolation(f"geometric and combinatorial Lemma 5 disagree: {geo}")
    return geo


def high_multiplicity_points(B, s: int, extra=()) -> list:
    """Rational points of multiplicity >= s on B found among pairwise
    intersections of components, singular points of components and `extra`."""
    from .ramify import InfiniteIntersection, rational_common_zeros
    forms = [F for F, _ in B.components]
    cand = set(extra)
    for i, F in enumerate(forms):
        for G in forms[i + 1:]:
            cand.update(rational_common_zeros(F, G))
        if F.total_degree > 1:
            try:
                cand.update(p for p in rational_common_zeros(F.diff(0), F.diff(1))
                            if F.evaluate(p.coords) == 0)
            except InfiniteIntersection:
                pass
    return sorted((p for p in cand if B.multiplicity_at(p) >= s), key=lambda p: p.coords)


def _random_weight(rng: random.Random) -> Fraction:
    den = rng.randint(1, 6)
    return Fraction(rng.randint(0, den), den)


def lemma5_slices(f, rng: random.Random, count: int, B=None):
    """Yield `count` geometric Lemma 5 checks on curves through data of B = f_*R.

    Curves are components of B that are lines or conics, lines through
    pairs of high-multiplicity points, random lines and conics through some
    of them, and random lines; thresholds s range over 2..max multiplicity.
    """
    from .pointconf import linear_system
    from .polycore import HomogeneousForm, factor_components
    from .ramify import pushforward_divisor
    B = pushforward_divisor(f) if B is None else B
    top = max(B.multiplicity_at(p) for p in high_multiplicity_points(B, 2)) \
        if high_multiplicity_points(B, 2) else 2
    produced = 0
    while produced < count:
        s = rng.randint(2, max(2, top))
        pts = high_multiplicity_points(B, s)
        kind = rng.choice(("component", "pair", "line_through", "conic_through", "free_line"))
        D = None
        if kind == "component":
            low = [F for F, _ in B.components if F.total_degree <= 2]
            D = rng.choice(low) if low else None
        elif kind == "pair" and len(pts) >= 2:
            P, Q = rng.sample(pts, 2)
            D = linear_system([P, Q], 1)[0]
        elif kind == "line_through" and pts:
            basis = linear_system([rng.choice(pts)], 1)
            D = sum((g * rng.randint(-9, 9) for g in basis), basis[0] * 0)
        elif kind == "conic_through" and pts:
            chosen = rng.sample(pts, rng.randint(1, min(len(pts), 4)))
            basis = linear_system(chosen, 2)
            D = sum((g * rng.randint(-9, 9) for g in basis), basis[0] * 0)
        elif kind == "free_line":
            D = Poly.linear([rng.randint(-9, 9) for _ in range(3)])
        if D is None or D.is_zero:
            continue
        D = HomogeneousForm.from_poly(D)
        if D.total_degree not in (1, 2) or [k for _, k in factor_components(D)] != [1]:
            continue
        weights = [_random_weight(rng) for _ in pts]
        yield lemma5_geometric(B, D, pts, weights, s)
        produced += 1
