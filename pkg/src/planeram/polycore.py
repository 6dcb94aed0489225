"""Exact polynomial arithmetic over the rationals and prime fields.

Polynomials are sparse maps from exponent tuples to :class:`fractions.Fraction`
coefficients.  Values are immutable; every operation returns a new object.

Terms are ordered graded-lexicographically with the generators in the order
given (``x > y > z`` for ternary forms).  That order is used for printing,
for leading terms in exact division and for gcd normalization.

Text grammar
------------
Terms ``[coef][*]var[^exp]`` joined by ``+``/``-``; ``coef`` is an integer or
``p/q``; whitespace is ignored::

    >>> parse_poly("x^2*y + 3/2*z^3 - y*z^2")
    Poly('x^2*y + 3/2*z^3 - y*z^2')
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Mapping, Sequence, Union

from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyRing

__all__ = [
    "DEGREE_CAP",
    "XYZ",
    "DegreeCapExceeded",
    "VariableMismatch",
    "NotDivisible",
    "ResultantError",
    "BadReduction",
    "Poly",
    "HomogeneousForm",
    "AffinePolynomial",
    "PrimeFieldPolynomial",
    "parse_poly",
    "parse_form",
    "monomials",
    "divexact",
    "gcd",
    "squarefree_decompose",
    "resultant",
    "rational_roots",
    "binary_form_roots",
    "factor_components",
    "jacobian_determinant",
]

DEGREE_CAP = 64
XYZ = ("x", "y", "z")
GRAMMAR_VARS = frozenset("xyzuv")

Number = Union[int, Fraction]
Exponent = tuple


class DegreeCapExceeded(ValueError):
    pass


class VariableMismatch(ValueError):
    pass


class NotDivisible(ArithmeticError):
    pass


class ResultantError(ValueError):
    pass


class BadReduction(ArithmeticError):
    """A coefficient denominator vanishes modulo the prime."""


def _key(exp: Exponent):
    return (sum(exp), exp)


def monomials(nvars: int, degree: int) -> list[Exponent]:
    """Exponent tuples of total degree `degree`, largest first."""
    if nvars == 1:
        return [(degree,)]
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - first):
            out.append((first,) + rest)
    return out


class Poly:
    """Sparse multivariate polynomial with rational coefficients."""

    __slots__ = ("gens", "_terms", "_hash")

    def __init__(self, terms: Mapping[Sequence[int], Number] | None = None,
                 gens: Sequence[str] = XYZ):
        gens = tuple(gens)
        n = len(gens)
        clean: dict[Exponent, Fraction] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n or min(exp, default=0) < 0:
                raise ValueError(f"bad exponent {exp} for generators {gens}")
            c = Fraction(c)
            if c:
                clean[exp] = clean.get(exp, 0) + c
                if not clean[exp]:
                    del clean[exp]
        self._init(gens, clean)

    def _init(self, gens, terms):
        if terms and max(sum(e) for e in terms) > DEGREE_CAP:
            raise DegreeCapExceeded(
                f"total degree exceeds the cap of {DEGREE_CAP}")
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "_terms", terms)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, gens, terms):
        obj = cls.__new__(cls)
        Poly._init(obj, gens, terms)
        return obj

    def _new(self, terms):
        return Poly._raw(self.gens, terms)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- construction helpers -------------------------------------------

    @classmethod
    def const(cls, c: Number, gens: Sequence[str] = XYZ) -> "Poly":
        gens = tuple(gens)
        return Poly({(0,) * len(gens): c}, gens)

    @classmethod
    def var(cls, name: str, gens: Sequence[str] = XYZ) -> "Poly":
        gens = tuple(gens)
        i = gens.index(name)
        return Poly({tuple(int(j == i) for j in range(len(gens))): 1}, gens)

    @classmethod
    def linear(cls, coeffs: Sequence[Number], gens: Sequence[str] = XYZ) -> "Poly":
        gens = tuple(gens)
        n = len(gens)
        return Poly({tuple(int(j == i) for j in range(n)): c
                     for i, c in enumerate(coeffs)}, gens)

    # -- basic properties ------------------------------------------------

    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Exponent, Fraction]]:
        return iter(sorted(self._terms.items(), key=lambda t: _key(t[0]),
                           reverse=True))

    @property
    def nvars(self) -> int:
        return len(self.gens)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return self._terms.get((0,) * self.nvars, Fraction(0))

    @property
    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, var) -> int:
        i = self._index(var)
        return max((e[i] for e in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def leading_term(self) -> tuple[Exponent, Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self._terms, key=_key)
        return exp, self._terms[exp]

    def leading_coefficient(self) -> Fraction:
        return self.leading_term()[1]

    def variables(self) -> set[str]:
        used = set()
        for e in self._terms:
            used.update(g for g, k in zip(self.gens, e) if k)
        return used

    def _index(self, var) -> int:
        if isinstance(var, int):
            return var
        return self.gens.index(var)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.gens != self.gens:
                raise VariableMismatch(
                    f"generators differ: {self.gens} vs {other.gens}")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other, self.gens)
        return NotImplemented

    def _result_type(self, other):
        if type(self) is type(other):
            return type(self)
        return Poly

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        terms = dict(self._terms)
        for e, c in o._terms.items():
            v = terms.get(e, 0) + c
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        return self._result_type(o)._raw(self.gens, terms)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw(self.gens, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return type(self)._raw(self.gens, {})
            return type(self)._raw(self.gens,
                                   {e: c * other for e, c in self._terms.items()})
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.total_degree + o.total_degree > DEGREE_CAP:
            raise DegreeCapExceeded(
                f"product degree exceeds the cap of {DEGREE_CAP}")
        terms: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in o._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = terms.get(e, 0) + c1 * c2
                if v:
                    terms[e] = v
                else:
                    terms.pop(e, None)
        return self._result_type(o)._raw(self.gens, terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Poly.const(1, self.gens)
        if type(self) is not Poly:
            result = type(self)._raw(self.gens, result._terms)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.gens == other.gens and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash",
                               hash((self.gens, frozenset(self._terms.items()))))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # -- calculus and substitution ---------------------------------------

    def diff(self, var) -> "Poly":
        i = self._index(var)
        terms = {}
        for e, c in self._terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                terms[ne] = c * e[i]
        return type(self)._raw(self.gens, terms)

    def evaluate(self, values: Sequence[Number]) -> Fraction:
        """Value at a point given as one number per generator."""
        vals = [Fraction(v) for v in values]
        if len(vals) != self.nvars:
            raise ValueError("wrong number of values")
        powers = [dict() for _ in vals]
        total = Fraction(0)
        for e, c in self._terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    p = powers[i].get(k)
                    if p is None:
                        p = powers[i][k] = vals[i] ** k
                    t *= p
            total += t
        return total

    def subs(self, mapping: Mapping, gens: Sequence[str] | None = None) -> "Poly":
        """Simultaneous substitution.

        `mapping` sends generator names (or indices) to numbers or to
        polynomials over `gens` (default: this polynomial's generators).
        Unmapped generators are kept, which requires them to exist in `gens`.
        """
        gens = tuple(gens) if gens is not None else self.gens
        images = []
        for i, g in enumerate(self.gens):
            if g in mapping:
                img = mapping[g]
            elif i in mapping:
                img = mapping[i]
            else:
                img = Poly.var(g, gens)
            if isinstance(img, Poly):
                if img.gens != gens:
                    raise VariableMismatch(
                        f"substitution image over {img.gens}, expected {gens}")
            else:
                img = Poly.const(img, gens)
            images.append(img)
        cache = [dict() for _ in images]

        def power(i, k):
            p = cache[i].get(k)
            if p is None:
                p = cache[i][k] = images[i] ** k
            return p

        acc: dict[Exponent, Fraction] = {}
        zero = (0,) * len(gens)
        for e, c in self._terms.items():
            term = Poly._raw(gens, {zero: c})
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            for te, tc in term._terms.items():
                v = acc.get(te, 0) + tc
                if v:
                    acc[te] = v
                else:
                    acc.pop(te, None)
        return Poly._raw(gens, acc)

    def translate(self, shift: Sequence[Number]) -> "Poly":
        """p(v + shift): moves the point `shift` to the origin."""
        mapping = {g: Poly.var(g, self.gens) + Fraction(s)
                   for g, s in zip(self.gens, shift) if s}
        return self.subs(mapping) if mapping else Poly._raw(self.gens, dict(self._terms))

    def specialize(self, var, value: Number) -> "Poly":
        """Set one generator to a number, keeping the generator list."""
        i = self._index(var)
        value = Fraction(value)
        terms: dict[Exponent, Fraction] = {}
        for e, c in self._terms.items():
            ne = e[:i] + (0,) + e[i + 1:]
            v = terms.get(ne, 0) + c * value ** e[i]
            if v:
                terms[ne] = v
            else:
                terms.pop(ne, None)
        return Poly._raw(self.gens, terms)

    def coefficients_in(self, var) -> dict[int, "Poly"]:
        """Coefficients with respect to one generator (that exponent zeroed)."""
        i = self._index(var)
        out: dict[int, dict] = {}
        for e, c in self._terms.items():
            out.setdefault(e[i], {})[e[:i] + (0,) + e[i + 1:]] = c
        return {k: Poly._raw(self.gens, t) for k, t in out.items()}

    def restrict_gens(self, gens: Sequence[str]) -> "Poly":
        """Re-express over a subset/reordering of generators."""
        gens = tuple(gens)
        unused = [j for j, g in enumerate(self.gens) if g not in gens]
        for e in self._terms:
            if any(e[j] for j in unused):
                raise VariableMismatch("polynomial involves a dropped generator")
        idx = [self.gens.index(g) if g in self.gens else None for g in gens]
        terms = {tuple(e[j] if j is not None else 0 for j in idx): c
                 for e, c in self._terms.items()}
        return Poly._raw(gens, terms)

    def dehomogenize(self, var) -> "Poly":
        """Set `var` = 1 and drop it from the generators."""
        i = self._index(var)
        gens = self.gens[:i] + self.gens[i + 1:]
        terms: dict[Exponent, Fraction] = {}
        for e, c in self._terms.items():
            ne = e[:i] + e[i + 1:]
            v = terms.get(ne, 0) + c
            if v:
                terms[ne] = v
            else:
                terms.pop(ne, None)
        return Poly._raw(gens, terms)

    def homogenize(self, name: str, degree: int | None = None,
                   position: int | None = None) -> "Poly":
        degree = self.total_degree if degree is None else degree
        if self.total_degree > degree:
            raise ValueError("degree smaller than the total degree")
        position = self.nvars if position is None else position
        gens = self.gens[:position] + (name,) + self.gens[position:]
        terms = {e[:position] + (degree - sum(e),) + e[position:]: c
                 for e, c in self._terms.items()}
        return Poly._raw(gens, terms)

    def lowest_degree(self) -> int:
        """Smallest total degree of a term (multiplicity at the origin)."""
        return min((sum(e) for e in self._terms), default=-1)

    # -- normalization ----------------------------------------------------

    def content(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self._terms.values():
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> "Poly":
        """Integer coefficients with gcd 1 and positive leading coefficient."""
        if not self._terms:
            return self
        c = self.content()
        if self.leading_coefficient() < 0:
            c = -c
        return type(self)._raw(self.gens, {e: v / c for e, v in self._terms.items()})

    def monic(self) -> "Poly":
        lc = self.leading_coefficient()
        return type(self)._raw(self.gens, {e: v / lc for e, v in self._terms.items()})

    # -- printing ---------------------------------------------------------

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.items():
            mono = "*".join(g if k == 1 else f"{g}^{k}"
                            for g, k in zip(self.gens, e) if k)
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append((" + " if c > 0 else " - ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"{type(self).__name__}('{self}')"


class HomogeneousForm(Poly):
    """Ternary form in x, y, z.

    The zero form has ``degree`` None and ``is_zero`` True.  Sums of forms of
    different degrees raise ``ValueError``.
    """

    __slots__ = ()

    def __init__(self, terms=None, gens: Sequence[str] = XYZ):
        super().__init__(terms, gens)
        self._check()

    def _check(self):
        if not self.is_homogeneous():
            raise ValueError(f"not homogeneous: {self}")

    @classmethod
    def _raw(cls, gens, terms):
        obj = super()._raw(gens, terms)
        obj._check()
        return obj

    @classmethod
    def from_poly(cls, p: Poly) -> "HomogeneousForm":
        if isinstance(p, HomogeneousForm):
            return p
        return cls._raw(p.gens, dict(p._terms))

    @property
    def degree(self) -> int | None:
        return None if self.is_zero else self.total_degree

    def compose(self, images: Sequence[Poly]) -> "HomogeneousForm":
        """Substitute (x, y, z) -> images, all forms of a common degree."""
        out = self.subs(dict(zip(self.gens, images)), images[0].gens)
        return HomogeneousForm.from_poly(out)


AffinePolynomial = Poly
"""Plain :class:`Poly`; used for germs and dehomogenized forms."""


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(\d+/\d+|\d+|[A-Za-z]|\^|\*|\+|-)")


def parse_poly(text: str, gens: Sequence[str] = XYZ) -> Poly:
    """Parse the polynomial grammar over the given generators."""
    gens = tuple(gens)
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt:
            raise ValueError(f"cannot parse {text!r} at position {pos}")
        tokens.append(mt.group(1))
        pos = mt.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    if not tokens:
        raise ValueError("empty polynomial")
    n = len(gens)
    terms: dict[Exponent, Fraction] = {}
    i = 0

    def expect_term(i):
        coef = Fraction(1)
        exp = [0] * n
        seen = False
        while i < len(tokens):
            tok = tokens[i]
            if tok[0].isdigit():
                coef *= Fraction(tok)
                i += 1
            elif tok.isalpha():
                if tok not in GRAMMAR_VARS or tok not in gens:
                    raise ValueError(f"unknown variable {tok!r}")
                i += 1
                k = 1
                if i < len(tokens) and tokens[i] == "^":
                    if i + 1 >= len(tokens) or not tokens[i + 1].isdigit():
                        raise ValueError("exponent must be a non-negative integer")
                    k = int(tokens[i + 1])
                    i += 2
                exp[gens.index(tok)] += k
            else:
                raise ValueError(f"unexpected token {tok!r}")
            seen = True
            if i < len(tokens) and tokens[i] == "*":
                i += 1
                if i >= len(tokens) or tokens[i] in "+-^*":
                    raise ValueError("dangling '*'")
                continue
            if i < len(tokens) and (tokens[i][0].isdigit() or tokens[i].isalpha()):
                continue
            break
        if not seen:
            raise ValueError("empty term")
        return i, tuple(exp), coef

    sign = 1
    if tokens[0] in "+-":
        sign = -1 if tokens[0] == "-" else 1
        i = 1
    while True:
        i, exp, coef = expect_term(i)
        v = terms.get(exp, 0) + sign * coef
        if v:
            terms[exp] = v
        else:
            terms.pop(exp, None)
        if i >= len(tokens):
            break
        if tokens[i] not in "+-":
            raise ValueError(f"expected '+' or '-', got {tokens[i]!r}")
        sign = -1 if tokens[i] == "-" else 1
        i += 1
        if i >= len(tokens):
            raise ValueError("trailing sign")
    return Poly(terms, gens)


def parse_form(text: str) -> HomogeneousForm:
    return HomogeneousForm.from_poly(parse_poly(text, XYZ))


# ---------------------------------------------------------------------------
# division, gcd, square-free decomposition

def divexact(a: Poly, b: Poly) -> Poly:
    """Quotient a / b, raising NotDivisible unless the division is exact."""
    b = a._coerce(b)
    if b.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    if a.is_zero:
        return a
    if b.is_constant():
        return a * (1 / b.constant_value())
    lb, cb = b.leading_term()
    rem = dict(a._terms)
    quot: dict[Exponent, Fraction] = {}
    bterms = list(b._terms.items())
    while rem:
        lr = max(rem, key=_key)
        cr = rem[lr]
        qe = tuple(x - y for x, y in zip(lr, lb))
        if min(qe) < 0:
            raise NotDivisible(f"{a} is not divisible by {b}")
        qc = cr / cb
        quot[qe] = qc
        for e, c in bterms:
            te = tuple(x + y for x, y in zip(qe, e))
            v = rem.get(te, 0) - qc * c
            if v:
                rem[te] = v
            else:
                rem.pop(te, None)
    return a._result_type(b)._raw(a.gens, quot)


@lru_cache(maxsize=None)
def _ring(gens: tuple[str, ...]) -> PolyRing:
    return PolyRing(gens, QQ, grlex)


def _to_sympy(p: Poly):
    R = _ring(p.gens)
    return R.from_dict({e: QQ(c.numerator, c.denominator) for e, c in p._terms.items()})


def _from_sympy(el, gens) -> Poly:
    terms = {}
    for e, c in el.terms():
        terms[tuple(e)] = Fraction(int(QQ.numer(c)), int(QQ.denom(c)))
    return Poly._raw(tuple(gens), terms)


def gcd(f: Poly, g: Poly) -> Poly:
    """Greatest common divisor, primitive with positive leading coefficient."""
    g = f._coerce(g)
    if f.is_zero and g.is_zero:
        raise ValueError("gcd of two zero polynomials")
    if f.is_zero:
        return g.primitive()
    if g.is_zero:
        return f.primitive()
    h = _from_sympy(_to_sympy(f).gcd(_to_sympy(g)), f.gens).primitive()
    if type(f) is HomogeneousForm and type(g) is HomogeneousForm:
        return HomogeneousForm.from_poly(h)
    return h


def _content_in(f: Poly, i: int) -> Poly:
    c = None
    for coeff in f.coefficients_in(i).values():
        c = coeff if c is None else gcd(c, coeff)
        if c.is_constant():
            break
    return c.primitive()


def _yun(f: Poly, i: int, out: list):
    df = f.diff(i)
    b = gcd(f, df)
    c = divexact(f, b)
    d = divexact(df, b) - c.diff(i)
    k = 1
    while not c.is_constant():
        a = gcd(c, d)
        if not a.is_constant():
            out.append((a.primitive(), k))
        c = divexact(c, a)
        d = divexact(d, a) - c.diff(i)
        k += 1


def squarefree_decompose(f: Poly) -> list[tuple[Poly, int]]:
    """Pairwise coprime square-free factors with multiplicities.

    Works one generator at a time: Yun's algorithm on the part primitive in
    that generator, then recursion into the content.  Factors are primitive;
    `f` equals their product up to a rational constant.
    """
    if f.is_zero:
        raise ValueError("square-free decomposition of zero")
    out: list[tuple[Poly, int]] = []
    rest = f.primitive()
    for i in range(f.nvars):
        if rest.is_constant():
            break
        if rest.degree_in(i) <= 0:
            continue
        cont = _content_in(rest, i)
        prim = divexact(rest, cont)
        _yun(prim, i, out)
        rest = cont
    if type(f) is HomogeneousForm:
        out = [(HomogeneousForm.from_poly(p), k) for p, k in out]
    return out


def factor_components(f: Poly) -> list[tuple[Poly, int]]:
    """Factorization into irreducibles over Q (primitive factors)."""
    if f.is_zero:
        raise ValueError("factorization of zero")
    _, facs = _to_sympy(f).factor_list()
    out = []
    for fac, k in facs:
        p = _from_sympy(fac, f.gens).primitive()
        if not p.is_constant():
            if type(f) is HomogeneousForm:
                p = HomogeneousForm.from_poly(p)
            out.append((p, k))
    return out


# ---------------------------------------------------------------------------
# resultants and roots

def _bareiss_det(rows: list[list[Poly]], zero: Poly) -> Poly:
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return zero + 1
    sign = 1
    prev = zero + 1
    for k in range(n - 1):
        if m[k][k].is_zero:
            for r in range(k + 1, n):
                if not m[r][k].is_zero:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return zero
        piv = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, n):
                num = row_i[j] * piv - mik * row_k[j]
                row_i[j] = divexact(num, prev) if not num.is_zero else num
            row_i[k] = zero
        prev = piv
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def sylvester_matrix(f: Poly, g: Poly, var, degrees=None) -> list[list[Poly]]:
    i = f._index(var)
    fc, gc = f.coefficients_in(i), g.coefficients_in(i)
    n = f.degree_in(i) if degrees is None else degrees[0]
    k = g.degree_in(i) if degrees is None else degrees[1]
    zero = Poly._raw(f.gens, {})
    size = n + k
    rows = []
    for r in range(k):
        rows.append([fc.get(n - (c - r), zero) if 0 <= c - r <= n else zero
                     for c in range(size)])
    for r in range(n):
        rows.append([gc.get(k - (c - r), zero) if 0 <= c - r <= k else zero
                     for c in range(size)])
    return rows


def resultant(f: Poly, g: Poly, var, degrees: tuple[int, int] | None = None) -> Poly:
    """Sylvester resultant eliminating `var`.

    `degrees` gives formal degrees (homogeneous resultant of binary forms,
    or padding with vanishing leading coefficients).  The result keeps the
    generator list; it does not involve `var`.
    """
    g = f._coerce(g)
    if f.is_zero or g.is_zero:
        raise ResultantError("resultant with the zero polynomial")
    i = f._index(var)
    n = f.degree_in(i) if degrees is None else degrees[0]
    k = g.degree_in(i) if degrees is None else degrees[1]
    if n < f.degree_in(i) or k < g.degree_in(i):
        raise ResultantError("formal degree below the actual degree")
    if n == 0 and k == 0:
        raise ResultantError(f"both polynomials are constant in {f.gens[i]}")
    zero = Poly._raw(f.gens, {})
    res = _bareiss_det(sylvester_matrix(f, g, i, (n, k)), zero)
    return Poly._raw(f.gens, res._terms)


def _univariate_index(p: Poly) -> int | None:
    used = {j for e in p._terms for j, k in enumerate(e) if k}
    if len(used) > 1:
        raise ValueError(f"not univariate: {p}")
    return used.pop() if used else None


def rational_roots(p: Poly) -> list[tuple[Fraction, int]]:
    """Rational roots with multiplicity of a polynomial in one generator."""
    if p.is_zero:
        raise ValueError("roots of the zero polynomial")
    i = _univariate_index(p)
    if i is None:
        return []
    q = p.restrict_gens((p.gens[i],))
    _, facs = _to_sympy(q).factor_list()
    roots = []
    for fac, k in facs:
        fp = _from_sympy(fac, q.gens)
        if fp.total_degree == 1:
            a = fp._terms.get((1,), Fraction(0))
            b = fp._terms.get((0,), Fraction(0))
            roots.append((-b / a, k))
    roots.sort()
    return roots


def binary_form_roots(p: Poly, pair: tuple[int, int]) -> list[tuple[tuple[Fraction, Fraction], int]]:
    """Rational roots in P^1 of a form in the two generators `pair`.

    Roots are returned as (s, t) with s = 1 or (s, t) = (0, 1) style
    normalized pairs: (r, 1) for affine roots and (1, 0) at infinity.
    """
    a, b = pair
    if p.is_zero:
        raise ValueError("roots of the zero form")
    deg = p.total_degree
    aff = p.specialize(b, 1)
    roots = [((r, Fraction(1)), k) for r, k in rational_roots(aff)]
    at_inf = deg - aff.degree_in(a)
    if at_inf > 0:
        roots.append(((Fraction(1), Fraction(0)), at_inf))
    return roots


def jacobian_determinant(forms: Sequence[Poly]) -> Poly:
    """Determinant of the matrix of partial derivatives."""
    n = len(forms)
    rows = [[f.diff(j) for j in range(n)] for f in forms]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = rows
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    zero = Poly._raw(forms[0].gens, {})
    return _bareiss_det(rows, zero)


# ---------------------------------------------------------------------------
# prime fields

class PrimeFieldPolynomial:
    """Polynomial with coefficients in F_p, p prime."""

    __slots__ = ("p", "gens", "terms")

    def __init__(self, p: int, terms: Mapping[Sequence[int], int], gens: Sequence[str] = XYZ):
        if p < 2 or not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        clean = {}
        for e, c in terms.items():
            c %= p
            if c:
                clean[tuple(e)] = c
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "gens", tuple(gens))
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("PrimeFieldPolynomial is immutable")

    @classmethod
    def reduce(cls, poly: Poly, p: int) -> "PrimeFieldPolynomial":
        terms = {}
        for e, c in poly._terms.items():
            if c.denominator % p == 0:
                raise BadReduction(f"denominator of {c} vanishes mod {p}")
            terms[e] = c.numerator * pow(c.denominator, -1, p)
        return cls(p, terms, poly.gens)

    @property
    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def evaluate(self, values: Sequence[int]) -> int:
        p = self.p
        total = 0
        for e, c in self.terms.items():
            t = c
            for v, k in zip(values, e):
                if k:
                    t = t * pow(v, k, p) % p
            total += t
        return total % p

    def __add__(self, other: "PrimeFieldPolynomial"):
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return PrimeFieldPolynomial(self.p, terms, self.gens)

    def __mul__(self, other: "PrimeFieldPolynomial"):
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return PrimeFieldPolynomial(self.p, terms, self.gens)

    def __eq__(self, other):
        return (isinstance(other, PrimeFieldPolynomial) and self.p == other.p
                and self.gens == other.gens and self.terms == other.terms)

    def __hash__(self):
        return hash((self.p, self.gens, frozenset(self.terms.items())))

    def __repr__(self):
        body = str(Poly(self.terms, self.gens)) if self.terms else "0"
        return f"PrimeFieldPolynomial({self.p}, '{body}')"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = math.isqrt(n)
    return all(n % d for d in range(3, r + 1, 2))
