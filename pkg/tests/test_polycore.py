from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from planeram.polycore import (DEGREE_CAP, BadReduction, DegreeCapExceeded, HomogeneousForm,
                               NotDivisible, Poly, PrimeFieldPolynomial, binary_form_roots,
                               divexact, factor_components, gcd, jacobian_determinant,
                               monomials, parse_form, parse_poly, rational_roots, resultant,
                               squarefree_decompose)

x, y, z = (Poly.var(v) for v in "xyz")
XY = ("x", "y")
X, Y = Poly.var("x", XY), Poly.var("y", XY)


def expr(p: Poly) -> sp.Expr:
    syms = sp.symbols(" ".join(p.gens))
    syms = syms if isinstance(syms, tuple) else (syms,)
    return sp.Add(*[sp.Rational(c.numerator, c.denominator) * sp.Mul(*[s ** k for s, k in zip(syms, e)])
                    for e, c in p.terms.items()])


@st.composite
def small_polys(draw, gens=XY, max_degree=3, max_terms=4):
    n = draw(st.integers(1, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(0, max_degree)) for _ in gens)
        if sum(e) <= max_degree:
            terms[e] = draw(st.integers(-5, 5))
    return Poly(terms, gens)


nonzero = small_polys().filter(lambda p: not p.is_zero)


@st.composite
def forms(draw, d=None):
    d = draw(st.integers(0, 3)) if d is None else d
    terms = {e: draw(st.integers(-4, 4)) for e in monomials(3, d)}
    F = HomogeneousForm(terms)
    return F if not F.is_zero else HomogeneousForm({(d, 0, 0): 1})


# ---------------------------------------------------------------------------
# arithmetic

def test_difference_of_squares():
    assert (x + y) * (x - y) == x ** 2 - y ** 2


def test_monomial_substitution():
    F = HomogeneousForm.from_poly(x * y * z)
    assert F.subs({"x": x ** 2, "y": y ** 2, "z": z ** 2}) == x ** 2 * y ** 2 * z ** 2


def test_example2_identity_m3():
    m = 3
    lhs = ((x ** m - y ** m) / 2) ** 2 + (x * y) ** m
    assert lhs == (x ** m + y ** m) ** 2 / 4


def test_parse_and_print_round_trip():
    text = "x^2 + 1/2*x*y - 3"
    p = parse_poly(text)
    assert str(p) == text
    assert parse_poly(str(p)) == p


def test_grlex_printing():
    assert str(z ** 2 + x * z + y ** 2 + x * y + x ** 2) == "x^2 + x*y + x*z + y^2 + z^2"


def test_parse_form_rejects_inhomogeneous():
    with pytest.raises(ValueError):
        parse_form("x^2 + y")


def test_degree_cap():
    with pytest.raises(DegreeCapExceeded):
        x ** (DEGREE_CAP + 1)
    assert (x ** 32 * y ** 32).total_degree == DEGREE_CAP


def test_coefficients_are_exact():
    p = x / 3 + y / 7
    assert all(isinstance(c, Fraction) for c in p.terms.values())
    assert (p * 21).terms == {(1, 0, 0): 7, (0, 1, 0): 3}


@given(small_polys(), small_polys(), small_polys())
@settings(max_examples=60, deadline=None)
def test_ring_axioms(p, q, r):
    assert (p + q) * r == p * r + q * r
    assert p * q == q * p
    assert (p - p).is_zero


@given(small_polys(), small_polys())
@settings(max_examples=60, deadline=None)
def test_product_matches_sympy(p, q):
    assert sp.expand(expr(p * q) - expr(p) * expr(q)) == 0


@given(forms(), forms())
@settings(max_examples=60, deadline=None)
def test_homogeneity_preserved(F, G):
    P = F * G
    assert isinstance(P, HomogeneousForm)
    assert P.is_zero or P.degree == F.degree + G.degree
    if F.degree == G.degree:
        S = F + G
        assert isinstance(S, HomogeneousForm)
        assert S.is_zero or S.degree == F.degree
    assert all(F.diff(i).is_zero or F.diff(i).degree == F.degree - 1 for i in range(3))


# ---------------------------------------------------------------------------
# gcd and division

def test_gcd_examples():
    assert gcd(x ** 2 * y, x * y ** 2) == x * y
    assert gcd(x ** 3 + y ** 3, x ** 3 - y ** 3).is_constant()
    f = 3 * x ** 2 * y - 6 * z ** 3
    assert gcd(f, f) == f.primitive()


def test_divexact():
    assert divexact(x ** 2 - y ** 2, x - y) == x + y
    with pytest.raises(NotDivisible):
        divexact(x ** 2, x - y)


@given(nonzero, nonzero, nonzero)
@settings(max_examples=200, deadline=None)
def test_gcd_divides_both(a, b, c):
    g = gcd(a * c, b * c)
    divexact(a * c, g)
    divexact(b * c, g)
    divexact(g, c.primitive())


# ---------------------------------------------------------------------------
# square-free decomposition

def test_squarefree_examples():
    assert squarefree_decompose(x ** 3 * y ** 2) == [(x, 3), (y, 2)]
    assert squarefree_decompose((x ** 2 + y ** 2) ** 2 * z) == [(x ** 2 + y ** 2, 2), (z, 1)]


def test_jacobian_of_power_map():
    J = jacobian_determinant([x ** 2, y ** 2, z ** 2])
    assert J == 8 * x * y * z
    parts = squarefree_decompose(J)
    assert parts in ([(x * y * z, 1)], [(x, 1), (y, 1), (z, 1)])


_factors = st.sampled_from([X, Y, X + Y, X - 2 * Y + 1, X ** 2 + Y ** 2 + 1, X * Y - 3])


@given(st.lists(st.tuples(_factors, st.integers(1, 3)), min_size=1, max_size=3))
@settings(max_examples=80, deadline=None)
def test_squarefree_multiplicities_additive(parts):
    expected: dict = {}
    f = Poly.const(1, XY)
    for g, k in parts:
        f = f * g ** k
        expected[g.primitive()] = expected.get(g.primitive(), 0) + k
    got: dict = {}
    for g, k in factor_components(f):
        got[g] = got.get(g, 0) + k
    assert got == expected


@given(nonzero)
@settings(max_examples=80, deadline=None)
def test_squarefree_reconstructs(p):
    if p.is_constant():
        return
    prod = Poly.const(1, XY)
    for g, k in squarefree_decompose(p):
        prod = prod * g ** k
    assert divexact(p, prod).is_constant()


def test_factor_components_against_sympy():
    f = (x ** 2 + y * z) * (x - y) ** 2 * z ** 3
    pairs = {(str(g), k) for g, k in factor_components(f)}
    ref = {(str(sp.Poly(g, *oracles.XYZ).as_expr()), k)
           for g, k in sp.factor_list(oracles.to_expr(f))[1]}
    assert {k for _, k in pairs} == {k for _, k in ref}
    assert len(pairs) == len(ref)


# ---------------------------------------------------------------------------
# resultants and roots

def test_resultant_examples():
    assert resultant(Y - X ** 2, Y, "y") == X ** 2
    assert resultant(Y ** 2 - X, Y ** 2 + X, "y") == 4 * X ** 2
    assert resultant(X * (Y - 1), X * (Y - 1) * (Y + 2), "y").is_zero


@given(small_polys(max_degree=3), small_polys(max_degree=3), small_polys(max_degree=2))
@settings(max_examples=60, deadline=None)
def test_resultant_matches_sylvester_and_is_multiplicative(f, g, h):
    if min(f.degree_in("y"), g.degree_in("y"), h.degree_in("y")) < 1:
        return
    xs, ys = sp.symbols("x y")
    ours = resultant(f, g, "y")
    assert sp.expand(expr(ours) - oracles.sylvester_resultant(expr(f), expr(g), ys)) == 0
    lhs = resultant(f * h, g, "y")
    rhs = ours * resultant(h, g, "y")
    assert lhs == rhs or lhs == -rhs


def test_rational_roots():
    p = parse_poly("2*x^3 - 3*x^2 + 1", ("x",))
    assert rational_roots(p) == [(Fraction(-1, 2), 1), (Fraction(1), 2)]


def test_binary_form_roots():
    roots = binary_form_roots(parse_poly("x^2 - 4*y^2", XY), (0, 1))
    assert sorted(r for r, _ in roots) == [(-2, 1), (2, 1)]


@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=1, max_size=4))
@settings(max_examples=60, deadline=None)
def test_rational_roots_recover_planted(roots):
    t = Poly.var("x", ("x",))
    p = Poly.const(1, ("x",))
    for r in roots:
        p = p * (t - r)
    want: dict = {}
    for r in roots:
        want[Fraction(r)] = want.get(Fraction(r), 0) + 1
    assert dict(rational_roots(p)) == want


# ---------------------------------------------------------------------------
# prime fields

def test_prime_field_reduction():
    red = PrimeFieldPolynomial.reduce(x ** 2 / 3 + 7 * y ** 2, 7)
    assert red.evaluate((1, 0, 0)) == pow(3, -1, 7)
    assert red.evaluate((0, 1, 0)) == 0
    with pytest.raises(BadReduction):
        PrimeFieldPolynomial.reduce(x / 5, 5)
