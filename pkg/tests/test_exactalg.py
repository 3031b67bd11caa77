"""Scalar and polynomial layer: hand cases, hypothesis properties, and a
sympy cross-check of products and derivatives."""

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from openwdvv.exactalg import (
    ExponentError,
    GaussianRational,
    MPoly,
    ParseError,
    PolyError,
    VarTable,
    parse,
    rat,
    sqrt_coefficient,
)

WTAB = VarTable(("x", "y", "z"), (Fraction(1), Fraction(1, 2), Fraction(1, 3)))
LTAB = VarTable(("x", "s"), (Fraction(1), Fraction(1, 4)), "s")


def small_fractions():
    return st.fractions(min_value=-9, max_value=9, max_denominator=12)


def scalars():
    return st.builds(GaussianRational, small_fractions(), small_fractions())


def polys(tab=WTAB, min_exp=0, max_exp=4, max_terms=5):
    li = tab.laurent_index
    slots = [
        st.integers(min_value=min_exp if j == li else 0, max_value=max_exp)
        for j in range(tab.arity)
    ]
    return st.builds(
        lambda d: MPoly(tab, d),
        st.dictionaries(st.tuples(*slots), scalars(), max_size=max_terms),
    )


class TestScalars:
    def test_rat_forms(self):
        assert rat("7/3360") == rat(7, 3360)
        assert rat(Fraction(-3, 6)) == rat(-1, 2)
        assert rat(4) == 4

    def test_equality_across_types(self):
        assert GaussianRational(rat(1, 2)) == Fraction(1, 2)
        assert GaussianRational(3) == 3
        assert GaussianRational(0, 1) != 0

    def test_negative_powers(self):
        c = GaussianRational(rat(-2, 3))
        assert c ** -2 == rat(9, 4)
        assert GaussianRational(0, 1) ** -1 == GaussianRational(0, -1)

    def test_division(self):
        i = GaussianRational(0, 1)
        assert (1 + i) / (1 - i) == i
        with pytest.raises(ZeroDivisionError):
            GaussianRational(1) / GaussianRational(0)

    @given(scalars(), scalars(), scalars())
    def test_ring_axioms(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert a - b + b == a

    @given(scalars())
    def test_multiplicative_inverse(self, a):
        if a:
            assert a * (GaussianRational(1) / a) == 1

    def test_sqrt(self):
        assert sqrt_coefficient(GaussianRational(rat(4, 9))) == rat(2, 3)
        with pytest.raises(PolyError):
            sqrt_coefficient(GaussianRational(2))
        with pytest.raises(PolyError):
            sqrt_coefficient(GaussianRational(0, 1))


class TestPolyBasics:
    def test_zero_coefficients_dropped(self):
        p = MPoly(WTAB, {(1, 0, 0): GaussianRational(0)})
        assert p == MPoly.zero(WTAB) and len(p.terms) == 0

    def test_non_laurent_slot_rejects_negative(self):
        with pytest.raises(ExponentError):
            MPoly(WTAB, {(-1, 0, 0): GaussianRational(1)})

    def test_deep_pole_allowed_in_arithmetic_only(self):
        s = MPoly.variable(LTAB, "s")
        inv = s ** -1
        assert inv.diff("s") == -(s ** -2)
        with pytest.raises(ParseError):
            parse("s^-2", LTAB)
        with pytest.raises(ParseError):
            MPoly.from_json((s ** -2).to_json())

    def test_canonical_text(self):
        tab = VarTable(("t1", "t2", "t3", "t4"))
        src = "-1/24*t3^3*t4^2 + 1/2*t1^2*t3"
        assert parse(src, tab).text() == "1/2*t1^2*t3 - 1/24*t3^3*t4^2"

    def test_parse_errors(self):
        tab = VarTable(("x",))
        for bad in ("x +", "x ^ y", "(x", "x 2"):
            with pytest.raises(ParseError):
                parse(bad, tab)
        with pytest.raises(PolyError):
            parse("y", tab)

    def test_division_by_monomial(self):
        s = MPoly.variable(LTAB, "s")
        assert (2 * s) ** -1 == s ** -1 / 2
        x = MPoly.variable(LTAB, "x")
        with pytest.raises(PolyError):
            (x + s) ** -1

    def test_euler_needs_weights(self):
        tab = VarTable(("x",))
        with pytest.raises(PolyError):
            MPoly.variable(tab, "x").euler()


class TestPolyProperties:
    @given(polys(), polys(), polys())
    def test_ring_axioms(self, p, q, r):
        assert (p + q) + r == p + (q + r)
        assert p * q == q * p
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r
        assert p - q + q == p

    @given(polys(LTAB, min_exp=-2, max_exp=3), polys(LTAB, min_exp=-2, max_exp=3))
    def test_derivative_is_a_derivation(self, p, q):
        for nm in LTAB.names:
            got = (p * q).diff(nm)
            assert got == p.diff(nm) * q + p * q.diff(nm)

    @given(polys(LTAB, min_exp=-2, max_exp=3))
    def test_derivatives_commute(self, p):
        assert p.diff("x").diff("s") == p.diff("s").diff("x")

    @given(polys())
    def test_euler_on_homogeneous_components(self, p):
        comps = {}
        for exp, c in p.terms.items():
            d = sum(w * e for w, e in zip(WTAB.weights, exp))
            comps.setdefault(d, {})[exp] = c
        assert sum(
            (MPoly(WTAB, t) for t in comps.values()), MPoly.zero(WTAB)
        ) == p
        for d, terms in comps.items():
            comp = MPoly(WTAB, terms)
            assert comp.euler() == comp * rat(d.numerator, d.denominator)

    @given(polys(LTAB, min_exp=-1, max_exp=3))
    def test_text_round_trip(self, p):
        assert parse(p.text(), LTAB) == p

    @given(polys(LTAB, min_exp=-1, max_exp=3))
    def test_json_round_trip(self, p):
        q = MPoly.from_json(p.to_json())
        assert q == p and q.to_json() == p.to_json()

    @given(polys(max_exp=3), st.integers(min_value=0, max_value=3))
    def test_integer_powers(self, p, k):
        prod = MPoly.constant(WTAB, 1)
        for _ in range(k):
            prod = prod * p
        assert p ** k == prod


def _to_sympy(p, syms):
    acc = sympy.Integer(0)
    for exp, c in p.terms.items():
        term = sympy.Rational(int(c.re.numerator), int(c.re.denominator))
        term += sympy.I * sympy.Rational(int(c.im.numerator), int(c.im.denominator))
        for s, e in zip(syms, exp):
            term *= s ** e
        acc += term
    return sympy.expand(acc)


class TestAgainstSympy:
    syms = sympy.symbols("x s")

    @settings(max_examples=40, deadline=None)
    @given(polys(LTAB, min_exp=-2, max_exp=3, max_terms=4),
           polys(LTAB, min_exp=-2, max_exp=3, max_terms=4))
    def test_products(self, p, q):
        got = _to_sympy(p * q, self.syms)
        assert sympy.expand(got - _to_sympy(p, self.syms) * _to_sympy(q, self.syms)) == 0

    @settings(max_examples=40, deadline=None)
    @given(polys(LTAB, min_exp=-2, max_exp=3, max_terms=4))
    def test_derivatives(self, p):
        for s, nm in zip(self.syms, LTAB.names):
            got = _to_sympy(p.diff(nm), self.syms)
            assert sympy.expand(got - sympy.diff(_to_sympy(p, self.syms), s)) == 0

    def test_substitution(self):
        tab = VarTable(("x", "y"))
        p = parse("x^2*y - 3*y^2 + 1", tab)
        target = VarTable(("u",))
        u = MPoly.variable(target, "u")
        got = p.substitute({"x": u + 1, "y": 2 * u}, target)
        x, y, usym = sympy.symbols("x y u")
        want = sympy.expand((x ** 2 * y - 3 * y ** 2 + 1).subs({x: usym + 1, y: 2 * usym}))
        assert _to_sympy(got, (usym,)) == want
