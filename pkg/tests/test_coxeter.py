"""Coxeter families: degree data, substituted potentials, open solution
families with the lambda action, boundary correlators, nonexistence
obstructions, and the sign-branch classification for I2."""

import math
from fractions import Fraction

import pytest

from openwdvv.coxeter import (
    classify_I2,
    correlator_recursion_A,
    coxeter_spec,
    coxeter_structure,
    lambda_rescale,
    obstruction_check,
    open_family,
    potential_coxeter,
    printed_open_potential,
    printed_potential,
)
from openwdvv.exactalg import GaussianRational, MPoly, PolyError, rat
from openwdvv.openext import verify_open_wdvv
from openwdvv.saito import frobenius_structure, verify_wdvv

DEGREES = {
    "A3": (4, 3, 2),
    "B3": (6, 4, 2),
    "D4": (6, 4, 2, 4),
    "D5": (8, 6, 4, 2, 5),
    "E6": (12, 9, 8, 6, 5, 2),
    "E7": (18, 14, 12, 10, 8, 6, 2),
    "E8": (30, 24, 20, 18, 14, 12, 8, 2),
    "F4": (12, 8, 6, 2),
    "H3": (10, 6, 2),
    "H4": (30, 20, 12, 2),
    "I2(7)": (7, 2),
}


class TestSpecs:
    def test_degree_tables(self):
        for tag, degrees in DEGREES.items():
            spec = coxeter_spec(tag)
            assert spec.degrees == degrees
            assert spec.h == degrees[0]
            assert spec.q[0] == 1

    def test_delta_values(self):
        assert coxeter_spec("H3").delta == Fraction(4, 5)
        assert coxeter_spec("H4").delta == Fraction(14, 15)
        assert coxeter_spec("F4").delta == Fraction(5, 6)
        assert coxeter_spec("I2(6)").delta == Fraction(2, 3)

    def test_rejects_unknown(self):
        for tag in ("Q5", "D2", "E5", "E9", "H5", "I2(2)", "B1", "A0", "F5"):
            with pytest.raises(PolyError):
                coxeter_spec(tag)

    def test_milnor_weights_match_degrees(self):
        for family, n in (("D", 4), ("D", 6), ("E", 6), ("E", 7), ("E", 8)):
            from openwdvv.milnor import build_unfolding

            spec = coxeter_spec(f"{family}{n}")
            assert build_unfolding(family, n).weights == spec.q


class TestSubstitutedPotentials:
    def test_low_rank_coincidences(self):
        assert potential_coxeter("I2(3)") == frobenius_structure("A", 2).potential
        assert potential_coxeter("B2") == potential_coxeter("I2(4)")

    def test_b3_from_a5(self):
        src = frobenius_structure("A", 5)
        tab = coxeter_spec("B3").table()
        zero = MPoly.zero(tab)
        images = {
            "t1": MPoly.variable(tab, "t1"),
            "t2": zero,
            "t3": MPoly.variable(tab, "t2"),
            "t4": zero,
            "t5": MPoly.variable(tab, "t3"),
        }
        assert potential_coxeter("B3") == src.potential.substitute(images, tab)

    def test_h3_imaginary_parts_cancel(self):
        p = potential_coxeter("H3")
        assert all(c.im == 0 for c in p.terms.values())
        assert set(p.terms) == set(printed_potential("H3").terms)

    def test_printed_sources(self):
        for tag in ("D4", "D5"):
            assert printed_potential(tag) == frobenius_structure("D", int(tag[1])).potential
        with pytest.raises(PolyError):
            printed_potential("B3")
        with pytest.raises(PolyError):
            potential_coxeter("F4", source="substitution")
        with pytest.raises(PolyError):
            potential_coxeter("E6")

    def test_closed_wdvv(self):
        for tag in ("B2", "B3", "I2(5)", "I2(8)", "F4", "H3", "H4"):
            rep = verify_wdvv(coxeter_structure(tag))
            assert rep.ok, rep.summary()
        assert verify_wdvv(coxeter_structure("H3", source="printed")).ok

    def test_odd_even_vanishing_behind_b(self):
        # every t-monomial of F_{A_{2N-1}} carries an even number of
        # even-slot factors, so the substitution never cancels terms
        for n in (2, 3):
            src = frobenius_structure("A", 2 * n - 1)
            for exp in src.potential.terms:
                assert sum(exp[a] for a in range(1, 2 * n - 1, 2)) % 2 == 0


class TestOpenFamilies:
    def test_generator_b2(self):
        fam = open_family("B2")
        want = "t1*s + 1/2*t2^2*s + 1/3*t2*s^3 + 1/20*s^5"
        assert fam.generator.text() == want

    def test_domains(self):
        for tag, dom in (("A1", "C"), ("A2", "C*"), ("B2", "C"), ("B4", "C"),
                         ("I2(5)", "C*"), ("I2(6)", "C")):
            assert open_family(tag).domain == dom

    def test_branches(self):
        assert open_family("I2(5)").branches == ("plus",)
        assert open_family("I2(6)").branches == ("plus", "minus")
        with pytest.raises(PolyError):
            open_family("I2(5)").member(1, "minus")

    def test_members_solve_open_wdvv(self):
        for tag in ("A3", "B3", "I2(5)", "I2(6)"):
            fam = open_family(tag)
            for lam in (1, 2, -1, "1/2"):
                for branch in fam.branches:
                    rep = verify_open_wdvv(fam.extension(lam, branch))
                    assert rep.ok, (tag, lam, branch, rep.summary())
            if fam.domain == "C":
                assert verify_open_wdvv(fam.extension(0)).ok

    def test_lambda_zero_rejected_on_punctured_domain(self):
        with pytest.raises(PolyError):
            open_family("A2").member(0)

    def test_lambda_action_on_terms(self):
        fam = open_family("B2")
        lam = GaussianRational(rat(1, 2))
        got = fam.member("1/2")
        powers = {e[fam.generator.table.laurent_index] for e in fam.generator.terms}
        for j in powers:
            want = fam.generator.coefficient_of("s", j) * (lam ** (j - 1))
            assert got.coefficient_of("s", j) == want
        assert got == lambda_rescale(fam.generator, "1/2")

    def test_no_open_family_for_d(self):
        with pytest.raises(PolyError):
            open_family("D4")


class TestCorrelators:
    def test_seeds(self):
        for N in (2, 3, 4):
            table = correlator_recursion_A(N, 2)
            assert table[()] == math.factorial(N)
            for a in range(1, N + 1):
                assert table[(a,)] == math.factorial(a - 1)

    def test_hand_values(self):
        assert correlator_recursion_A(2, 2)[(2, 2)] == 1
        t3 = correlator_recursion_A(3, 2)
        assert t3[(3, 3)] == 1 and t3[(2, 3)] == 1
        assert correlator_recursion_A(4, 3)[(4, 4, 4)] == 1

    def test_closed_form(self):
        for N in (2, 3, 4):
            table = correlator_recursion_A(N, 5)
            for t, val in table.items():
                k = N + 2 - sum(N + 2 - a for a in t)
                assert val == rat(math.factorial(len(t) + k - 2))


class TestObstructions:
    def test_all_groups_pass(self):
        for tag in ("D4", "D5", "D6", "E6", "E7", "E8", "F4", "H4", "H3"):
            rep = obstruction_check(tag)
            assert rep.ok, rep.summary()

    def test_out_of_scope_groups_rejected(self):
        for tag in ("A3", "B3", "D3", "I2(5)"):
            with pytest.raises(PolyError):
                obstruction_check(tag)

    def test_h3_candidate_monomials(self):
        # all (t1, t2, t3, s) monomials of weighted degree 11/10 under
        # weights (1, 3/5, 1/5, 1/10): the unit term plus nine unknowns
        from openwdvv.saito import _weighted_tuples

        got = set(_weighted_tuples((10, 6, 2, 1), 11))
        want = {
            (1, 0, 0, 1),
            (0, 1, 2, 1), (0, 1, 1, 3), (0, 1, 0, 5),
            (0, 0, 5, 1), (0, 0, 4, 3), (0, 0, 3, 5),
            (0, 0, 2, 7), (0, 0, 1, 9), (0, 0, 0, 11),
        }
        assert got == want


class TestClassification:
    def test_reproduces_generators(self):
        for k in range(3, 9):
            fam = classify_I2(k)
            assert fam.generator == open_family(f"I2({k})").generator

    def test_frozen_coefficients(self):
        assert classify_I2(3).coefficients == (
            GaussianRational(2), GaussianRational(1), GaussianRational(1))
        assert classify_I2(4).coefficients == (
            GaussianRational(6), GaussianRational(2), GaussianRational(1))
        assert classify_I2(5).coefficients == (
            GaussianRational(24), GaussianRational(6),
            GaussianRational(2), GaussianRational(1))

    def test_minus_branch_is_reflection(self):
        fam = classify_I2(6)
        tab = fam.generator.table
        mirror = 2 * MPoly.variable(tab, "t1") * MPoly.variable(tab, "s")
        assert fam.member(1, "minus") == mirror - fam.generator

    def test_free_coefficient_moves_along_orbit(self):
        for k, lam in ((5, 3), (4, 2)):
            fam = open_family(f"I2({k})")
            member = fam.member(lam)
            if k % 2:
                l = (k - 1) // 2
                idx, jpow = l + 1, 0
            else:
                l = k // 2
                idx, jpow = l - 1, 3
            c = member.coefficient({"t2": idx, "s": jpow})
            c = c * (math.factorial(idx) * math.factorial(jpow))
            assert classify_I2(k, free_coefficient=c).generator == member

    def test_even_top_coefficient_is_lambda_invariant(self):
        base = classify_I2(4).coefficients
        moved = classify_I2(4, free_coefficient=8).coefficients
        assert base[2] == moved[2]

    def test_zero_top_coefficient_rejected_for_odd(self):
        with pytest.raises(PolyError):
            classify_I2(5, free_coefficient=0)
