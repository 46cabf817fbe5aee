from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from lrlab.exactring import (HypersurfaceRing, ParseError, Poly, RingMismatchError, format_poly,
                             is_zero_mod_f, normal_form, parse_poly, partial)

from conftest import coeffs, polys, rings

X, Y, Z = sympy.symbols("x y z")


def P(text):
    return parse_poly(text)


def to_sympy(p: Poly):
    return sum((sympy.Rational(c.numerator, c.denominator) * X**a * Y**b * Z**e
                for (a, b, e), c in p.terms.items()), sympy.Integer(0))


def sympy_normal_form(p: Poly, R: HypersurfaceRing):
    # independent route: polynomial remainder by f viewed in z
    f = X**R.m + Y**R.n + Z**2
    r = sympy.rem(sympy.expand(to_sympy(p)), f, Z)
    return sympy.expand(r)


class TestNormalForm:
    def test_z_squared(self):
        R = HypersurfaceRing(2, 2)
        assert normal_form(P("z^2"), R).repr == P("-x^2 - y^2")

    def test_f_is_zero(self):
        R = HypersurfaceRing(2, 2)
        assert normal_form(P("x^2 + y^2 + z^2"), R).is_zero()

    def test_x_z_cubed(self):
        # z^3 = z * z^2 -> -z(x^2 + y^3)
        R = HypersurfaceRing(2, 3)
        assert normal_form(P("x*z^3"), R).repr == P("-x^3*z - x*y^3*z")

    @given(polys, rings)
    @settings(max_examples=60, deadline=None)
    def test_agrees_with_sympy_remainder(self, p, R):
        assert to_sympy(normal_form(p, R).repr) - sympy_normal_form(p, R) == 0

    @given(polys, rings)
    @settings(max_examples=60, deadline=None)
    def test_idempotent_and_z_degree(self, p, R):
        nf = normal_form(p, R).repr
        assert nf.degree_in("z") <= 1
        assert normal_form(nf, R).repr == nf

    @given(polys, polys, rings)
    @settings(max_examples=60, deadline=None)
    def test_canonical_under_multiples_of_f(self, p, q, R):
        assert normal_form(p, R) == normal_form(p + q * R.f, R)

    @given(polys, polys, rings)
    @settings(max_examples=60, deadline=None)
    def test_homomorphism(self, p, q, R):
        assert normal_form(p * q, R) == normal_form(p, R) * normal_form(q, R)
        assert normal_form(p + q, R) == normal_form(p, R) + normal_form(q, R)


class TestRingArith:
    def test_z_times_z(self):
        R = HypersurfaceRing(2, 2)
        x, y, z = R.gens()
        assert z * z == R("-x^2 - y^2")

    def test_absorbing_zero(self):
        R = HypersurfaceRing(3, 4)
        assert (R("x*y + z") * R.zero()).is_zero()

    def test_difference_of_squares(self):
        # (x+z)(x-z) = x^2 - z^2 -> x^2 + x^3 + y^2
        R = HypersurfaceRing(3, 2)
        assert R("x + z") * R("x - z") == R("x^2 + x^3 + y^2")

    def test_mismatched_rings(self):
        a = HypersurfaceRing(2, 2)("x")
        b = HypersurfaceRing(2, 3)("x")
        with pytest.raises(RingMismatchError):
            a + b
        with pytest.raises(RingMismatchError):
            a * b

    @given(polys, polys, polys, rings)
    @settings(max_examples=40, deadline=None)
    def test_ring_axioms(self, p, q, r, R):
        a, b, c = (normal_form(t, R) for t in (p, q, r))
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a - a == R.zero()

    @pytest.mark.parametrize("m,n", [(1, 2), (2, 0), (0, 0)])
    def test_rejects_small_exponents(self, m, n):
        with pytest.raises(ValueError):
            HypersurfaceRing(m, n)


class TestIsZeroModF:
    def test_multiple_of_f(self):
        R = HypersurfaceRing(3, 5)
        assert is_zero_mod_f(R.f * (2 * 3 * 5), R)

    def test_x(self):
        assert not is_zero_mod_f(P("x"), HypersurfaceRing(2, 2))

    def test_f_squared_expanded(self):
        R = HypersurfaceRing(3, 4)
        g = P("x^3 + y^4")
        p = P("z^4") + P("z^2") * g * 2 + g * g
        assert p == R.f * R.f
        assert is_zero_mod_f(p, R)


class TestPartial:
    def test_power_rule(self):
        assert partial(P("x^5"), "x") == P("5*x^4")

    def test_f_in_z(self):
        assert partial(HypersurfaceRing(4, 3).f, "z") == P("2*z")

    def test_mixed(self):
        assert partial(P("x^2*y*z"), "y") == P("x^2*z")

    @given(polys, polys, st.sampled_from("xyz"))
    @settings(max_examples=60, deadline=None)
    def test_additive_and_leibniz(self, p, q, v):
        assert partial(p + q, v) == partial(p, v) + partial(q, v)
        assert partial(p * q, v) == partial(p, v) * q + p * partial(q, v)


class TestRational:
    @given(st.integers(-10**6, 10**6), st.integers(1, 10**6), st.integers(-10**6, 10**6), st.integers(1, 10**6))
    def test_exact_sum(self, a, b, c, d):
        s = Fraction(a, b) + Fraction(c, d)
        assert s * (b * d) == a * d + c * b
        assert s.denominator > 0

    def test_poly_coefficients_are_reduced(self):
        p = Poly({(1, 0, 0): Fraction(2, 4), (0, 0, 0): Fraction(0, 3)})
        assert p.terms == {(1, 0, 0): Fraction(1, 2)}


class TestTextGrammar:
    @pytest.mark.parametrize("text,printed", [
        ("x^2 + y^3 + z^2", "y^3 + x^2 + z^2"),  # grevlex: higher degree first
        ("-1/4*x*y^2", "-1/4*x*y^2"),
        ("3", "3"),
        ("-x + 2*y*z - 7/3", "2*y*z - x - 7/3"),
        ("0", "0"),
    ])
    def test_examples_print(self, text, printed):
        assert str(parse_poly(text)) == printed
        assert parse_poly(printed) == parse_poly(text)

    def test_elided_exponent_and_coefficient(self):
        assert parse_poly("1*x^1*y") == Poly({(1, 1, 0): 1})

    def test_collects_like_terms(self):
        assert parse_poly("x + x - 2*x").is_zero()

    @pytest.mark.parametrize("bad", ["", "x +", "2x", "x ** 2", "x^", "* x", "x y"])
    def test_rejects(self, bad):
        with pytest.raises(ParseError):
            parse_poly(bad)

    @given(polys, rings)
    @settings(max_examples=80, deadline=None)
    def test_round_trip_on_normal_forms(self, p, R):
        nf = normal_form(p, R).repr
        assert parse_poly(format_poly(nf)) == nf
