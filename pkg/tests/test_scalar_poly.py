from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import F101, QQ, VARS, poly_triples, polys
from quadbundle.field import FieldError, FieldSpec
from quadbundle.grammar import ParseError, format_poly, parse
from quadbundle.poly import (Poly, PolyError, gcd, is_square_up_to_unit, odd_part, random_form,
                             squarefree_decomposition, squarefree_part)

F_TEXT = "x^2+y^2+z^2-2*x*y-2*x*z-2*y*z"
X, Y, Z = sympy.symbols("x y z")


def to_sympy(p: Poly):
    return sum((sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else c)
               * X ** m[0] * Y ** m[1] * Z ** m[2] for m, c in p.terms.items())


class TestField:
    def test_rejects_characteristic_two(self):
        with pytest.raises(FieldError):
            FieldSpec(2)

    def test_rejects_composite(self):
        with pytest.raises(FieldError):
            FieldSpec(91)

    def test_rejects_large_prime(self):
        with pytest.raises(FieldError):
            FieldSpec(2 ** 31 + 11)

    def test_inverse_mod_p(self):
        assert F101.norm(F101.inv(7) * 7) == 1

    def test_euler_criterion(self):
        squares = {x * x % 101 for x in range(1, 101)}
        assert all(F101.is_square(a) == (a in squares) for a in range(1, 101))


class TestParse:
    def test_basic(self):
        p = parse("x^2+2*x*y", VARS, QQ)
        assert p.terms == {(2, 0, 0): 1, (1, 1, 0): 2}

    def test_zero(self):
        assert parse("0", VARS, QQ).terms == {}

    def test_quadric_f(self):
        f = parse(F_TEXT, VARS, QQ)
        assert len(f.terms) == 6
        assert f.degree() == 2

    def test_fraction_coefficient(self):
        assert parse("3/4*x", VARS, QQ).terms == {(1, 0, 0): Fraction(3, 4)}

    def test_fraction_rejected_over_prime(self):
        with pytest.raises(ParseError):
            parse("1/2*x", VARS, F101)

    def test_unknown_variable_position(self):
        with pytest.raises(ParseError) as exc:
            parse("x+w", VARS, QQ)
        assert exc.value.position == 2

    def test_syntax_error(self):
        with pytest.raises(ParseError):
            parse("x^", VARS, QQ)

    def test_whitespace(self):
        assert parse(" x ^ 2 - 3 * y ", VARS, QQ) == parse("x^2-3*y", VARS, QQ)

    def test_printer_order(self):
        assert format_poly(parse("y+x^2+1", VARS, QQ)) == "x^2+y+1"

    @given(polys())
    def test_parse_print_roundtrip(self, p):
        assert parse(format_poly(p), VARS, p.field) == p


class TestArithmetic:
    def test_difference_of_squares(self):
        x, y = Poly.var("x", QQ), Poly.var("y", QQ)
        assert (x + y) * (x - y) == x * x - y * y

    def test_times_zero(self):
        assert (parse(F_TEXT) * Poly.zero(QQ)).is_zero()

    def test_square_of_linear_against_expansion(self):
        p = parse("x+y+z") ** 2
        # term-by-term expansion oracle
        terms = {}
        for a in range(3):
            for b in range(3):
                m = [0, 0, 0]
                m[a] += 1
                m[b] += 1
                terms[tuple(m)] = terms.get(tuple(m), 0) + 1
        assert p.terms == terms
        assert len(p.terms) == 6

    def test_field_mismatch(self):
        with pytest.raises(PolyError):
            Poly.var("x", QQ) + Poly.var("x", F101)

    @given(poly_triples())
    def test_ring_axioms(self, t):
        a, b, c = t
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        assert a - a == Poly.zero(a.field)

    @given(poly_triples(), st.lists(st.integers(-5, 5), min_size=3, max_size=3))
    def test_eval_is_homomorphism(self, t, pt):
        a, b, _ = t
        f = a.field
        pt = [f(v) for v in pt]
        assert (a * b).eval(pt) == f.norm(a.eval(pt) * b.eval(pt))
        assert (a + b).eval(pt) == f.norm(a.eval(pt) + b.eval(pt))


class TestEvalAndDerivative:
    def test_f_values(self):
        f = parse(F_TEXT)
        assert f.eval([1, 0, 0]) == 1
        assert f.eval([1, 1, 1]) == -3

    def test_xyz_on_plane(self):
        assert parse("x*y*z").eval([5, 7, 0]) == 0

    def test_derivative(self):
        assert parse("x^2*y").derivative("x") == parse("2*x*y")

    def test_degree_of_zero(self):
        assert Poly.zero(QQ).degree() == float("-inf")

    def test_not_homogeneous(self):
        assert not parse("x^2+y").is_homogeneous()

    @given(st.integers(0, 5), st.integers(0, 10 ** 6), st.integers(-6, 6), st.sampled_from([QQ, F101]))
    def test_homogeneity_scaling(self, d, seed, lam, field):
        import random
        p = random_form(d, field, random.Random(seed))
        v = [field(3), field(-2), field(5)]
        lv = [field(lam) * c for c in v]
        assert p.eval(lv) == field.norm(field(lam) ** d * p.eval(v))

    @given(st.integers(1, 6), st.integers(0, 10 ** 6), st.sampled_from([QQ, F101]))
    def test_euler_relation(self, d, seed, field):
        import random
        p = random_form(d, field, random.Random(seed))
        xs = [Poly.var(v, field) for v in VARS]
        lhs = sum((x * p.derivative(v) for x, v in zip(xs, VARS)), Poly.zero(field))
        assert lhs == p.scalar_mul(d)


class TestChart:
    def test_dehomogenize(self):
        assert parse("x^2*z+y*z^2").dehomogenize("z") == parse("x^2+y")

    def test_homogenize(self):
        assert parse("x^2+y").homogenize("z", 2) == parse("x^2+y*z")

    def test_homogenize_too_small(self):
        with pytest.raises(PolyError):
            parse("x^3+y").homogenize("z", 2)

    def test_f_chart(self):
        assert parse(F_TEXT).dehomogenize("z") == parse("x^2+y^2+1-2*x*y-2*x-2*y")

    @given(st.integers(1, 5), st.integers(0, 10 ** 6))
    def test_roundtrip_without_z_factor(self, d, seed):
        import random
        p = random_form(d, QQ, random.Random(seed))
        if p.is_zero() or Poly.var("z", QQ).divides(p):
            return
        assert p.dehomogenize("z").homogenize("z", d) == p


class TestSquarefree:
    def test_monomials(self):
        assert squarefree_part(parse("x^4*y^2")) == parse("x*y")
        assert squarefree_part(parse("x^5*y")) == parse("x*y")

    def test_mixed(self):
        p = parse("x+y") ** 3 * parse("x-y") ** 2
        assert squarefree_part(p).monic() == parse("x^2-y^2").monic()
        assert odd_part(p).monic() == parse("x+y").monic()

    def test_square_detection(self):
        assert is_square_up_to_unit(parse("x^6*y^2"))
        assert not is_square_up_to_unit(parse("x^5*y"))
        assert is_square_up_to_unit(parse("-7*x^2"))

    def test_characteristic_too_small(self):
        f = FieldSpec(5)
        with pytest.raises(FieldError):
            squarefree_part(parse("x^6+y^6", VARS, f))

    @settings(max_examples=25)
    @given(st.integers(0, 10 ** 6))
    def test_against_sympy(self, seed):
        import random
        r = random.Random(seed)
        a = random_form(r.randint(1, 2), QQ, r)
        b = random_form(r.randint(1, 2), QQ, r)
        p = (a ** r.randint(1, 3)) * b ** r.randint(1, 2)
        if p.is_zero():
            return
        expected = sympy.Poly(sympy.sqf_part(to_sympy(p)), X, Y, Z)
        got = sympy.Poly(to_sympy(squarefree_part(p)), X, Y, Z)
        assert sympy.div(expected, got)[1].is_zero and sympy.div(got, expected)[1].is_zero

    @settings(max_examples=25)
    @given(st.integers(0, 10 ** 6))
    def test_decomposition_reassembles(self, seed):
        import random
        r = random.Random(seed)
        p = random_form(2, QQ, r) ** 2 * random_form(1, QQ, r)
        if p.is_zero():
            return
        unit, parts = squarefree_decomposition(p)
        acc = Poly.constant(unit, QQ)
        for g, m in parts:
            acc = acc * g ** m
        assert acc == p


class TestGcd:
    @settings(max_examples=25)
    @given(st.integers(0, 10 ** 6))
    def test_against_sympy(self, seed):
        import random
        r = random.Random(seed)
        c = random_form(r.randint(0, 2), QQ, r)
        a = c * random_form(r.randint(1, 2), QQ, r)
        b = c * random_form(r.randint(1, 2), QQ, r)
        if a.is_zero() or b.is_zero():
            return
        expected = sympy.Poly(sympy.gcd(to_sympy(a), to_sympy(b)), X, Y, Z)
        got = sympy.Poly(to_sympy(gcd(a, b)), X, Y, Z)
        assert got.total_degree() == expected.total_degree()
        assert sympy.div(to_sympy(a), to_sympy(gcd(a, b)), X, Y, Z)[1] == 0
