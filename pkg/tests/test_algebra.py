from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings

from cark.algebra import (
    I,
    GaussRat,
    MissingVariableError,
    MultiPoly,
    SymMat2,
    m_matrix,
    parse_poly,
    var_x,
    var_y,
)
from conftest import SYMS, assignments, gauss, polys, sympy_equal, to_sympy

x1, y1, x2, y2 = (MultiPoly.var(v) for v in (var_x(1), var_y(1), var_x(2), var_y(2)))


class TestGaussRat:
    def test_lowest_terms(self):
        g = GaussRat(Fraction(4, 6), Fraction(-3, -9))
        assert (g.re, g.im) == (Fraction(2, 3), Fraction(1, 3))

    def test_i_squared(self):
        assert I * I == GaussRat(-1, 0)

    def test_division_is_exact(self):
        a = GaussRat(3, 4)
        assert (a / a) == GaussRat(1, 0)
        assert a * (GaussRat(1, 0) / a) == GaussRat(1, 0)

    @given(gauss, gauss, gauss)
    def test_field_axioms(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a


class TestArithmetic:
    def test_difference_of_squares(self):
        assert (x1 + y1) * (x1 - y1) == x1 * x1 - y1 * y1

    def test_additive_identity(self):
        p = x1 * y2 + 3
        assert p + MultiPoly() == p

    def test_scalar_inverse(self):
        assert (x1 * Fraction(1, 2)) * 2 == x1

    def test_no_zero_terms_stored(self):
        p = (x1 + 1) - x1
        assert p.terms == {(): GaussRat(1)}

    @given(polys, polys, polys)
    @settings(max_examples=60)
    def test_ring_axioms(self, p, q, r):
        assert (p + q) + r == p + (q + r)
        assert p * q == q * p
        assert p * (q + r) == p * q + p * r

    @given(polys, polys)
    @settings(max_examples=60)
    def test_product_matches_sympy(self, p, q):
        assert sympy_equal(p * q, to_sympy(p) * to_sympy(q))


class TestEvaluate:
    def test_table_value(self):
        assert (x1 * y1 + 2).evaluate({var_x(1): 1, var_y(1): 1}) == GaussRat(3)

    def test_zero_assignment_gives_constant(self):
        p = x1 * y1 * x2 + 5 * y2 - 7
        assert p.evaluate({v: 0 for v in p.variables()}) == p.constant_term()

    def test_lucas_at_example_tuple(self):
        lucas2 = (m_matrix(1) @ m_matrix(2)).trace()
        vals = {var_x(1): 4, var_y(1): 1, var_x(2): 2, var_y(2): 1}
        assert lucas2.evaluate(vals) == GaussRat(22)

    def test_missing_variable_named(self):
        with pytest.raises(MissingVariableError, match="y1"):
            (x1 * y1).evaluate({var_x(1): 2})

    @given(polys, polys, assignments)
    @settings(max_examples=60)
    def test_homomorphism(self, p, q, a):
        assert (p * q).evaluate(a) == p.evaluate(a) * q.evaluate(a)
        assert (p + q).evaluate(a) == p.evaluate(a) + q.evaluate(a)


class TestCollapse:
    def test_substitution(self):
        assert (x1 * y2 + x2).collapse("x") == parse_poly("x^2 + x")

    def test_lucas_four(self):
        lucas2 = (m_matrix(1) @ m_matrix(2)).trace()
        assert lucas2.collapse("x") == parse_poly("x^4 + 4x^2 + 2")

    def test_xy_collapse_keeps_letters(self):
        assert (x1 * y2 + y1).collapse("xy") == parse_poly("x*y + y")


class TestMatrices:
    def test_det_of_m(self):
        assert m_matrix(1).det() == MultiPoly.const(1)

    def test_trace_of_m(self):
        assert m_matrix(1).trace() == x1 * y1 + 2

    def test_product_trace_is_printed_a2(self):
        printed = 2 + (x1 + x2) * (y1 + y2) + x1 * x2 * y1 * y2
        assert (m_matrix(1) @ m_matrix(2)).trace() == printed

    @given(polys, polys, polys, polys, polys, polys, polys, polys)
    @settings(max_examples=25, deadline=None)
    def test_det_multiplicative_and_trace_cyclic(self, a, b, c, d, e, f, g, h):
        A, B = SymMat2(a, b, c, d), SymMat2(e, f, g, h)
        assert (A @ B).det() == A.det() * B.det()
        assert (A @ B).trace() == (B @ A).trace()


class TestRendering:
    def test_table_strings(self):
        assert (x1 * y1 + 2).to_text() == "x1*y1 + 2"
        assert ((x1 - y1) * I).to_text() == "i*(x1 - y1)"

    def test_latex_factors_sqrt_minus_one(self):
        assert "\\sqrt{-1}" in ((x1 - y1) * I).to_latex()

    @given(polys)
    @settings(max_examples=80)
    def test_text_round_trip(self, p):
        assert parse_poly(p.to_text()) == p

    @given(polys)
    @settings(max_examples=80)
    def test_json_round_trip(self, p):
        assert MultiPoly.from_json(p.to_json()) == p

    def test_json_shape(self):
        (entry,) = (x1 * Fraction(1, 2)).to_json()
        assert entry == {"exponents": {"x1": 1}, "re": "1/2", "im": "0"}

    def test_graded_lex_order(self):
        p = parse_poly("x1 + y1 + x2 + x1*y1 + 1")
        assert [m for m, _ in p.sorted_terms()] == [
            ((var_x(1), 1), (var_y(1), 1)),
            ((var_x(1), 1),),
            ((var_y(1), 1),),
            ((var_x(2), 1),),
            (),
        ]


def test_sympy_oracle_agrees_on_m_product():
    X1, Y1, X2, Y2 = (SYMS[v] for v in (var_x(1), var_y(1), var_x(2), var_y(2)))
    M = sympy.Matrix([[1 + X1 * Y1, X1], [Y1, 1]]) * sympy.Matrix([[1 + X2 * Y2, X2], [Y2, 1]])
    prod = m_matrix(1) @ m_matrix(2)
    for mine, ref in zip(prod.entries(), M):
        assert sympy_equal(mine, ref)
