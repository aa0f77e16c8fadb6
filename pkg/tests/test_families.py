import random
from fractions import Fraction
from pathlib import Path

import pytest
import sympy

from cark.algebra import I, GaussRat, MultiPoly, SymMat2, m_matrix, parse_poly, var_x, var_y
from cark.families import (
    ResourceCapError,
    classical_poly,
    d_reversal_holds,
    d_swap_rotation_holds,
    family_direct,
    family_recursive,
    identity_suite,
    multivariate_fibonacci,
    multivariate_lucas,
    pauli_decompose,
    product_matrix,
    property_suite,
    rotate_pairs,
    zero_pair,
)
from conftest import SYMS, sympy_equal

FIXTURE = Path(__file__).parent / "fixtures" / "family_rows.txt"


def load_table():
    rows = {}
    for line in FIXTURE.read_text().splitlines():
        if line.startswith("#") or not line.strip():
            continue
        name, body = line.split(":", 1)
        rows[name.strip()] = parse_poly(body)
    return rows


def at(values):
    out = {}
    for i, v in enumerate(values):
        out[var_x(i // 2 + 1) if i % 2 == 0 else var_y(i // 2 + 1)] = v
    return out


class TestDecomposition:
    def test_single_matrix(self):
        x, y = MultiPoly.x(1), MultiPoly.y(1)
        c = pauli_decompose(m_matrix(1))
        assert c.a == (x * y + 2) * Fraction(1, 2)
        assert c.b == (x + y) * Fraction(1, 2)
        assert c.c == (x - y) * (I * Fraction(1, 2))
        assert c.d == x * y * Fraction(1, 2)

    def test_identity(self):
        c = pauli_decompose(SymMat2.identity())
        assert (c.a, c.b, c.c, c.d) == (MultiPoly.const(1), MultiPoly(), MultiPoly(), MultiPoly())

    def test_printed_c2(self):
        x1, y1, x2, y2 = MultiPoly.x(1), MultiPoly.y(1), MultiPoly.x(2), MultiPoly.y(2)
        printed = ((x1 + x2) - (y1 + y2) + x2 * y1 * (x1 - y2)) * (I * Fraction(1, 2))
        assert family_direct(2).c == printed

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_against_sympy_product(self, k):
        M = sympy.eye(2)
        for i in range(1, k + 1):
            X, Y = SYMS[var_x(i)], SYMS[var_y(i)]
            M = M * sympy.Matrix([[1 + X * Y, X], [Y, 1]])
        fam = family_direct(k)
        assert sympy_equal(fam.a, (M[0, 0] + M[1, 1]) / 2)
        assert sympy_equal(fam.b, (M[0, 1] + M[1, 0]) / 2)
        assert sympy_equal(fam.c, sympy.I * (M[0, 1] - M[1, 0]) / 2)
        assert sympy_equal(fam.d, (M[0, 0] - M[1, 1]) / 2)


class TestTable:
    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_rows(self, k):
        rows = load_table()
        doubled = family_direct(k).doubled()
        for fam in "ABCD":
            assert doubled[fam] == rows[f"2{fam}{k}"], f"2{fam}{k}"

    def test_a3_term_count(self):
        assert len(family_direct(3).a) == 17


class TestRecursion:
    def test_seed(self):
        assert family_recursive(1) == family_direct(1)

    @pytest.mark.parametrize("k", [2, 5])
    def test_matches_direct(self, k):
        assert family_recursive(k) == family_direct(k)

    def test_cap(self):
        with pytest.raises(ResourceCapError):
            family_direct(9)
        with pytest.raises(ResourceCapError):
            family_recursive(3, cap=2)

    def test_cap_from_env(self, monkeypatch):
        monkeypatch.setenv("CARK_K_CAP", "3")
        with pytest.raises(ResourceCapError):
            family_direct(4)


class TestClassical:
    def test_values(self):
        assert classical_poly("lucas", 3).poly == parse_poly("x^3 + 3x")
        assert classical_poly("fibonacci", 3).poly == parse_poly("x^2 + 1")
        assert classical_poly("lucas", 0).poly == MultiPoly.const(2)

    def test_integer_sequences(self):
        lucas = [classical_poly("lucas", n).poly.evaluate({0: 1}) for n in range(8)]
        fib = [classical_poly("fibonacci", n).poly.evaluate({0: 1}) for n in range(8)]
        assert lucas == [GaussRat(v) for v in (2, 1, 3, 4, 7, 11, 18, 29)]
        assert fib == [GaussRat(v) for v in (0, 1, 1, 2, 3, 5, 8, 13)]

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            classical_poly("pell", 2)


class TestNamed:
    def test_lucas(self):
        assert multivariate_lucas(1) == parse_poly("x1 y1 + 2")
        assert multivariate_lucas(2).evaluate(at([1, 1, 1, 1])) == GaussRat(7)

    def test_fibonacci(self):
        assert multivariate_fibonacci(2).collapse("x") == parse_poly("x^3 + 2x")
        assert multivariate_fibonacci(2).evaluate(at([1, 1, 1, 1])) == GaussRat(3)

    def test_fibonacci_trailing_zero(self):
        assert zero_pair(multivariate_fibonacci(2), 2, 2) == multivariate_fibonacci(1)

    def test_lucas_padding_random(self, rng):
        l4, l2 = multivariate_lucas(2), multivariate_lucas(1)
        for _ in range(20):
            m, n = rng.randint(-9, 9), rng.randint(-9, 9)
            assert l4.evaluate(at([m, n, 0, 0])) == l2.evaluate(at([m, n]))


class TestSuites:
    @pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
    def test_properties(self, k):
        rep = property_suite(k)
        assert rep.passed, rep.failures()

    def test_degree_k3(self):
        assert (family_direct(3).a * 2).degree() == 6

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_identities_other_than_d_swap(self, k):
        checks = dict(identity_suite(k).checks)
        checks.pop("d_swap_rotation")
        assert all(checks.values()), [n for n, ok in checks.items() if not ok]

    def test_d_reversal_symmetry_holds(self):
        assert all(d_reversal_holds(k) for k in range(1, 6))

    def test_d_swap_rotation_small_k(self):
        assert d_swap_rotation_holds(1) and d_swap_rotation_holds(2)

    def test_rotation_is_cyclic(self):
        lucas = multivariate_lucas(3)
        p = lucas
        for _ in range(3):
            p = rotate_pairs(p, 3)
        assert p == lucas

    def test_norm_is_determinant(self):
        fam = family_direct(3)
        assert fam.norm() == product_matrix(3).det()
