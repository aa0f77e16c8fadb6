import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import strategies as st

from cark.algebra import GaussRat, MultiPoly, var_name, var_x, var_y

VARS = [var_x(1), var_y(1), var_x(2), var_y(2)]
SYMS = {v: sympy.Symbol(var_name(v)) for v in range(0, 40)}


def to_sympy(p: MultiPoly):
    """Independent rendering of a polynomial as a sympy expression."""
    total = sympy.Integer(0)
    for mono, c in p.items():
        coeff = sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(
            c.im.numerator, c.im.denominator
        )
        term = coeff
        for v, e in mono:
            term *= SYMS[v] ** e
        total += term
    return sympy.expand(total)


def sympy_equal(p: MultiPoly, expr) -> bool:
    return sympy.expand(to_sympy(p) - expr) == 0


small_fracs = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
gauss = st.builds(GaussRat, small_fracs, small_fracs)
monos = st.lists(st.tuples(st.sampled_from(VARS), st.integers(1, 3)), max_size=3).map(
    lambda pairs: tuple(sorted({v: e for v, e in pairs}.items()))
)
polys = st.dictionaries(monos, gauss, max_size=5).map(MultiPoly)
assignments = st.fixed_dictionaries({v: gauss for v in VARS})


@pytest.fixture
def rng():
    return random.Random(20261015)
