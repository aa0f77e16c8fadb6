from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cark.field import (
    FieldError,
    FractionalIdeal,
    IdealError,
    QFElement,
    act_on_basis,
    field_from_d,
    form_from_ideal,
    ideal,
    ideal_from_generators,
    ideal_norm,
    orient,
    parse_ideal,
    unit_ideal,
)
from cark.forms import BQF, gamma_act
from cark.psl2 import L, S, T, U, Psl2Mat


class TestFieldData:
    def test_discriminants(self):
        assert field_from_d(30).delta == 120
        assert field_from_d(5).delta == 5
        assert field_from_d(3).omega == "sqrt(d)"
        assert field_from_d(13).omega == "(1+sqrt(d))/2"

    @pytest.mark.parametrize("d", [12, 1, 0, -3])
    def test_rejects(self, d):
        with pytest.raises(FieldError):
            field_from_d(d)


class TestNorm:
    def test_example_ideal(self):
        assert ideal_norm(ideal(30, (2, 0), (0, 1))) == 2

    def test_unit_and_scaled(self):
        K = field_from_d(30)
        zk = unit_ideal(K)
        assert ideal_norm(zk) == 1
        three = FractionalIdeal(K, zk.alpha.scale(3), zk.beta.scale(3))
        assert ideal_norm(three) == 9

    def test_fractional(self):
        K = field_from_d(5)
        half = FractionalIdeal(K, QFElement(Fraction(1, 2), 0), K.omega_element.scale(Fraction(1, 2)))
        assert ideal_norm(half) == Fraction(1, 4)

    def test_any_clearing_xi_gives_same_norm(self):
        a = FractionalIdeal(field_from_d(7), QFElement(Fraction(3, 2), 0), QFElement(Fraction(1, 2), Fraction(1, 2)))
        assert ideal_norm(a, xi=2) == ideal_norm(a, xi=6) == ideal_norm(a)

    def test_bad_xi(self):
        a = FractionalIdeal(field_from_d(7), QFElement(Fraction(1, 3), 0), QFElement(0, 1))
        with pytest.raises(IdealError):
            ideal_norm(a, xi=2)

    def test_degenerate(self):
        with pytest.raises(IdealError):
            ideal_norm(ideal(30, (2, 0), (4, 0)))


class TestOrientation:
    def test_example(self):
        a = ideal(30, (2, 0), (0, 1))
        assert a.orientation() == 4
        assert orient(a) == a

    def test_swap(self):
        a = ideal(30, (0, 1), (2, 0))
        assert orient(a) == ideal(30, (2, 0), (0, 1))

    def test_idempotent(self):
        a = orient(ideal(30, (0, 1), (2, 0)))
        assert orient(orient(a)) == a


class TestForms:
    def test_example(self):
        assert form_from_ideal(ideal(30, (2, 0), (0, 1))) == BQF(2, 0, -15)

    def test_rings_of_integers(self):
        assert form_from_ideal(unit_ideal(field_from_d(5))) == BQF(1, 1, -1)
        assert form_from_ideal(unit_ideal(field_from_d(2))) == BQF(1, 0, -2)

    def test_not_an_ideal(self):
        # Z + 2 sqrt(30) Z is an order, not a Z_K-ideal
        with pytest.raises(IdealError):
            form_from_ideal(ideal(30, (1, 0), (0, 2)))

    def test_unoriented(self):
        with pytest.raises(IdealError):
            form_from_ideal(ideal(30, (0, 1), (2, 0)))

    @pytest.mark.parametrize("d", [2, 3, 5, 6, 7, 10, 13, 15, 30, 33, 35])
    def test_generated_ideals(self, d):
        K = field_from_d(d)
        for p in (2, 3, 5, 7):
            a = ideal_from_generators(K, [QFElement(p, 0), K.omega_element.add(QFElement(1, 0))])
            f = form_from_ideal(a)
            assert f.disc == K.delta and f.is_primitive()


words = st.lists(st.sampled_from([S, L, T, U]), min_size=1, max_size=6)


class TestEquivariance:
    @given(words, st.sampled_from([(30, "2,0;0,1"), (5, "1,0;1/2,1/2"), (7, "3,0;1,1"), (10, "3,0;1,1")]))
    @settings(max_examples=80)
    def test_form_of_moved_basis(self, word, case):
        d, basis = case
        a = orient(parse_ideal(d, basis))
        g = Psl2Mat(1, 0, 0, 1)
        for w in word:
            g = g @ w
        assert form_from_ideal(act_on_basis(g, a)) == gamma_act(g, form_from_ideal(a))


class TestParsing:
    def test_sqrt_suffixes(self):
        assert parse_ideal(30, "2,0;0,1√30") == parse_ideal(30, "2,0;0,sqrt(30)") == ideal(30, (2, 0), (0, 1))

    def test_bad(self):
        with pytest.raises(IdealError):
            parse_ideal(30, "2,0")

    def test_json_round_trip(self):
        a = parse_ideal(5, "1,0;1/2,1/2")
        assert FractionalIdeal.from_json(a.to_json()) == a
