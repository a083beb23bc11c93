import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sixvertex.scalar import (
    I,
    MU8,
    ONE,
    SQRT2,
    W,
    ZERO,
    Scalar,
    format_scalar,
    parse_scalar,
    rational,
)


def rand_scalar(rng, span=6, den=4):
    return Scalar(
        rng.randint(-span, span),
        rng.randint(-span, span),
        rng.randint(-span, span),
        rng.randint(-span, span),
        rng.randint(1, den),
    )


small_fraction = st.fractions(
    min_value=-4, max_value=4, max_denominator=6
)
scalars = st.builds(
    lambda a, b, c, d: Scalar.from_coefficients((a, b, c, d)),
    small_fraction,
    small_fraction,
    small_fraction,
    small_fraction,
)


class TestBasics:
    def test_w_squared_is_i(self):
        assert W * W == I

    def test_w_fourth_is_minus_one(self):
        assert W ** 4 == -ONE

    def test_sqrt2_squared(self):
        assert SQRT2 * SQRT2 == rational(2)

    def test_i_sqrt2_squared_is_minus_two(self):
        # (w + w^3)^2 = -2, i.e. (i*sqrt(2))^2
        s = W + W ** 3
        assert s * s == rational(-2)

    def test_inv_of_one_plus_i(self):
        # inv(1 + i) = (1 - i)/2 since |1+i|^2 = 2
        v = ONE + I
        assert v.inv() == (ONE - I) * rational(1, 2)

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            ZERO.inv()
        with pytest.raises(ZeroDivisionError):
            ONE / ZERO


class TestConjugate:
    def test_conjugate_i(self):
        assert I.conjugate() == -I

    def test_conjugate_w(self):
        assert W.conjugate() == -(W ** 3)

    def test_conjugate_rational_point(self):
        # conj(3/5 + 4i/5) = 3/5 - 4i/5
        v = rational(3, 5) + rational(4, 5) * I
        assert v.conjugate() == rational(3, 5) - rational(4, 5) * I

    def test_involution(self):
        rng = random.Random(7)
        for _ in range(50):
            s = rand_scalar(rng)
            assert s.conjugate().conjugate() == s

    def test_fixes_rationals(self):
        assert rational(5, 3).conjugate() == rational(5, 3)


class TestRootsOfUnity:
    def test_w_cubed_order_8(self):
        assert (W ** 3).is_root_of_unity() == 8

    def test_unit_modulus_but_not_torsion(self):
        v = (rational(3) + rational(4) * I) * rational(1, 5)
        assert v.abs_squared() == ONE
        assert v.is_root_of_unity() is None

    def test_two_is_not(self):
        assert rational(2).is_root_of_unity() is None

    def test_orders_match_powers(self):
        for s in MU8:
            n = s.is_root_of_unity()
            assert n is not None
            assert s ** n == ONE
            for m in range(1, n):
                assert s ** m != ONE


class TestRealSign:
    def test_one_minus_sqrt2_negative(self):
        assert (ONE - SQRT2).real_sign() == -1

    def test_zero(self):
        assert ZERO.real_sign() == 0

    def test_three_minus_two_sqrt2_positive(self):
        assert (rational(3) - rational(2) * SQRT2).real_sign() == 1

    def test_rejects_non_real(self):
        with pytest.raises(ValueError):
            I.real_sign()


class TestFieldAxioms:
    def test_random_associativity_and_inverses(self):
        rng = random.Random(12345)
        for _ in range(1000):
            s = rand_scalar(rng)
            t = rand_scalar(rng)
            u = rand_scalar(rng)
            assert (s * t) * u == s * (t * u)
            assert s * (t + u) == s * t + s * u
            if not s.is_zero():
                assert s * s.inv() == ONE

    @given(scalars, scalars)
    def test_conjugate_is_automorphism(self, s, t):
        assert (s * t).conjugate() == s.conjugate() * t.conjugate()
        assert (s + t).conjugate() == s.conjugate() + t.conjugate()

    @given(scalars, scalars)
    def test_abs_squared_multiplicative(self, s, t):
        lhs = (s * t).abs_squared()
        rhs = s.abs_squared() * t.abs_squared()
        assert lhs == rhs
        assert lhs.is_real()


class TestLiterals:
    @pytest.mark.parametrize(
        "text,value",
        [
            ("1/2 + 3*w^1", rational(1, 2) + rational(3) * W),
            ("i", I),
            ("-2", rational(-2)),
            ("w", W),
            ("-w^3", -(W ** 3)),
            ("1 - w^2", ONE - I),
            ("0", ZERO),
            ("2*i", rational(2) * I),
        ],
    )
    def test_parse(self, text, value):
        assert parse_scalar(text) == value

    def test_round_trip(self):
        rng = random.Random(99)
        for _ in range(200):
            s = rand_scalar(rng)
            assert parse_scalar(format_scalar(s)) == s

    def test_bad_literals(self):
        for text in ["", "w^", "1//2", "q", "1 +", "3*z^2"]:
            with pytest.raises(ValueError):
                parse_scalar(text)


def test_hash_consistency():
    assert hash(Scalar(2, 0, 0, 0, 4)) == hash(Scalar(1, 0, 0, 0, 2))
    assert Scalar(2, 0, 0, 0, 4) == rational(1, 2)


def test_fraction_coefficients_view():
    s = Scalar.from_coefficients((Fraction(1, 2), 0, Fraction(-3, 4), 0))
    assert s.coefficients == (Fraction(1, 2), 0, Fraction(-3, 4), 0)
