from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toricsym.errors import ParseError, PreconditionError
from toricsym.qfield import (
    FieldDescriptor,
    QuadElement,
    quad_eval,
    satisfies_star,
    standard_field_table,
    verify_negative_one_witness,
)

rationals = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 12))


def elements(d):
    return st.builds(lambda a, b: QuadElement(d, a, b), rationals, rationals)


def test_rational_times_rational():
    one = QuadElement(5, Fraction(1), Fraction(0))
    assert one * one == 1


def test_defining_relation_of_the_radical():
    root5 = QuadElement.sqrt_of(5)
    assert root5 * root5 == 5


def test_half_plus_minus_root_minus_three_squares_to_minus_one():
    half = Fraction(1, 2)
    x = QuadElement(-3, half, half)
    y = QuadElement(-3, half, -half)
    assert x * x + y * y == -1


def test_mixed_radicands_are_rejected():
    with pytest.raises(PreconditionError):
        QuadElement.sqrt_of(5) + QuadElement.sqrt_of(-1)


def test_division_by_zero_is_rejected():
    with pytest.raises(ZeroDivisionError):
        QuadElement.sqrt_of(5) / QuadElement(5, Fraction(0), Fraction(0))


def test_d_must_be_squarefree():
    with pytest.raises(ValueError):
        QuadElement(4, Fraction(1), Fraction(1))
    with pytest.raises(ValueError):
        QuadElement(12, Fraction(1), Fraction(1))


@settings(max_examples=120, deadline=None)
@given(elements(5), elements(5), elements(5))
def test_field_axioms_hold_exactly(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x
    assert x * y == y * x
    if x.norm() != 0:
        assert x * x.inverse() == 1
        assert (y / x) * x == y


@settings(max_examples=120, deadline=None)
@given(elements(-3), elements(-3))
def test_subtraction_and_negation(x, y):
    assert x - y == x + (-y)
    assert (x - y) + y == x


def test_quad_eval_parses_and_computes():
    table = {"r": QuadElement.sqrt_of(5)}
    assert quad_eval("(1 + r) * (1 - r)", table) == -4
    assert quad_eval("r ** 2", table) == 5
    assert quad_eval("2 + 3 * 4") == 14
    with pytest.raises(ParseError):
        quad_eval("__import__('os')")
    with pytest.raises(ParseError):
        quad_eval("unknown + 1")


class TestStarCondition:
    def test_table_verdicts(self):
        table = standard_field_table()
        assert satisfies_star(table["Q"])
        assert satisfies_star(table["R"])
        assert satisfies_star(table["Q(sqrt5)"])
        assert not satisfies_star(table["Q(sqrt-1)"])
        assert not satisfies_star(table["Q(sqrt-3)"])
        assert not satisfies_star(table["Q(sqrt-7)"])

    def test_witnesses_verify(self):
        table = standard_field_table()
        assert verify_negative_one_witness(table["Q(sqrt-1)"])
        assert verify_negative_one_witness(table["Q(sqrt-3)"])

    def test_bad_witness_fails(self):
        desc = FieldDescriptor(
            name="Q(sqrt-3)*",
            kind="quadratic",
            d=-3,
            star_clause2=False,
            star_clause3=False,
            witness=(QuadElement.rational(1), QuadElement.rational(1)),
        )
        assert not verify_negative_one_witness(desc)

    def test_missing_witness_is_an_error(self):
        with pytest.raises(PreconditionError):
            verify_negative_one_witness(standard_field_table()["Q"])

    def test_verifying_witness_contradicts_declared_clause(self):
        desc = FieldDescriptor(
            name="inconsistent",
            kind="quadratic",
            d=-1,
            star_clause2=True,
            star_clause3=True,
            witness=(QuadElement.sqrt_of(-1), QuadElement.rational(0)),
        )
        with pytest.raises(PreconditionError):
            satisfies_star(desc)

    def test_star_fails_whenever_a_witness_verifies(self):
        for desc in standard_field_table().values():
            if desc.witness is not None and verify_negative_one_witness(desc):
                assert not satisfies_star(desc)

    def test_reals_cannot_declare_clause2_false(self):
        with pytest.raises(ValueError):
            FieldDescriptor(name="R", kind="reals", star_clause2=False)


class TestMoreArithmetic:
    def test_negative_powers_use_the_inverse(self):
        x = QuadElement(5, Fraction(1), Fraction(1))
        assert x ** -2 == (x * x).inverse()

    def test_rendering(self):
        assert str(QuadElement.sqrt_of(-3)) == "sqrt(-3)"
        assert str(QuadElement(-3, Fraction(1, 2), Fraction(-1, 2))) == "1/2 - 1/2*sqrt(-3)"
        assert str(QuadElement.rational(Fraction(3, 4))) == "3/4"

    def test_quad_eval_division_by_zero_propagates(self):
        with pytest.raises(ZeroDivisionError):
            quad_eval("1 / (r * r - 5)", {"r": QuadElement.sqrt_of(5)})

    def test_rational_marker_mixes_with_any_radicand(self):
        assert QuadElement.rational(2) * QuadElement.sqrt_of(5) == QuadElement(
            5, Fraction(0), Fraction(2)
        )

    def test_conjugate_norm_product(self):
        x = QuadElement(-1, Fraction(3), Fraction(4))
        assert x * x.conjugate() == x.norm()
