from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gdseries.errors import DivisionByZeroError, ExponentDenominatorMismatch, GdseriesError, SpecMismatch
from gdseries.field import AlgNum, FieldSpec, alg_pow, format_fraction, parse_rational

SPEC = FieldSpec()
SMALL = FieldSpec(Fraction(2), 4)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def algnums(draw, spec=SMALL, max_terms=3):
    idx = draw(st.lists(st.integers(0, spec.root_degree - 1), max_size=max_terms, unique=True))
    return AlgNum(spec, {i: draw(fractions) for i in idx})


def test_alpha_powers_are_sparse():
    assert alg_pow(SPEC, Fraction(1, 2)).items() == [(12, Fraction(1))]
    assert alg_pow(SPEC, Fraction(5, 2)) == alg_pow(SPEC, 2) * alg_pow(SPEC, Fraction(1, 2))
    assert alg_pow(SPEC, 3) == 8
    assert alg_pow(SPEC, -1) == Fraction(1, 2)
    assert alg_pow(SPEC, Fraction(-1, 2)).items() == [(12, Fraction(1, 2))]


def test_square_root_squares_to_alpha():
    r = alg_pow(SPEC, Fraction(1, 2))
    assert r * r == 2
    assert (r ** 2).is_rational()
    assert r ** -2 == Fraction(1, 2)


def test_exponent_denominator_must_divide_root_degree():
    with pytest.raises(ExponentDenominatorMismatch):
        alg_pow(SPEC, Fraction(1, 5))
    assert FieldSpec(Fraction(2), 120).supports(Fraction(1, 5))
    assert isinstance(ExponentDenominatorMismatch("x"), GdseriesError)


def test_division_by_zero():
    with pytest.raises(DivisionByZeroError):
        SPEC.zero().inverse()
    with pytest.raises(ZeroDivisionError):
        SPEC.one() / 0


def test_mixed_fields_refuse_to_combine():
    with pytest.raises(SpecMismatch):
        SPEC.one() + FieldSpec(Fraction(3)).one()


def test_irrational_or_small_alpha_rejected():
    with pytest.raises(TypeError):
        FieldSpec(1.5)
    with pytest.raises(ValueError):
        FieldSpec(Fraction(1))
    with pytest.raises(TypeError):
        parse_rational(0.25)


def test_rational_embedding():
    x = AlgNum(SPEC, {0: Fraction(3, 4)})
    assert x.is_rational() and x.as_fraction() == Fraction(3, 4)
    assert x.comps[1:] == (0,) * 23
    assert x + 1 == Fraction(7, 4)
    assert 2 * x == Fraction(3, 2)


def test_text_and_json():
    r = alg_pow(SPEC, Fraction(3, 2))
    assert str(r) == "2*2^(1/2)"
    assert AlgNum.from_json(r.to_json()) == r
    assert r.to_json()["D"] == 24
    assert format_fraction(Fraction(-128, 3)) == "-128/3"
    assert parse_rational("4/3") == Fraction(4, 3)


def test_float_view():
    r = alg_pow(SPEC, Fraction(1, 2)) + 1
    assert abs(r.to_float() - (2 ** 0.5 + 1)) < 1e-12


def test_inverse_of_mixed_element():
    x = 1 + alg_pow(SPEC, Fraction(1, 2))
    y = x.inverse()
    assert x * y == 1
    # (1 + sqrt2)^-1 = sqrt2 - 1
    assert y == alg_pow(SPEC, Fraction(1, 2)) - 1


@settings(max_examples=60, deadline=None)
@given(algnums(), algnums(), algnums())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + (-a) == 0


@settings(max_examples=40, deadline=None)
@given(algnums())
def test_inverses(a):
    if a:
        assert a * a.inverse() == 1
        assert (a / a) == 1


@settings(max_examples=60, deadline=None)
@given(st.fractions(min_value=-6, max_value=6, max_denominator=24), st.fractions(min_value=-6, max_value=6, max_denominator=24))
def test_power_law(e1, e2):
    if SPEC.supports(e1) and SPEC.supports(e2):
        assert alg_pow(SPEC, e1) * alg_pow(SPEC, e2) == alg_pow(SPEC, e1 + e2)


@settings(max_examples=40, deadline=None)
@given(fractions, fractions)
def test_rationals_embed_homomorphically(p, q):
    P, Q = AlgNum(SPEC, {0: p}), AlgNum(SPEC, {0: q})
    assert (P + Q).as_fraction() == p + q
    assert (P * Q).as_fraction() == p * q
    assert all(x == 0 for x in (P * Q).comps[1:])


@settings(max_examples=30, deadline=None)
@given(algnums(FieldSpec(Fraction(4, 3), 6)))
def test_float_round_trip_other_alpha(a):
    spec = a.spec
    expected = sum(float(v) * float(spec.alpha) ** (i / spec.root_degree) for i, v in a.items())
    assert abs(a.to_float() - expected) <= 1e-12 * max(1.0, abs(expected))
