#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from backend.algebra import (NumberField, RatPoly, RealAlgebraic, alg_arith, alg_compare, alg_poly_eval, alg_poly_sign, alg_sign,
                             alg_sqrt, alg_to_decimal, count_roots, field_null_space, from_encoding, isolate_real_roots, pow_upper,
                             sqrt_lower, sqrt_upper, squarefree_part, to_encoding)


SQRT2 = alg_sqrt(2)


def test_squarefree_part_drops_repeated_factor():
    assert squarefree_part(RatPoly([0, 0, -1, 1])) == RatPoly([0, -1, 1])


def test_isolate_roots_of_x2_minus_2():
    iso = isolate_real_roots(RatPoly([-2, 0, 1]))
    assert iso.multiplicities == (1, 1)
    low, high = iso.roots
    assert alg_sign(low) < 0 < alg_sign(high)
    assert alg_compare(high, SQRT2) == 0
    for lo, hi in iso.intervals:
        assert count_roots(RatPoly([-2, 0, 1]), lo, hi) == 1


def test_multiplicities_from_gcd_filtration():
    # (x − 1)²(x + 2)
    iso = isolate_real_roots(RatPoly([2, -3, 0, 1]))
    assert [r.as_fraction() for r in iso.roots] == [-2, 1]
    assert iso.multiplicities == (1, 2)


def test_refine_sqrt2():
    lo, hi = RealAlgebraic.from_minpoly([-2, 0, 1], 2).refine(Fraction(1, 100))
    assert hi - lo <= Fraction(1, 100)
    assert lo * lo < 2 < hi * hi
    assert Fraction(140, 100) <= lo and hi <= Fraction(143, 100)


def test_sum_of_square_roots_has_quartic_minpoly():
    s = alg_sqrt(2) + alg_sqrt(3)
    assert s.minpoly == RatPoly([1, 0, -10, 0, 1])
    assert Fraction(31, 10) < s < Fraction(32, 10)


def test_square_of_sqrt2_is_exactly_two():
    assert alg_compare(alg_arith(SQRT2, SQRT2, 'mul'), 2) == 0
    assert (SQRT2 * SQRT2).is_rational


def test_nested_square_root():
    r = alg_sqrt(SQRT2)
    assert r.minpoly == RatPoly([-2, 0, 0, 0, 1])
    assert Fraction(118, 100) < r < Fraction(120, 100)


def test_decimal_rendering():
    assert alg_to_decimal(SQRT2, 4) == "1.4142"
    assert alg_to_decimal(Fraction(-1, 2), 3) == "-0.500"


def test_rationals_are_canonical():
    assert RealAlgebraic.from_minpoly([-3, 2], 1) == RealAlgebraic.rational(Fraction(3, 2))
    assert RealAlgebraic.from_minpoly([-2, 0, 1], 2) == SQRT2
    assert SQRT2 - SQRT2 == 0


def test_encoding():
    assert to_encoding(Fraction(-3, 4)) == "-3/4"
    assert from_encoding({"minpoly": ["-2", "0", "1"], "root": 1}) == -SQRT2
    assert from_encoding(to_encoding(SQRT2)) == SQRT2
    with pytest.raises(TypeError):
        from_encoding(True)


def test_root_index_out_of_range():
    with pytest.raises(ValueError):
        RealAlgebraic.from_minpoly([1, 0, 1], 1)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        alg_arith(SQRT2, 0, 'div')


def test_directed_square_roots():
    assert sqrt_upper(Fraction(9, 4)) == Fraction(3, 2) == sqrt_lower(Fraction(9, 4))
    up, down = sqrt_upper(Fraction(2)), sqrt_lower(Fraction(2))
    assert down * down <= 2 <= up * up
    assert up - down <= Fraction(1, 2**30)


def test_poly_sign_and_value_at_irrational_point():
    assert alg_poly_sign(SQRT2, RatPoly([-3, 2])) == -1
    assert alg_poly_sign(-SQRT2, RatPoly([0, 1])) == -1
    assert alg_poly_sign(SQRT2, RatPoly([-2, 0, 1])) == 0
    assert alg_poly_eval(SQRT2, RatPoly([1, 1])) == 1 + SQRT2
    assert alg_poly_eval(-SQRT2, RatPoly([1, 1])) == 1 - SQRT2


def test_number_field_inverse():
    field = NumberField(RatPoly([-2, 0, 1]))
    a = RatPoly([1, 1])
    assert field.inv(a) == RatPoly([-1, 1])
    assert field.mul(a, field.inv(a)) == RatPoly([1])
    with pytest.raises(ZeroDivisionError):
        field.inv(RatPoly())


def test_normalized_embeds_each_root():
    field = NumberField(RatPoly([-2, 0, 1]))
    half = RatPoly([Fraction(1, 2)])
    assert field.normalized(RatPoly([0, 1]), half, SQRT2) == 1
    assert field.normalized(RatPoly([0, 1]), half, -SQRT2) == -1
    assert field.normalized(RatPoly([1]), half, SQRT2) == 1 / SQRT2


def test_field_null_space_serves_both_conjugates():
    # [[1, 1], [1, 0]] − x·I over Q[x]/(x² − x − 1)
    field = NumberField(RatPoly([-1, -1, 1]))
    rows = [[field.linear(Fraction(1), Fraction(-1)), RatPoly([1])], [RatPoly([1]), field.linear(Fraction(0), Fraction(-1))]]
    assert field_null_space(field, rows) == ((RatPoly([0, 1]), RatPoly([1])),)


def test_pow_upper_is_an_upper_bound():
    base = Fraction(1) + Fraction(1, 3**20)
    assert pow_upper(base, 200) >= base**200
    assert pow_upper(Fraction(3, 2), 5) >= Fraction(3, 2)**5
    assert pow_upper(Fraction(7, 5), 0) == 1


small = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def quadratic(draw):
    """a + b·√2 with small rationals."""
    a, b = draw(small), draw(small)
    return alg_arith(a, alg_arith(b, SQRT2, 'mul'), 'add')


def _field_axioms(x, y, z):
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x - x == 0
    if not x.is_zero:
        assert alg_compare(x * (1 / x), 1) == 0


@given(quadratic(), quadratic(), quadratic())
@settings(max_examples=15)
def test_field_axioms(x, y, z):
    _field_axioms(x, y, z)


@pytest.mark.slow
@given(quadratic(), quadratic(), quadratic())
@settings(max_examples=500)
def test_field_axioms_sweep(x, y, z):
    _field_axioms(x, y, z)


@given(small, small)
def test_compare_agrees_with_rationals(p, q):
    assert alg_compare(p, q) == (p > q) - (p < q)
    assert alg_compare(alg_arith(p, SQRT2, 'add'), alg_arith(q, SQRT2, 'add')) == (p > q) - (p < q)
