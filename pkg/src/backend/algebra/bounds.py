#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
"""
Directed rational rounding. Every helper here returns a bound on the correct side of the
exact quantity, so chaining them only ever loosens an upper bound.
"""
import math
from fractions import Fraction
from typing import Optional

from backend.settings import SETTINGS


def _exact_sqrt(q:Fraction) -> Optional[Fraction]:
    num, den = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if num * num == q.numerator and den * den == q.denominator:
        return Fraction(num, den)
    return None


def sqrt_upper(q:Fraction, bits:Optional[int]=None) -> Fraction:
    q = Fraction(q)
    if q < 0:
        raise ValueError(f"sqrt_upper of negative {q}")
    if (exact := _exact_sqrt(q)) is not None:
        return exact
    bits = SETTINGS.solver['sqrt_bits'] if bits is None else bits
    scaled = q * 4**bits
    root = math.isqrt(math.ceil(scaled))
    if root * root < scaled:
        root += 1
    return Fraction(root, 2**bits)


def sqrt_lower(q:Fraction, bits:Optional[int]=None) -> Fraction:
    q = Fraction(q)
    if q < 0:
        raise ValueError(f"sqrt_lower of negative {q}")
    if (exact := _exact_sqrt(q)) is not None:
        return exact
    bits = SETTINGS.solver['sqrt_bits'] if bits is None else bits
    return Fraction(math.isqrt(math.floor(q * 4**bits)), 2**bits)


def round_up_dyadic(q:Fraction, bits:int) -> Fraction:
    return Fraction(math.ceil(Fraction(q) * 2**bits), 2**bits)


def round_down_dyadic(q:Fraction, bits:int) -> Fraction:
    return Fraction(math.floor(Fraction(q) * 2**bits), 2**bits)


def round_half_even_dyadic(q:Fraction, bits:int) -> Fraction:
    # Fraction.__round__ is ties-to-even
    return Fraction(round(Fraction(q) * 2**bits), 2**bits)


def pow_upper(base:Fraction, exponent:int, bits:int=64) -> Fraction:
    """
    Upper bound on base**exponent (base ≥ 0) by square-and-multiply, rounding every partial product up to
    `bits` binary digits so the denominators stay bounded for exponents in the hundreds.
    """
    if base < 0:
        raise ValueError(f"pow_upper of negative base {base}")
    result, square = Fraction(1), round_up_dyadic(base, bits)
    while exponent:
        if exponent & 1:
            result = round_up_dyadic(result * square, bits)
        exponent >>= 1
        if exponent:
            square = round_up_dyadic(square * square, bits)
    return result
