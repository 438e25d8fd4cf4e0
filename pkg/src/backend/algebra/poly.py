#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
import functools
import logging
import math
from fractions import Fraction
from typing import Iterable, List, Literal, Tuple, Union

import sympy as sp


log = logging.getLogger(__name__)

Rationalish = Union[int, Fraction, str]

X = sp.Symbol('x')


def to_sympy_rational(q:Rationalish) -> sp.Rational:
    q = Fraction(q)
    return sp.Rational(q.numerator, q.denominator)


def from_sympy_rational(r) -> Fraction:
    r = sp.Rational(r)
    return Fraction(int(r.p), int(r.q))


class RatPoly:
    """
    Univariate polynomial over Q, coefficients low degree first. The zero polynomial has no coefficients.

    Ring and Euclidean operations go through sympy's Poly over QQ; evaluation at rationals is plain Horner
    on Fractions because it sits inside every bisection loop.
    """
    __slots__ = ('coefficients',)

    def __init__(self, coefficients:Iterable[Rationalish]=()):
        coeffs = [c if isinstance(c, Fraction) else Fraction(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coefficients:Tuple[Fraction, ...] = tuple(coeffs)

    @classmethod
    def from_sympy(cls, poly:sp.Poly) -> 'RatPoly':
        if poly.is_zero:
            return cls()
        return cls(from_sympy_rational(c) for c in reversed(poly.all_coeffs()))

    @classmethod
    def linear_root(cls, q:Rationalish) -> 'RatPoly':
        return cls([-Fraction(q), 1])

    def to_sympy(self, gen:sp.Symbol=X) -> sp.Poly:
        coeffs = [to_sympy_rational(c) for c in reversed(self.coefficients)] or [sp.Integer(0)]
        return sp.Poly(coeffs, gen, domain=sp.QQ)

    def as_expr(self, gen:sp.Symbol=X) -> sp.Expr:
        return self.to_sympy(gen).as_expr()

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def leading(self) -> Fraction:
        return self.coefficients[-1] if self.coefficients else Fraction(0)

    def __call__(self, q:Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * q + c
        return acc

    def sign_at(self, q:Fraction) -> int:
        v = self(q)
        return (v > 0) - (v < 0)

    def __eq__(self, other):
        if isinstance(other, RatPoly):
            return self.coefficients == other.coefficients
        return NotImplemented

    def __hash__(self):
        return hash(self.coefficients)

    def __repr__(self):
        return f"RatPoly({self.as_expr()})"

    def __add__(self, other:'RatPoly') -> 'RatPoly':
        return poly_arith(self, other, 'add') #type: ignore

    def __sub__(self, other:'RatPoly') -> 'RatPoly':
        return poly_arith(self, other, 'sub') #type: ignore

    def __mul__(self, other:'RatPoly') -> 'RatPoly':
        return poly_arith(self, other, 'mul') #type: ignore

    def __divmod__(self, other:'RatPoly') -> Tuple['RatPoly', 'RatPoly']:
        return poly_arith(self, other, 'divmod') #type: ignore

    def monic(self) -> 'RatPoly':
        if self.is_zero:
            return self
        lc = self.leading
        return RatPoly(c / lc for c in self.coefficients)

    def derivative(self) -> 'RatPoly':
        return RatPoly(k * c for k, c in enumerate(self.coefficients) if k)

    def negated_argument(self) -> 'RatPoly':
        """p(-t)"""
        return RatPoly(-c if k % 2 else c for k, c in enumerate(self.coefficients))

    def reversed(self) -> 'RatPoly':
        """t^d p(1/t); roots are the reciprocals of the nonzero roots of p"""
        return RatPoly(reversed(self.coefficients))

    def scaled_argument(self, q:Fraction) -> 'RatPoly':
        """q^d p(t/q); roots are q times the roots of p"""
        d = self.degree
        return RatPoly(c * q**(d - k) for k, c in enumerate(self.coefficients))

    def shifted_argument(self, q:Fraction) -> 'RatPoly':
        """p(t - q); roots are the roots of p plus q"""
        return RatPoly.from_sympy(self.to_sympy().shift(to_sympy_rational(-q)))

    def squared_argument(self) -> 'RatPoly':
        """p(t²); real roots are ±sqrt of the nonnegative roots of p"""
        out:List[Fraction] = []
        for c in self.coefficients:
            out.extend((c, Fraction(0)))
        return RatPoly(out)

    def root_bound(self) -> Fraction:
        """Integer B with |r| < B for every complex root r (Cauchy)."""
        if self.degree < 1:
            return Fraction(1)
        lc = abs(self.leading)
        return Fraction(math.floor(1 + max(abs(c) / lc for c in self.coefficients[:-1])) + 1)


def poly_arith(p:RatPoly, q:RatPoly, op:Literal['add', 'sub', 'mul', 'divmod', 'gcd']) -> Union[RatPoly, Tuple[RatPoly, RatPoly]]:
    match op:
        case 'add':
            return RatPoly.from_sympy(p.to_sympy() + q.to_sympy())
        case 'sub':
            return RatPoly.from_sympy(p.to_sympy() - q.to_sympy())
        case 'mul':
            return RatPoly.from_sympy(p.to_sympy() * q.to_sympy())
        case 'divmod':
            if q.is_zero:
                raise ZeroDivisionError("division by zero polynomial")
            quo, rem = p.to_sympy().div(q.to_sympy())
            return RatPoly.from_sympy(quo), RatPoly.from_sympy(rem)
        case 'gcd':
            return RatPoly.from_sympy(p.to_sympy().gcd(q.to_sympy())).monic()
        case _:
            raise ValueError(f"Unknown polynomial op: {op}")


def squarefree_part(p:RatPoly) -> RatPoly:
    if p.is_zero:
        raise ValueError("squarefree_part of the zero polynomial")
    return RatPoly.from_sympy(p.to_sympy().sqf_part()).monic()


@functools.lru_cache(maxsize=4096)
def sturm_sequence(p:RatPoly) -> Tuple[RatPoly, ...]:
    """Sturm chain of the square-free part of p."""
    return tuple(RatPoly.from_sympy(s) for s in sp.sturm(p.to_sympy()))


def sign_variations(chain:Tuple[RatPoly, ...], q:Fraction) -> int:
    signs = [s for s in (g.sign_at(q) for g in chain) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(p:RatPoly, lo:Fraction, hi:Fraction) -> int:
    """Number of distinct real roots of p in the half-open interval (lo, hi]."""
    chain = sturm_sequence(p)
    return sign_variations(chain, lo) - sign_variations(chain, hi)


def count_roots_closed(p:RatPoly, lo:Fraction, hi:Fraction) -> int:
    return count_roots(p, lo, hi) + (1 if p(lo) == 0 else 0)


def isolate_intervals(p:RatPoly) -> List[Tuple[Fraction, Fraction]]:
    """
    Isolating intervals for the distinct real roots of p, increasing. Every endpoint is a non-root of the
    square-free part, so each interval brackets a sign change of it.
    """
    sqf = squarefree_part(p)
    if sqf.degree < 1:
        return []
    bound = sqf.root_bound()
    out:List[Tuple[Fraction, Fraction]] = []
    pending = [(-bound, bound, count_roots(sqf, -bound, bound))]
    while pending:
        lo, hi, count = pending.pop()
        if count == 0:
            continue
        if count == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        while sqf(mid) == 0:
            mid = (lo + mid) / 2
        left = count_roots(sqf, lo, mid)
        # right half pushed first so the left half is popped first
        pending.append((mid, hi, count - left))
        pending.append((lo, mid, left))
    log.debug(f"isolate_intervals({sqf.degree=}, found={len(out)})")
    return out


@functools.lru_cache(maxsize=4096)
def rational_factors(p:RatPoly) -> Tuple[RatPoly, ...]:
    """Distinct monic irreducible factors of p over Q, from sympy's factorization."""
    _, factors = p.to_sympy().factor_list()
    return tuple(RatPoly.from_sympy(f).monic() for f, _ in factors if f.degree() > 0)


def resultant_in_z(f:sp.Expr, g:sp.Expr, t:sp.Symbol, z:sp.Symbol) -> RatPoly:
    """res_t(f, g) for f, g in Q[t, z], as a polynomial in z (subresultant PRS inside sympy)."""
    res = sp.resultant(sp.expand(f), sp.expand(g), t)
    return RatPoly.from_sympy(sp.Poly(res, z, domain=sp.QQ))
