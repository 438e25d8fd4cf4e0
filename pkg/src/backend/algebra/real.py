#pylint: disable=missing-docstring, line-too-long, trailing-whitespace, protected-access
import functools
import logging
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Literal, Optional, Tuple, Union

import sympy as sp

from .bounds import sqrt_lower, sqrt_upper
from .poly import (RatPoly, count_roots, count_roots_closed, isolate_intervals, poly_arith, rational_factors,
                   resultant_in_z, squarefree_part)


log = logging.getLogger(__name__)

_T, _Z = sp.symbols('t z')

Number = Union['RealAlgebraic', int, Fraction]
Interval = Tuple[Fraction, Fraction]


class RealAlgebraic:
    """
    A real algebraic number: the `root_index`-th smallest real root of `minpoly`, isolated in `isolating_interval`.

    Every instance is canonical: the minimal polynomial is the monic irreducible factor over Q that vanishes at
    the number, and rationals always carry a degree-1 polynomial. Two instances are therefore equal exactly when
    their (minpoly, root_index) pairs are equal.

    For irrational values the root lies strictly inside the isolating interval; the interval only ever shrinks,
    behind a per-instance lock.
    """
    __slots__ = ('minpoly', 'root_index', '_rational', '_lo', '_hi', '_lo_sign', '_lock')

    def __init__(self, minpoly:RatPoly, root_index:int, lo:Fraction, hi:Fraction, rational:Optional[Fraction]=None):
        self.minpoly = minpoly
        self.root_index = root_index
        self._rational = rational
        self._lo = lo
        self._hi = hi
        self._lo_sign = 0 if rational is not None else minpoly.sign_at(lo)
        self._lock = threading.Lock()

    # -- construction ------------------------------------------------------------------------------

    @classmethod
    def rational(cls, q:Union[int, Fraction, str]) -> 'RealAlgebraic':
        q = Fraction(q)
        return cls(RatPoly.linear_root(q), 1, q, q, rational=q)

    @classmethod
    def coerce(cls, value:Any) -> 'RealAlgebraic':
        if isinstance(value, RealAlgebraic):
            return value
        if isinstance(value, (int, Fraction, str)):
            return cls.rational(value)
        raise TypeError(f"cannot interpret {value!r} as a real algebraic number")

    @classmethod
    def _irreducible(cls, poly:RatPoly, lo:Fraction, hi:Fraction, root_index:Optional[int]=None) -> 'RealAlgebraic':
        """poly monic irreducible of degree ≥ 2 with a sign change across (lo, hi)."""
        if root_index is None:
            root_index = count_roots(poly, -poly.root_bound(), lo) + 1
        return cls(poly, root_index, lo, hi)

    @classmethod
    def _from_bracket(cls, poly:RatPoly, lo:Fraction, hi:Fraction) -> 'RealAlgebraic':
        """poly square-free with exactly one real root in [lo, hi]; reduce to the factor owning that root."""
        if lo == hi:
            return cls.rational(lo)
        for factor in rational_factors(poly):
            if factor.degree == 1:
                root = -factor.coefficients[0]
                if lo <= root <= hi:
                    return cls.rational(root)
            elif factor.sign_at(lo) * factor.sign_at(hi) < 0:
                return cls._irreducible(factor, lo, hi)
        raise ArithmeticError(f"no factor of {poly} has its root in [{lo}, {hi}]")

    @classmethod
    def from_minpoly(cls, coefficients:List[Union[int, Fraction, str]], root_index:int) -> 'RealAlgebraic':
        """The `root_index`-th smallest distinct real root of any nonzero rational polynomial."""
        poly = RatPoly(coefficients)
        if poly.is_zero:
            raise ValueError("minpoly must be a nonzero polynomial")
        sqf = squarefree_part(poly)
        intervals = isolate_intervals(sqf)
        if not 1 <= root_index <= len(intervals):
            raise ValueError(f"root index {root_index} out of range: polynomial has {len(intervals)} real roots")
        return cls._from_bracket(sqf, *intervals[root_index - 1])

    # -- state ---------------------------------------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self._rational is not None

    @property
    def is_zero(self) -> bool:
        return self._rational == 0

    def as_fraction(self) -> Fraction:
        if self._rational is None:
            raise ValueError(f"{self!r} is irrational")
        return self._rational

    @property
    def isolating_interval(self) -> Interval:
        with self._lock:
            return self._lo, self._hi

    @property
    def _key(self):
        return ('q', self._rational) if self._rational is not None else (self.minpoly.coefficients, self.root_index)

    def refine(self, width:Fraction) -> Interval:
        if width <= 0:
            raise ValueError(f"refine width must be positive, got {width}")
        if self._rational is not None:
            return self._rational, self._rational
        with self._lock:
            lo, hi, lo_sign = self._lo, self._hi, self._lo_sign
            while hi - lo > width:
                mid = (lo + hi) / 2
                s = self.minpoly.sign_at(mid)
                if s == lo_sign:
                    lo = mid
                else:
                    hi = mid
            self._lo, self._hi = lo, hi
            return lo, hi

    # -- python protocol -----------------------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, RealAlgebraic):
            return self._key == other._key
        if isinstance(other, (int, Fraction)):
            return self._rational is not None and self._rational == other
        return NotImplemented

    def __hash__(self):
        return hash(self._rational) if self._rational is not None else hash(self._key)

    def __repr__(self):
        if self._rational is not None:
            return f"RealAlgebraic({self._rational})"
        return f"RealAlgebraic({self.minpoly.as_expr()}, root {self.root_index} ≈ {alg_to_decimal(self, 6)})"

    def __str__(self):
        return str(self._rational) if self._rational is not None else alg_to_decimal(self, 6)

    def __bool__(self):
        return not self.is_zero

    def __add__(self, other): return alg_arith(self, other, 'add')
    def __radd__(self, other): return alg_arith(other, self, 'add')
    def __sub__(self, other): return alg_arith(self, other, 'sub')
    def __rsub__(self, other): return alg_arith(other, self, 'sub')
    def __mul__(self, other): return alg_arith(self, other, 'mul')
    def __rmul__(self, other): return alg_arith(other, self, 'mul')
    def __truediv__(self, other): return alg_arith(self, other, 'div')
    def __rtruediv__(self, other): return alg_arith(other, self, 'div')
    def __neg__(self): return _neg(self)
    def __abs__(self): return _neg(self) if alg_sign(self) < 0 else self
    def __lt__(self, other): return alg_compare(self, other) < 0
    def __le__(self, other): return alg_compare(self, other) <= 0
    def __gt__(self, other): return alg_compare(self, other) > 0
    def __ge__(self, other): return alg_compare(self, other) >= 0


@dataclass(frozen=True)
class IsolationResult:
    roots: Tuple[RealAlgebraic, ...]
    multiplicities: Tuple[int, ...]
    intervals: Tuple[Interval, ...]


def isolate_real_roots(p:RatPoly) -> IsolationResult:
    if p.is_zero:
        raise ValueError("isolate_real_roots of the zero polynomial")
    sqf = squarefree_part(p)
    intervals = isolate_intervals(sqf)
    roots = tuple(RealAlgebraic._from_bracket(sqf, lo, hi) for lo, hi in intervals)
    # gcd filtration: a root of multiplicity k is a root of g_0 … g_{k-1}
    filtration = [p]
    while filtration[-1].degree > 0:
        g = filtration[-1]
        filtration.append(poly_arith(g, g.derivative(), 'gcd')) #type: ignore
    radicals = [squarefree_part(g) for g in filtration if g.degree > 0]
    multiplicities = tuple(
        sum(1 for r in radicals if r.sign_at(lo) * r.sign_at(hi) < 0)
        for lo, hi in intervals
    )
    return IsolationResult(roots, multiplicities, tuple(intervals))


# -- sign, order ------------------------------------------------------------------------------------

def alg_sign(x:Number) -> int:
    x = RealAlgebraic.coerce(x)
    if x._rational is not None:
        return (x._rational > 0) - (x._rational < 0)
    lo, hi = x.isolating_interval
    width = hi - lo
    while lo <= 0 <= hi:
        width /= 16
        lo, hi = x.refine(width)
    return 1 if lo > 0 else -1


def alg_compare(x:Number, y:Number) -> int:
    """
    -1, 0, +1 as x <, =, > y. Canonical representations make equality structural; distinct values are then
    ordered by refining both until their intervals separate, which decides the sign of x - y.
    """
    x, y = RealAlgebraic.coerce(x), RealAlgebraic.coerce(y)
    if x == y:
        return 0
    if x._rational is not None and y._rational is not None:
        return -1 if x._rational < y._rational else 1
    width = max(x.isolating_interval[1] - x.isolating_interval[0], y.isolating_interval[1] - y.isolating_interval[0], Fraction(1, 2**8))
    while True:
        xlo, xhi = x.refine(width)
        ylo, yhi = y.refine(width)
        # at least one of the two is irrational, i.e. strictly inside its interval
        if xhi <= ylo:
            return -1
        if yhi <= xlo:
            return 1
        width /= 16


def rational_bounds(x:Number, width:Fraction) -> Interval:
    return RealAlgebraic.coerce(x).refine(width)


def rational_upper(x:Number, width:Fraction=Fraction(1, 2**32)) -> Fraction:
    return rational_bounds(x, width)[1]


def rational_lower(x:Number, width:Fraction=Fraction(1, 2**32)) -> Fraction:
    return rational_bounds(x, width)[0]


# -- unary maps that keep the minimal polynomial irreducible ----------------------------------------

def _neg(x:RealAlgebraic) -> RealAlgebraic:
    if x._rational is not None:
        return RealAlgebraic.rational(-x._rational)
    lo, hi = x.isolating_interval
    return RealAlgebraic._irreducible(x.minpoly.negated_argument().monic(), -hi, -lo)


def _inverse(x:RealAlgebraic) -> RealAlgebraic:
    if x._rational is not None:
        return RealAlgebraic.rational(1 / x._rational)
    alg_sign(x)  # leaves the interval clear of 0
    lo, hi = x.isolating_interval
    return RealAlgebraic._irreducible(x.minpoly.reversed().monic(), 1 / hi, 1 / lo)


def _shift(x:RealAlgebraic, q:Fraction) -> RealAlgebraic:
    lo, hi = x.isolating_interval
    return RealAlgebraic._irreducible(x.minpoly.shifted_argument(q).monic(), lo + q, hi + q, x.root_index)


def _scale(x:RealAlgebraic, q:Fraction) -> RealAlgebraic:
    if q == 0:
        return RealAlgebraic.rational(0)
    lo, hi = x.isolating_interval
    poly = x.minpoly.scaled_argument(q).monic()
    return RealAlgebraic._irreducible(poly, lo * q, hi * q) if q > 0 else RealAlgebraic._irreducible(poly, hi * q, lo * q)


# -- root selection ---------------------------------------------------------------------------------

def _select_root(poly:RatPoly, enclose:Callable[[Fraction], Interval]) -> RealAlgebraic:
    """
    `poly` vanishes at the wanted value and `enclose(w)` returns ever tighter rational enclosures of it.
    Tighten until exactly one root among the factors of poly is inside the enclosure.
    """
    factors = rational_factors(squarefree_part(poly))
    width = Fraction(1, 16)
    for _ in range(4096):
        lo, hi = enclose(width)
        hits = [(f, n) for f in factors if (n := count_roots_closed(f, lo, hi))]
        total = sum(n for _, n in hits)
        if total == 1:
            factor = hits[0][0]
            if factor.degree == 1:
                return RealAlgebraic.rational(-factor.coefficients[0])
            return RealAlgebraic._irreducible(factor, lo, hi)
        if total == 0:
            raise ArithmeticError(f"enclosure [{lo}, {hi}] lost the root of {poly}")
        width /= 16
    raise ArithmeticError(f"root selection did not separate the roots of {poly}")


def _interval_mul(a:Interval, b:Interval) -> Interval:
    products = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(products), max(products)


@functools.lru_cache(maxsize=8192)
def _combine(op:Literal['add', 'mul'], x:RealAlgebraic, y:RealAlgebraic) -> RealAlgebraic:
    px, py = x.minpoly.as_expr(_T), y.minpoly.as_expr(_T)
    match op:
        case 'add':
            resultant = resultant_in_z(px, py.subs(_T, _Z - _T), _T, _Z)
            def enclose(w:Fraction) -> Interval:
                (xlo, xhi), (ylo, yhi) = x.refine(w), y.refine(w)
                return xlo + ylo, xhi + yhi
        case 'mul':
            dy = y.minpoly.degree
            scaled = sp.expand(_T**dy * py.subs(_T, _Z / _T))
            resultant = resultant_in_z(px, scaled, _T, _Z)
            def enclose(w:Fraction) -> Interval:
                return _interval_mul(x.refine(w), y.refine(w))
        case _:
            raise ValueError(f"Unknown combine op: {op}")
    log.debug(f"_combine({op=}, deg_x={x.minpoly.degree}, deg_y={y.minpoly.degree}, deg_res={resultant.degree})")
    return _select_root(resultant, enclose)


def _add(x:RealAlgebraic, y:RealAlgebraic) -> RealAlgebraic:
    if x._rational is not None and y._rational is not None:
        return RealAlgebraic.rational(x._rational + y._rational)
    if x._rational is not None:
        return y if x._rational == 0 else _shift(y, x._rational)
    if y._rational is not None:
        return x if y._rational == 0 else _shift(x, y._rational)
    if x == y:
        return _scale(x, Fraction(2))
    if x == _neg(y):
        return RealAlgebraic.rational(0)
    # canonical order keeps the cache symmetric
    return _combine('add', *sorted((x, y), key=lambda v: repr(v._key)))


def _mul(x:RealAlgebraic, y:RealAlgebraic) -> RealAlgebraic:
    if x._rational is not None and y._rational is not None:
        return RealAlgebraic.rational(x._rational * y._rational)
    if x._rational is not None:
        return _scale(y, x._rational)
    if y._rational is not None:
        return _scale(x, y._rational)
    return _combine('mul', *sorted((x, y), key=lambda v: repr(v._key)))


def alg_arith(x:Number, y:Number, op:Literal['add', 'sub', 'mul', 'div']) -> RealAlgebraic:
    x, y = RealAlgebraic.coerce(x), RealAlgebraic.coerce(y)
    match op:
        case 'add':
            return _add(x, y)
        case 'sub':
            return _add(x, _neg(y))
        case 'mul':
            return _mul(x, y)
        case 'div':
            if y.is_zero:
                raise ZeroDivisionError("division by zero real algebraic number")
            return _mul(x, _inverse(y))
        case _:
            raise ValueError(f"Unknown arithmetic op: {op}")


def alg_sqrt(x:Number) -> RealAlgebraic:
    x = RealAlgebraic.coerce(x)
    if alg_sign(x) < 0:
        raise ValueError(f"alg_sqrt of negative number {x!r}")
    if x._rational is not None:
        q = x._rational
        lo, hi = sqrt_lower(q), sqrt_upper(q)
        if lo == hi:
            return RealAlgebraic.rational(lo)
        return RealAlgebraic._irreducible(RatPoly([-q, 0, 1]), lo, hi, root_index=2)
    def enclose(w:Fraction) -> Interval:
        lo, hi = x.refine(w * w)
        bits = max(8, (1 / w).numerator.bit_length() + 4)
        return sqrt_lower(max(lo, Fraction(0)), bits), sqrt_upper(hi, bits)
    return _select_root(x.minpoly.squared_argument(), enclose)


def _horner_enclosure(g:RatPoly, box:Interval) -> Interval:
    acc:Interval = (Fraction(0), Fraction(0))
    for c in reversed(g.coefficients):
        acc = _interval_mul(acc, box)
        acc = (acc[0] + c, acc[1] + c)
    return acc


@functools.lru_cache(maxsize=4096)
def _image_polynomial(minpoly:RatPoly, g:RatPoly) -> RatPoly:
    """res_t(minpoly(t), z − g(t)): vanishes at g(θ) for every root θ of minpoly, so conjugates share it."""
    return resultant_in_z(minpoly.as_expr(_T), _Z - g.as_expr(_T), _T, _Z)


def alg_poly_eval(x:Number, g:RatPoly) -> RealAlgebraic:
    """g(x) for a rational polynomial g."""
    x = RealAlgebraic.coerce(x)
    if x._rational is not None:
        return RealAlgebraic.rational(g(x._rational))
    if g.degree < 1:
        return RealAlgebraic.rational(g.leading)
    return _select_root(_image_polynomial(x.minpoly, g), lambda w: _horner_enclosure(g, x.refine(w)))


def alg_poly_sign(x:Number, g:RatPoly) -> int:
    """Sign of g(x) without building g(x); zero exactly when the minimal polynomial of x divides g."""
    x = RealAlgebraic.coerce(x)
    if x._rational is not None:
        return g.sign_at(x._rational)
    if g.is_zero or poly_arith(g, x.minpoly, 'divmod')[1].is_zero: #type: ignore
        return 0
    width = Fraction(1, 16)
    while True:
        lo, hi = _horner_enclosure(g, x.refine(width))
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        width /= 16


def alg_to_decimal(x:Number, digits:int) -> str:
    if digits < 1:
        raise ValueError(f"digits must be ≥ 1, got {digits}")
    x = RealAlgebraic.coerce(x)
    scale = 10**digits
    if x._rational is not None:
        approx = x._rational
    else:
        width = Fraction(1, scale)
        lo, hi = x.refine(width)
        # irrational, so the rounding of the enclosure settles eventually
        while round(lo * scale) != round(hi * scale):
            width /= 2
            lo, hi = x.refine(width)
        approx = lo
    k = round(approx * scale)
    body = str(abs(k)).rjust(digits + 1, '0')
    return f"{'-' if k < 0 else ''}{body[:-digits]}.{body[-digits:]}"


# -- textual encoding -------------------------------------------------------------------------------

def to_encoding(x:Number) -> Union[str, Dict[str, Any]]:
    x = RealAlgebraic.coerce(x)
    if x._rational is not None:
        return str(x._rational)
    return {"minpoly": [str(c) for c in x.minpoly.coefficients], "root": x.root_index}


def from_encoding(obj:Any) -> RealAlgebraic:
    match obj:
        case bool():
            raise TypeError(f"not a number encoding: {obj!r}")
        case int() | str():
            return RealAlgebraic.rational(Fraction(obj))
        case {"minpoly": list(coefficients), "root": int(root_index)}:
            return RealAlgebraic.from_minpoly([Fraction(c) for c in coefficients], root_index)
        case _:
            raise TypeError(f"not a number encoding: {obj!r}")
