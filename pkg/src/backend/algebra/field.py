#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
import logging
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .poly import RatPoly, poly_arith
from .real import RealAlgebraic, alg_poly_eval, alg_poly_sign, alg_sqrt


log = logging.getLogger(__name__)

FieldVector = Tuple[RatPoly, ...]


class NumberField:
    """
    Q[x]/(modulus) for a monic irreducible modulus; an element is its residue of least degree.

    Every real root θ of the modulus embeds the field into R by x ↦ θ, and a nonzero element stays nonzero under
    each embedding. Elimination done once here therefore holds for all conjugate roots at the same time.
    """
    __slots__ = ('modulus',)

    def __init__(self, modulus:RatPoly):
        if modulus.degree < 1:
            raise ValueError(f"field modulus must have degree ≥ 1, got {modulus}")
        self.modulus = modulus.monic()

    def __eq__(self, other):
        if isinstance(other, NumberField):
            return self.modulus == other.modulus
        return NotImplemented

    def __hash__(self):
        return hash(self.modulus)

    def __repr__(self):
        return f"NumberField({self.modulus})"

    @property
    def degree(self) -> int:
        return self.modulus.degree

    def reduce(self, g:RatPoly) -> RatPoly:
        if g.degree < self.degree:
            return g
        return poly_arith(g, self.modulus, 'divmod')[1] #type: ignore

    def linear(self, a:Fraction, b:Fraction) -> RatPoly:
        """The element a + b·x."""
        return self.reduce(RatPoly([a, b]))

    def scale(self, g:RatPoly, q:Fraction) -> RatPoly:
        return RatPoly(c * q for c in g.coefficients)

    def mul(self, a:RatPoly, b:RatPoly) -> RatPoly:
        if a.is_zero or b.is_zero:
            return RatPoly()
        if a.degree == 0:
            return self.scale(b, a.leading)
        if b.degree == 0:
            return self.scale(a, b.leading)
        return self.reduce(a * b)

    def inv(self, a:RatPoly) -> RatPoly:
        if a.is_zero:
            raise ZeroDivisionError(f"zero has no inverse in {self!r}")
        if a.degree == 0:
            return RatPoly([1 / a.leading])
        return RatPoly.from_sympy(a.to_sympy().invert(self.modulus.to_sympy()))

    def dot(self, u:Sequence[RatPoly], v:Sequence[RatPoly], metric:Optional[Sequence[Sequence[Fraction]]]=None) -> RatPoly:
        """uᵀ·metric·v, with the identity when no metric is given."""
        acc = RatPoly()
        for i, a in enumerate(u):
            if a.is_zero:
                continue
            col = v[i] if metric is None else self.combine(metric[i], v)
            if not col.is_zero:
                acc = acc + a * col
        return self.reduce(acc)

    def combine(self, row:Sequence[Fraction], v:Sequence[RatPoly]) -> RatPoly:
        """Σ row_j·v_j for a rational row."""
        acc = RatPoly()
        for q, e in zip(row, v):
            if q and not e.is_zero:
                acc = acc + self.scale(e, q)
        return acc

    def sign(self, g:RatPoly, root:RealAlgebraic) -> int:
        return alg_poly_sign(root, g)

    def value(self, g:RatPoly, root:RealAlgebraic) -> RealAlgebraic:
        return alg_poly_eval(root, g)

    def normalized(self, g:RatPoly, norm_inverse:RatPoly, root:RealAlgebraic) -> RealAlgebraic:
        """g(θ)/sqrt(n(θ)) where norm_inverse = 1/n, taken as sign(g(θ))·sqrt(g²/n evaluated at θ)."""
        s = self.sign(g, root)
        if s == 0:
            return RealAlgebraic.rational(0)
        magnitude = alg_sqrt(self.value(self.mul(self.mul(g, g), norm_inverse), root))
        return magnitude if s > 0 else -magnitude


def field_null_space(field:NumberField, rows:Sequence[Sequence[RatPoly]]) -> Tuple[FieldVector, ...]:
    """Null space basis over the field by Gauss-Jordan, one vector per free column, free entry 1."""
    a = [list(r) for r in rows]
    cols = len(a[0]) if a else 0
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, len(a)) if not a[i][c].is_zero), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = field.inv(a[r][c])
        a[r] = [field.mul(e, inv) for e in a[r]]
        for i in range(len(a)):
            if i != r and not a[i][c].is_zero:
                factor = a[i][c]
                a[i] = [e - field.mul(factor, p) for e, p in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    basis = []
    for f in (c for c in range(cols) if c not in pivots):
        v = [RatPoly()] * cols
        v[f] = RatPoly([1])
        for row, p in enumerate(pivots):
            v[p] = RatPoly([0]) - a[row][f]
        basis.append(tuple(v))
    log.debug(f"field_null_space({field.degree=}, {cols=}, nullity={len(basis)})")
    return tuple(basis)
