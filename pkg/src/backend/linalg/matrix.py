#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
import logging
from fractions import Fraction
from typing import Any, Iterable, List, Literal, Sequence, Tuple

from backend.algebra import RealAlgebraic, alg_arith, alg_sqrt, rational_bounds, sqrt_upper
from backend.errors import DependentVectorsError, SingularMatrixError


log = logging.getLogger(__name__)

Vector = Tuple[RealAlgebraic, ...]


class ExactMatrix:
    """Immutable rows×cols matrix of RealAlgebraic entries, row-major."""
    __slots__ = ('rows', 'cols', 'entries')

    def __init__(self, rows:int, cols:int, entries:Iterable[Any]):
        self.rows = rows
        self.cols = cols
        self.entries:Tuple[RealAlgebraic, ...] = tuple(RealAlgebraic.coerce(e) for e in entries)
        if len(self.entries) != rows * cols:
            raise ValueError(f"ExactMatrix({rows=}, {cols=}) got {len(self.entries)} entries")

    @classmethod
    def from_rows(cls, rows:Sequence[Sequence[Any]], cols:int=0) -> 'ExactMatrix':
        """`cols` only matters for a matrix with no rows."""
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise ValueError(f"ragged matrix rows: widths {sorted(widths)}")
        ncols = widths.pop() if widths else cols
        return cls(len(rows), ncols, (e for r in rows for e in r))

    @classmethod
    def from_columns(cls, columns:Sequence[Sequence[Any]], rows:int=0) -> 'ExactMatrix':
        return cls.from_rows(list(zip(*columns)), cols=len(columns)) if columns else cls(rows, 0, ())

    @classmethod
    def identity(cls, n:int) -> 'ExactMatrix':
        return cls(n, n, (1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows:int, cols:int) -> 'ExactMatrix':
        return cls(rows, cols, (0 for _ in range(rows * cols)))

    @classmethod
    def diag(cls, values:Sequence[Any]) -> 'ExactMatrix':
        n = len(values)
        return cls(n, n, (values[i] if i == j else 0 for i in range(n) for j in range(n)))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def is_rational(self) -> bool:
        return all(e.is_rational for e in self.entries)

    def __getitem__(self, ij:Tuple[int, int]) -> RealAlgebraic:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i:int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j:int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> List[List[RealAlgebraic]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def T(self) -> 'ExactMatrix': #pylint: disable=invalid-name
        return mat_transpose(self)

    def is_symmetric(self) -> bool:
        return self.is_square and all(self[i, j] == self[j, i] for i in range(self.rows) for j in range(i + 1, self.cols))

    def is_zero(self) -> bool:
        return all(e.is_zero for e in self.entries)

    def scale(self, c:Any) -> 'ExactMatrix':
        return ExactMatrix(self.rows, self.cols, (alg_arith(c, e, 'mul') for e in self.entries))

    def __eq__(self, other):
        if isinstance(other, ExactMatrix):
            return self.shape == other.shape and self.entries == other.entries
        return NotImplemented

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"ExactMatrix({self.to_rows()})"

    def __add__(self, other:'ExactMatrix') -> 'ExactMatrix':
        return mat_arith(self, other, 'add')

    def __sub__(self, other:'ExactMatrix') -> 'ExactMatrix':
        return mat_arith(self, other, 'sub')

    def __matmul__(self, other:'ExactMatrix') -> 'ExactMatrix':
        return mat_arith(self, other, 'mul')


def _dot(u:Sequence[RealAlgebraic], v:Sequence[RealAlgebraic]) -> RealAlgebraic:
    acc = RealAlgebraic.rational(0)
    for a, b in zip(u, v):
        if a.is_zero or b.is_zero:
            continue
        acc = alg_arith(acc, alg_arith(a, b, 'mul'), 'add')
    return acc


def mat_transpose(X:ExactMatrix) -> ExactMatrix:
    return ExactMatrix(X.cols, X.rows, (X[i, j] for j in range(X.cols) for i in range(X.rows)))


def mat_arith(X:ExactMatrix, Y:ExactMatrix, op:Literal['add', 'sub', 'mul']) -> ExactMatrix:
    match op:
        case 'add' | 'sub':
            if X.shape != Y.shape:
                raise ValueError(f"shape mismatch for {op}: {X.shape} vs {Y.shape}")
            return ExactMatrix(X.rows, X.cols, (alg_arith(a, b, op) for a, b in zip(X.entries, Y.entries)))
        case 'mul':
            if X.cols != Y.rows:
                raise ValueError(f"shape mismatch for mul: {X.shape} @ {Y.shape}")
            columns = [Y.column(j) for j in range(Y.cols)]
            return ExactMatrix(X.rows, Y.cols, (_dot(X.row(i), columns[j]) for i in range(X.rows) for j in range(Y.cols)))
        case _:
            raise ValueError(f"Unknown matrix op: {op}")


def mat_vec(X:ExactMatrix, v:Sequence[Any]) -> Vector:
    v = [RealAlgebraic.coerce(e) for e in v]
    return tuple(_dot(X.row(i), v) for i in range(X.rows))


def _row_reduce(X:ExactMatrix) -> Tuple[List[List[RealAlgebraic]], List[int], int]:
    """Reduced row echelon form by Gauss-Jordan; returns (rows, pivot columns, number of row swaps)."""
    a = X.to_rows()
    pivots:List[int] = []
    swaps = 0
    r = 0
    for c in range(X.cols):
        pivot = next((i for i in range(r, X.rows) if not a[i][c].is_zero), None)
        if pivot is None:
            continue
        if pivot != r:
            a[r], a[pivot] = a[pivot], a[r]
            swaps += 1
        inv = alg_arith(1, a[r][c], 'div')
        a[r] = [alg_arith(e, inv, 'mul') for e in a[r]]
        for i in range(X.rows):
            if i != r and not a[i][c].is_zero:
                factor = a[i][c]
                a[i] = [alg_arith(e, alg_arith(factor, p, 'mul'), 'sub') for e, p in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == X.rows:
            break
    return a, pivots, swaps


def mat_det(X:ExactMatrix) -> RealAlgebraic:
    if not X.is_square:
        raise ValueError(f"det of non-square matrix {X.shape}")
    n = X.rows
    a = X.to_rows()
    det = RealAlgebraic.rational(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if not a[i][c].is_zero), None)
        if pivot is None:
            return RealAlgebraic.rational(0)
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            det = -det
        det = alg_arith(det, a[c][c], 'mul')
        for i in range(c + 1, n):
            if not a[i][c].is_zero:
                factor = alg_arith(a[i][c], a[c][c], 'div')
                a[i] = [alg_arith(e, alg_arith(factor, p, 'mul'), 'sub') for e, p in zip(a[i], a[c])]
    return det


def mat_inverse(X:ExactMatrix) -> ExactMatrix:
    if not X.is_square:
        raise ValueError(f"inverse of non-square matrix {X.shape}")
    n = X.rows
    augmented = ExactMatrix.from_rows([list(X.row(i)) + [1 if i == j else 0 for j in range(n)] for i in range(n)])
    reduced, pivots, _ = _row_reduce(augmented)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError(f"matrix is singular: {X!r}")
    return ExactMatrix.from_rows([row[n:] for row in reduced])


def mat_rank(X:ExactMatrix) -> int:
    return len(_row_reduce(X)[1])


def null_space_basis(X:ExactMatrix) -> List[Vector]:
    reduced, pivots, _ = _row_reduce(X)
    free = [c for c in range(X.cols) if c not in pivots]
    basis:List[Vector] = []
    for f in free:
        v = [RealAlgebraic.rational(0)] * X.cols
        v[f] = RealAlgebraic.rational(1)
        for r, p in enumerate(pivots):
            v[p] = -reduced[r][f]
        basis.append(tuple(v))
    return basis


def gram_schmidt(vectors:Sequence[Sequence[Any]]) -> List[Vector]:
    """
    Orthogonalize without square roots first (the span stays in the field of the input), normalize last with
    alg_sqrt.
    """
    ortho:List[Tuple[Vector, RealAlgebraic]] = []
    for raw in vectors:
        v = tuple(RealAlgebraic.coerce(e) for e in raw)
        for u, uu in ortho:
            c = alg_arith(_dot(v, u), uu, 'div')
            if not c.is_zero:
                v = tuple(alg_arith(a, alg_arith(c, b, 'mul'), 'sub') for a, b in zip(v, u))
        vv = _dot(v, v)
        if vv.is_zero:
            raise DependentVectorsError(f"gram_schmidt: vector {len(ortho) + 1} depends on the previous ones")
        ortho.append((v, vv))
    out:List[Vector] = []
    for v, vv in ortho:
        inv_norm = alg_arith(1, alg_sqrt(vv), 'div')
        out.append(tuple(alg_arith(a, inv_norm, 'mul') for a in v))
    return out


def frobenius_bound(X:ExactMatrix, width:Fraction=Fraction(1, 2**32)) -> Fraction:
    """Rational upper bound on sqrt(Σ x_ij²) ≥ ‖X‖₂."""
    total = Fraction(0)
    for e in X.entries:
        lo, hi = rational_bounds(e, width)
        total += max(lo * lo, hi * hi)
    return sqrt_upper(total)


def rationalize(X:ExactMatrix, bits:int) -> Tuple[List[List[Fraction]], Fraction]:
    """
    Round every entry to the nearest multiple of 2^-bits; returns the rational matrix and a bound on the
    largest entrywise error (0 when every entry already is such a dyadic).
    """
    scale = 2**bits
    out:List[List[Fraction]] = []
    worst = Fraction(0)
    for i in range(X.rows):
        row:List[Fraction] = []
        for e in X.row(i):
            if e.is_rational:
                q = e.as_fraction()
                approx = Fraction(round(q * scale), scale)
                err = abs(approx - q)
            else:
                lo, hi = rational_bounds(e, Fraction(1, scale * 4))
                approx = Fraction(round((lo + hi) / 2 * scale), scale)
                err = max(abs(approx - lo), abs(hi - approx))
            row.append(approx)
            worst = max(worst, err)
        out.append(row)
    return out, worst
