#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
import functools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy as sp

from backend.algebra import (FieldVector, NumberField, RatPoly, RealAlgebraic, alg_arith, alg_sign, alg_sqrt, field_null_space,
                             isolate_real_roots)
from backend.errors import DependentVectorsError, NotPositiveDefiniteError, NotSymmetricError
from .matrix import ExactMatrix, Vector, _dot, gram_schmidt, mat_arith, mat_inverse, mat_rank, mat_vec, null_space_basis


log = logging.getLogger(__name__)

RationalRows = List[List[Fraction]]


def mat_trace(X:ExactMatrix) -> RealAlgebraic:
    acc = RealAlgebraic.rational(0)
    for i in range(X.rows):
        acc = alg_arith(acc, X[i, i], 'add')
    return acc


def charpoly_newton(A:ExactMatrix) -> Tuple[RealAlgebraic, ...]:
    """
    Coefficients (low degree first) of ch_A = λⁿ − p₁λⁿ⁻¹ − … − pₙ, with the p_k recovered from the power sums
    s_k = tr(A^k) through Newton's identities k·p_k = s_k − Σ_{j<k} p_j s_{k−j}.
    """
    if not A.is_square:
        raise ValueError(f"charpoly of non-square matrix {A.shape}")
    n = A.rows
    sums:List[RealAlgebraic] = []
    power = A
    for k in range(1, n + 1):
        if k > 1:
            power = mat_arith(power, A, 'mul')
        sums.append(mat_trace(power))
    p:List[RealAlgebraic] = []
    for k in range(1, n + 1):
        acc = sums[k - 1]
        for j in range(1, k):
            acc = alg_arith(acc, alg_arith(p[j - 1], sums[k - j - 1], 'mul'), 'sub')
        p.append(alg_arith(acc, k, 'div'))
    return tuple([alg_arith(0, p[n - 1 - i], 'sub') for i in range(n)] + [RealAlgebraic.rational(1)])


def _rational_charpoly(coefficients:Sequence[RealAlgebraic]) -> Optional[RatPoly]:
    if all(c.is_rational for c in coefficients):
        return RatPoly(c.as_fraction() for c in coefficients)
    return None


def _eliminated_charpoly(coefficients:Sequence[RealAlgebraic]) -> RatPoly:
    """A rational polynomial vanishing at every root of Σ c_k λ^k: each irrational c_k is eliminated by a resultant against its minimal polynomial."""
    lam = sp.Symbol('lam')
    symbols = sp.symbols(f'y0:{len(coefficients)}')
    expr = sp.Integer(0)
    for k, c in enumerate(coefficients):
        coeff = sp.Rational(c.as_fraction().numerator, c.as_fraction().denominator) if c.is_rational else symbols[k]
        expr += coeff * lam**k
    for k, c in enumerate(coefficients):
        if not c.is_rational:
            expr = sp.resultant(sp.expand(expr), c.minpoly.as_expr(symbols[k]), symbols[k])
    return RatPoly.from_sympy(sp.Poly(expr, lam, domain=sp.QQ))


def eigenvalues_with_multiplicity(X:ExactMatrix) -> List[Tuple[RealAlgebraic, int]]:
    """
    Distinct real eigenvalues (increasing) of a diagonalizable X with real spectrum, with multiplicities.
    Rational X: roots of the Newton characteristic polynomial, multiplicities from the gcd filtration.
    Algebraic X: candidates from the eliminated polynomial, kept when X − λI is singular; multiplicity = nullity.
    """
    coefficients = charpoly_newton(X)
    if (ch := _rational_charpoly(coefficients)) is not None:
        iso = isolate_real_roots(ch)
        return list(zip(iso.roots, iso.multiplicities))
    out:List[Tuple[RealAlgebraic, int]] = []
    for candidate in isolate_real_roots(_eliminated_charpoly(coefficients)).roots:
        nullity = X.cols - mat_rank(mat_arith(X, ExactMatrix.identity(X.rows).scale(candidate), 'sub'))
        if nullity:
            out.append((candidate, nullity))
    log.debug(f"eigenvalues_with_multiplicity(algebraic entries, {len(out)=})")
    return out


# -- eigenvectors over Q[x]/(p) ------------------------------------------------------------------------

@dataclass(frozen=True)
class EigenBlock:
    """
    Eigenvectors for all roots of one irreducible factor p of the characteristic polynomial, as vectors over
    Q[x]/(p): `basis` is orthogonal in the metric M of the decomposition and `norms` holds uᵀ M u. Putting x = θ for
    any root θ in `roots` gives an orthogonal basis of the eigenspace of θ.
    """
    field: NumberField
    roots: Tuple[RealAlgebraic, ...]
    basis: Tuple[FieldVector, ...]
    norms: Tuple[RatPoly, ...]

    @functools.cached_property
    def norm_inverses(self) -> Tuple[RatPoly, ...]:
        return tuple(self.field.inv(n) for n in self.norms)

    def columns(self, root:RealAlgebraic) -> List[Vector]:
        """The basis at x = root, each vector scaled to unit M-norm."""
        return [tuple(self.field.normalized(e, n_inv, root) for e in u) for u, n_inv in zip(self.basis, self.norm_inverses)]

    def dual_rows(self, root:RealAlgebraic, metric:RationalRows) -> List[Vector]:
        """(M t)ᵀ for every column t of `columns(root)`."""
        f = self.field
        return [tuple(f.normalized(f.combine(row, u), n_inv, root) for row in metric) for u, n_inv in zip(self.basis, self.norm_inverses)]


def _rational_rows(X:ExactMatrix) -> RationalRows:
    return [[e.as_fraction() for e in X.row(i)] for i in range(X.rows)]


def _identity_rows(n:int) -> RationalRows:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def eigenblocks(X:RationalRows, metric:RationalRows, ch:RatPoly) -> Tuple[List[RealAlgebraic], Dict[RatPoly, EigenBlock]]:
    """
    Solve (X − x·M)u = 0 once per irreducible factor of ch and M-orthogonalize there; returns the distinct roots of
    ch (increasing) and the block owning each minimal polynomial.
    """
    iso = isolate_real_roots(ch)
    grouped:Dict[RatPoly, List[Tuple[RealAlgebraic, int]]] = {}
    for root, multiplicity in zip(iso.roots, iso.multiplicities):
        grouped.setdefault(root.minpoly, []).append((root, multiplicity))
    n = len(X)
    blocks:Dict[RatPoly, EigenBlock] = {}
    for factor, members in grouped.items():
        f = NumberField(factor)
        basis = field_null_space(f, [[f.linear(X[i][j], -metric[i][j]) for j in range(n)] for i in range(n)])
        if {m for _, m in members} != {len(basis)}:
            raise ArithmeticError(f"eigenspaces for the roots of {factor} have dimension {len(basis)}, expected {[m for _, m in members]}")
        ortho:List[FieldVector] = []
        norms:List[RatPoly] = []
        for v in basis:
            for u, uu in zip(ortho, norms):
                c = f.mul(f.dot(v, u, metric), f.inv(uu))
                if not c.is_zero:
                    v = tuple(a - f.mul(c, b) for a, b in zip(v, u))
            vv = f.dot(v, v, metric)
            if vv.is_zero:
                raise DependentVectorsError(f"eigenvector {len(ortho) + 1} for the roots of {factor} depends on the previous ones")
            ortho.append(v)
            norms.append(vv)
        blocks[factor] = EigenBlock(f, tuple(r for r, _ in members), tuple(ortho), tuple(norms))
    log.debug(f"eigenblocks({n=}, factors={[b.field.degree for b in blocks.values()]})")
    return list(iso.roots), blocks


_X, _Y = sp.symbols('x y')


def _pair_ideal(p:NumberField, q:NumberField) -> sp.GroebnerBasis:
    """Ideal of the pairs (α, β) with α a root of p, β a root of q and α ≠ β."""
    first = p.modulus.as_expr(_X)
    if p == q:
        second = sp.cancel((p.modulus.as_expr(_Y) - first) / (_Y - _X))
    else:
        second = q.modulus.as_expr(_Y)
    return sp.groebner([first, second], _Y, _X, order='lex')


def eigenblocks_consistent(X:RationalRows, metric:RationalRows, blocks:Sequence[EigenBlock]) -> bool:
    """
    Exact check that the blocks diagonalize the pencil (X, M): every basis vector solves (X − x·M)u = 0 in its field,
    vectors of one block are M-orthogonal with the recorded norms, the dimensions add up to n, and eigenvectors of
    distinct roots are M-orthogonal. The last holds when u(x)ᵀ M v(y) reduces to zero modulo the ideal of pairs of
    distinct roots; both ideals used are radical, so this is also necessary.
    """
    n = len(X)
    if sum(len(b.roots) * len(b.basis) for b in blocks) != n:
        return False
    for b in blocks:
        f = b.field
        x = f.linear(Fraction(0), Fraction(1))
        for u in b.basis:
            residual = [f.reduce(f.combine(X[i], u) - f.mul(x, f.combine(metric[i], u))) for i in range(n)]
            if any(not r.is_zero for r in residual):
                return False
        for k, u in enumerate(b.basis):
            for l, v in enumerate(b.basis):
                expected = b.norms[k] if k == l else RatPoly()
                if f.dot(u, v, metric) != expected or (k == l and expected.is_zero):
                    return False
    for i, b in enumerate(blocks):
        for c in blocks[i:]:
            ideal = _pair_ideal(b.field, c.field)
            for u in b.basis:
                for v in c.basis:
                    h = sum((u[r].as_expr(_X) * c.field.combine(metric[r], v).as_expr(_Y) for r in range(n)), sp.Integer(0))
                    h = sp.expand(h)
                    if h != 0 and ideal.reduce(h)[1] != 0:
                        return False
    return True


# -- symmetric matrices --------------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: Tuple[RealAlgebraic, ...]
    eigenvectors: ExactMatrix
    blocks: Tuple[EigenBlock, ...] = ()

    @property
    def lambda_min(self) -> RealAlgebraic:
        return self.eigenvalues[0]

    @property
    def lambda_max(self) -> RealAlgebraic:
        return self.eigenvalues[-1]


def spectral_decompose(A:ExactMatrix) -> SpectralDecomposition:
    """
    A = V diag(λ) Vᵀ with V orthogonal and λ ascending. A rational matrix gets its eigenvectors from `eigenblocks`,
    so the elimination and Gram-Schmidt run on polynomials modulo each factor of the characteristic polynomial and
    algebraic numbers only appear in the final normalization. Algebraic entries fall back to elimination over
    RealAlgebraic.
    """
    if not A.is_symmetric():
        raise NotSymmetricError(f"spectral_decompose needs a symmetric matrix: {A!r}")
    n = A.rows
    eigenvalues:List[RealAlgebraic] = []
    vectors:List[Vector] = []
    if A.is_rational:
        roots, blocks = eigenblocks(_rational_rows(A), _identity_rows(n), _rational_charpoly(charpoly_newton(A))) #type: ignore
        for lam in roots:
            block = blocks[lam.minpoly]
            eigenvalues.extend([lam] * len(block.basis))
            vectors.extend(block.columns(lam))
        log.debug(f"spectral_decompose({n=}, distinct={len(roots)}, factors={len(blocks)})")
        return SpectralDecomposition(tuple(eigenvalues), ExactMatrix.from_columns(vectors, rows=n), tuple(blocks.values()))
    for lam, multiplicity in eigenvalues_with_multiplicity(A):
        basis = null_space_basis(mat_arith(A, ExactMatrix.identity(n).scale(lam), 'sub'))
        if len(basis) != multiplicity:
            raise ArithmeticError(f"eigenspace of {lam!r} has dimension {len(basis)}, expected {multiplicity}")
        eigenvalues.extend([lam] * multiplicity)
        vectors.extend(gram_schmidt(basis))
    log.debug(f"spectral_decompose({n=}, algebraic entries, distinct={len(set(eigenvalues))})")
    return SpectralDecomposition(tuple(eigenvalues), ExactMatrix.from_columns(vectors, rows=n))


# -- pencils -----------------------------------------------------------------------------------------

def _a_gram_schmidt(vectors:Sequence[Vector], A:ExactMatrix) -> List[Vector]:
    """Orthonormalize in the inner product (u, v)_A = uᵀ A v."""
    ortho:List[Tuple[Vector, Vector, RealAlgebraic]] = []
    for v in vectors:
        for u, Au, uAu in ortho:
            c = alg_arith(_dot(v, Au), uAu, 'div')
            if not c.is_zero:
                v = tuple(alg_arith(a, alg_arith(c, b, 'mul'), 'sub') for a, b in zip(v, u))
        Av = mat_vec(A, v)
        ortho.append((v, Av, _dot(v, Av)))
    out:List[Vector] = []
    for v, _, vAv in ortho:
        inv_norm = alg_arith(1, alg_sqrt(vAv), 'div')
        out.append(tuple(alg_arith(a, inv_norm, 'mul') for a in v))
    return out


class PencilDecomposition:
    """
    Simultaneous congruence of the pencil μA − B: Tᵀ A T = I, Tᵀ B T = diag(μ), μ ascending.

    The μ are the eigenvalues of A⁻¹B and the columns of T the matching generalized eigenvectors (B − μA)t = 0,
    A-orthonormalized per eigenvalue. With A = L Λ Lᵀ, w = Λ^(1/2) Lᵀ T is orthogonal and diagonalizes
    Λ^(-1/2) Lᵀ B L Λ^(-1/2); it is only formed when asked for.
    """
    def __init__(self, a_spec:SpectralDecomposition, mu:Tuple[RealAlgebraic, ...], T:ExactMatrix, T_inv:ExactMatrix,
                 blocks:Tuple[EigenBlock, ...]=()):
        self.a_spec = a_spec
        self.mu = mu
        self.T = T
        self.T_inv = T_inv
        self.blocks = blocks

    @property
    def n(self) -> int:
        return len(self.mu)

    @property
    def L(self) -> ExactMatrix: #pylint: disable=invalid-name
        return self.a_spec.eigenvectors

    @functools.cached_property
    def D(self) -> ExactMatrix: #pylint: disable=invalid-name
        return ExactMatrix.diag([alg_arith(1, alg_sqrt(lam), 'div') for lam in self.a_spec.eigenvalues])

    @functools.cached_property
    def w(self) -> ExactMatrix:
        root_lambda = ExactMatrix.diag([alg_sqrt(lam) for lam in self.a_spec.eigenvalues])
        return root_lambda @ self.L.T @ self.T

    @property
    def K(self) -> ExactMatrix: #pylint: disable=invalid-name
        return self.w

    @property
    def mu_min(self) -> RealAlgebraic:
        return self.mu[0]

    @property
    def mu_max(self) -> RealAlgebraic:
        return self.mu[-1]

    @property
    def signs(self) -> Tuple[int, ...]:
        return tuple(alg_sign(m) for m in self.mu)


def pencil_decompose(A:ExactMatrix, B:ExactMatrix) -> PencilDecomposition:
    if not A.is_symmetric():
        raise NotSymmetricError(f"pencil_decompose needs symmetric A: {A!r}")
    if not B.is_symmetric():
        raise NotSymmetricError(f"pencil_decompose needs symmetric B: {B!r}")
    if A.shape != B.shape:
        raise ValueError(f"pencil shapes differ: {A.shape} vs {B.shape}")
    a_spec = spectral_decompose(A)
    if alg_sign(a_spec.lambda_min) <= 0:
        raise NotPositiveDefiniteError(f"A is not positive definite: smallest eigenvalue {a_spec.lambda_min}")
    n = A.rows
    mu:List[RealAlgebraic] = []
    columns:List[Vector] = []
    if A.is_rational and B.is_rational:
        metric = _rational_rows(A)
        ch = _rational_charpoly(charpoly_newton(mat_inverse(A) @ B))
        roots, blocks = eigenblocks(_rational_rows(B), metric, ch) #type: ignore
        dual:List[Vector] = []
        for m in roots:
            block = blocks[m.minpoly]
            mu.extend([m] * len(block.basis))
            columns.extend(block.columns(m))
            dual.extend(block.dual_rows(m, metric))
        log.debug(f"pencil_decompose({n=}, mu={[str(m) for m in mu]})")
        return PencilDecomposition(a_spec, tuple(mu), ExactMatrix.from_columns(columns, rows=n), ExactMatrix.from_rows(dual, cols=n),
                                   tuple(blocks.values()))
    # the pencil eigenvalues are the eigenvalues of A⁻¹B
    for m, multiplicity in eigenvalues_with_multiplicity(mat_inverse(A) @ B):
        basis = null_space_basis(mat_arith(B, A.scale(m), 'sub'))
        if len(basis) != multiplicity:
            raise ArithmeticError(f"pencil eigenspace of {m!r} has dimension {len(basis)}, expected {multiplicity}")
        mu.extend([m] * multiplicity)
        columns.extend(_a_gram_schmidt(basis, A))
    T = ExactMatrix.from_columns(columns, rows=n)
    T_inv = T.T @ A
    log.debug(f"pencil_decompose({n=}, algebraic entries, mu={[str(m) for m in mu]})")
    return PencilDecomposition(a_spec, tuple(mu), T, T_inv)
