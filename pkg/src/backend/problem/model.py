#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
import functools
import logging
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Literal, Optional, Sequence, Tuple, Union

from backend.algebra import RealAlgebraic
from backend.linalg import ExactMatrix, PencilDecomposition, SpectralDecomposition, mat_inverse, pencil_decompose, spectral_decompose


log = logging.getLogger(__name__)

Term = Tuple[Fraction, Tuple[int, ...]]
Component = Tuple[Term, ...]


@dataclass(frozen=True)
class PolyData:
    """
    n polynomials with rational coefficients in (x_1, …, x_m), or in (t, x_1, …, x_m) when `time_dependent`.
    Terms are merged, zero terms dropped, and each component kept sorted by exponent vector.
    """
    m: int
    time_dependent: bool
    components: Tuple[Component, ...]

    @classmethod
    def from_terms(cls, m:int, components:Iterable[Iterable[Tuple[Any, Sequence[int]]]], time_dependent:bool=False) -> 'PolyData':
        nvars = m + (1 if time_dependent else 0)
        merged:List[Component] = []
        for k, terms in enumerate(components):
            acc:Dict[Tuple[int, ...], Fraction] = defaultdict(Fraction)
            for coef, exps in terms:
                exps = tuple(int(e) for e in exps)
                if len(exps) != nvars or any(e < 0 for e in exps):
                    raise ValueError(f"component {k}: exponent vector {exps} does not fit {nvars} variables")
                acc[exps] += Fraction(coef)
            merged.append(tuple((c, e) for e, c in sorted(acc.items()) if c != 0))
        return cls(m, time_dependent, tuple(merged))

    @classmethod
    def zero(cls, n:int, m:int, time_dependent:bool=False) -> 'PolyData':
        return cls(m, time_dependent, tuple(() for _ in range(n)))

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def nvars(self) -> int:
        return self.m + (1 if self.time_dependent else 0)

    @property
    def is_zero(self) -> bool:
        return all(not c for c in self.components)

    def scaled(self, s:Fraction) -> 'PolyData':
        return PolyData.from_terms(self.m, ([(c * s, e) for c, e in comp] for comp in self.components), self.time_dependent)

    def __add__(self, other:'PolyData') -> 'PolyData':
        if (self.m, self.time_dependent, self.n) != (other.m, other.time_dependent, other.n):
            raise ValueError("PolyData shapes differ")
        return PolyData.from_terms(self.m, (a + b for a, b in zip(self.components, other.components)), self.time_dependent)


def _horner(terms:Sequence[Tuple[Fraction, Tuple[int, ...]]], point:Sequence[Any]) -> Any:
    if not point:
        return sum((c for c, _ in terms), Fraction(0))
    by_power:Dict[int, List[Tuple[Fraction, Tuple[int, ...]]]] = defaultdict(list)
    for c, exps in terms:
        by_power[exps[0]].append((c, exps[1:]))
    acc:Any = Fraction(0)
    x, rest = point[0], point[1:]
    for e in range(max(by_power, default=0), -1, -1):
        acc = acc * x
        if e in by_power:
            acc = acc + _horner(by_power[e], rest)
    return acc


def eval_poly(d:PolyData, point:Sequence[Any]) -> List[Any]:
    """
    Exact evaluation, Horner in each variable in turn. Coordinates may be Fractions or numpy object arrays of
    Fractions (evaluated elementwise with broadcasting).
    """
    if len(point) != d.nvars:
        raise ValueError(f"arity mismatch: {d.nvars} variables, point has {len(point)} coordinates")
    return [_horner(comp, point) for comp in d.components]


def poly_partial(d:PolyData, axis:Union[int, Literal['t']]) -> PolyData:
    """∂/∂x_{axis+1} (axis counts from 0 over the space variables), or ∂/∂t."""
    if axis == 't':
        if not d.time_dependent:
            return PolyData.zero(d.n, d.m)
        var = 0
    else:
        if not 0 <= axis < d.m:
            raise ValueError(f"axis {axis} out of range for m={d.m}")
        var = axis + (1 if d.time_dependent else 0)
    components = []
    for comp in d.components:
        terms = []
        for c, exps in comp:
            if exps[var]:
                lowered = exps[:var] + (exps[var] - 1,) + exps[var + 1:]
                terms.append((c * exps[var], lowered))
        components.append(terms)
    return PolyData.from_terms(d.m, components, d.time_dependent)


@dataclass(frozen=True)
class BoundaryPair:
    left: ExactMatrix   # Φ^(1), face x_i = 0
    right: ExactMatrix  # Φ^(2), face x_i = 1


@dataclass(frozen=True)
class HyperbolicProblem:
    kind: Literal['cauchy', 'boundary']
    m: int
    n: int
    A: ExactMatrix
    B: Tuple[ExactMatrix, ...]
    phi: PolyData
    f: Optional[PolyData]
    boundary: Optional[Tuple[BoundaryPair, ...]]
    precision_a: int
    T_override: Optional[Fraction] = None
    M: Optional[Fraction] = None

    def __post_init__(self):
        if self.kind not in ('cauchy', 'boundary'):
            raise ValueError(f"unknown problem kind {self.kind!r}")
        if self.m not in (1, 2):
            raise ValueError(f"m must be 1 or 2, got {self.m}")
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if self.A.shape != (self.n, self.n):
            raise ValueError(f"A is {self.A.shape}, expected {(self.n, self.n)}")
        if len(self.B) != self.m:
            raise ValueError(f"expected {self.m} B matrices, got {len(self.B)}")
        for i, b in enumerate(self.B):
            if b.shape != (self.n, self.n):
                raise ValueError(f"B[{i}] is {b.shape}, expected {(self.n, self.n)}")
        if self.phi.n != self.n or self.phi.m != self.m or self.phi.time_dependent:
            raise ValueError("phi must have n components in the m space variables")
        if self.f is not None and (self.f.n != self.n or self.f.m != self.m or not self.f.time_dependent):
            raise ValueError("f must have n components in (t, x_1, …, x_m)")
        if self.kind == 'boundary':
            if self.boundary is None or len(self.boundary) != self.m:
                raise ValueError("boundary problems need a (left, right) boundary pair for every axis")
        if self.boundary is not None:
            for i, pair in enumerate(self.boundary):
                for face, phi_mat in (('left', pair.left), ('right', pair.right)):
                    if phi_mat.cols != self.n:
                        raise ValueError(f"boundary[{i}].{face} has {phi_mat.cols} columns, expected {self.n}")
        if self.precision_a < 1:
            raise ValueError(f"precision_a must be ≥ 1, got {self.precision_a}")
        if self.T_override is not None and self.T_override < 0:
            raise ValueError(f"T must be nonnegative, got {self.T_override}")
        if self.M is not None and self.M <= 0:
            raise ValueError(f"M must be positive, got {self.M}")

    @property
    def has_source(self) -> bool:
        return self.f is not None and not self.f.is_zero


@functools.lru_cache(maxsize=64)
def a_spectrum(p:HyperbolicProblem) -> SpectralDecomposition:
    return spectral_decompose(p.A)


@functools.lru_cache(maxsize=64)
def axis_pencils(p:HyperbolicProblem) -> Tuple[PencilDecomposition, ...]:
    """pencil_decompose(A, B_i) for every axis, computed once per problem."""
    log.debug(f"axis_pencils({p.m=}, {p.n=})")
    return tuple(pencil_decompose(p.A, b) for b in p.B)


@dataclass(frozen=True)
class DomainH:
    """
    H = {t ≥ 0, x_i − μ_max^(i) t ≥ 0, x_i − 1 − μ_min^(i) t ≤ 0} for Cauchy problems; for boundary problems the
    extrema are informational and the whole cylinder [0, T]×Q is used.
    """
    kind: Literal['cauchy', 'boundary']
    mu_min: Tuple[RealAlgebraic, ...]
    mu_max: Tuple[RealAlgebraic, ...]
    T_apex: Optional[RealAlgebraic]
    T: Fraction

    @property
    def m(self) -> int:
        return len(self.mu_min)


def poly_at_time_zero(d:PolyData) -> PolyData:
    """Restrict a (t, x) polynomial to t = 0."""
    if not d.time_dependent:
        return d
    return PolyData.from_terms(d.m, ([(c, e[1:]) for c, e in comp if e[0] == 0] for comp in d.components))


def poly_matrix_apply(X:Sequence[Sequence[Fraction]], d:PolyData) -> PolyData:
    """Componentwise X·d for a rational n×n matrix."""
    components = []
    for row in X:
        terms:List[Tuple[Fraction, Tuple[int, ...]]] = []
        for coef, comp in zip(row, d.components):
            if coef:
                terms.extend((coef * c, e) for c, e in comp)
        components.append(terms)
    return PolyData.from_terms(d.m, components, d.time_dependent)


def time_derivative_data(p:HyperbolicProblem) -> Optional[Tuple[PolyData, PolyData]]:
    """
    (u_t(0, x), u_tt(0, x)) from the equation itself: A u_t = f − Σ B_i u_{x_i}, differentiated once more in t.
    Only defined when A and every B_i are rational; returns None otherwise.
    """
    if not (p.A.is_rational and all(b.is_rational for b in p.B)):
        return None
    a_inv = [[e.as_fraction() for e in row] for row in mat_inverse(p.A).to_rows()]
    bs = [[[e.as_fraction() for e in row] for row in b.to_rows()] for b in p.B]

    def transport(u:PolyData) -> PolyData:
        acc = PolyData.zero(p.n, p.m)
        for i, b in enumerate(bs):
            acc = acc + poly_matrix_apply(b, poly_partial(u, i))
        return acc

    f0 = poly_at_time_zero(p.f) if p.f is not None else PolyData.zero(p.n, p.m)
    ft0 = poly_at_time_zero(poly_partial(p.f, 't')) if p.f is not None else PolyData.zero(p.n, p.m)
    u_t = poly_matrix_apply(a_inv, f0 + transport(p.phi).scaled(Fraction(-1)))
    u_tt = poly_matrix_apply(a_inv, ft0 + transport(u_t).scaled(Fraction(-1)))
    return u_t, u_tt
