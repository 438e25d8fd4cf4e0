#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
"""
Grid planning: the error constant P, the space step h = 2^-N, the CFL time step τ = T/L and the dyadic precision
that keeps arithmetic rounding inside its half of the 1/a budget.

Every rational that stands in for an algebraic or irrational quantity is rounded in the direction that can only
make the final inequality harder to satisfy.
"""
import functools
import logging
import math
from fractions import Fraction
from typing import Any, Dict, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from backend.algebra import (RealAlgebraic, alg_arith, alg_compare, alg_sign, pow_upper, rational_bounds,
                             rational_upper, sqrt_upper)
from backend.errors import BudgetExceededError
from backend.linalg import PencilDecomposition, frobenius_bound, mat_inverse
from backend.problem import (DomainH, HyperbolicProblem, PolyData, a_spectrum, axis_pencils, boundary_maps,
                             poly_partial, time_derivative_data)
from backend.settings import SETTINGS


log = logging.getLogger(__name__)


def _frac(value:Any) -> Fraction:
    return Fraction(value)


class GridPlan(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    N: int
    h: Fraction
    tau: Fraction
    L: int
    T: Fraction
    P_bound: Fraction
    budget_disc: Fraction
    budget_round: Fraction
    dyadic_precision_bits: int
    kappa: Fraction
    eps_mat: Fraction
    eps_op: Fraction
    growth: Fraction
    solution_bound: Fraction
    source_perturbation: Fraction
    guaranteed: bool = True
    diagnostics: Dict[str, Optional[Fraction]] = {}

    @property
    def courant(self) -> Fraction:
        """τ/h."""
        return self.tau / self.h

    @property
    def cells(self) -> int:
        return 2**self.N

    def to_document(self) -> Dict[str, Any]:
        doc:Dict[str, Any] = {}
        for name, value in self:
            if isinstance(value, Fraction):
                doc[name] = str(value)
            elif isinstance(value, dict):
                doc[name] = {k: (None if v is None else str(v)) for k, v in value.items()}
            else:
                doc[name] = value
        return doc

    @classmethod
    def from_document(cls, doc:Dict[str, Any]) -> 'GridPlan':
        fields:Dict[str, Any] = {}
        for name, info in cls.model_fields.items():
            if name not in doc:
                continue
            value = doc[name]
            if info.annotation is Fraction:
                value = _frac(value)
            elif name == 'diagnostics':
                value = {k: (None if v is None else _frac(v)) for k, v in value.items()}
            fields[name] = value
        return cls(**fields)


class ErrorBudget(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    c_int_bound: Fraction
    c_diff_bound: Fraction
    interpolation_term: Fraction
    scheme_term: Fraction
    rounding_term: Fraction

    @property
    def total(self) -> Fraction:
        return self.interpolation_term + self.scheme_term + self.rounding_term

    def to_document(self) -> Dict[str, str]:
        return {name: str(value) for name, value in self} | {"total": str(self.total)}


# -- P -----------------------------------------------------------------------------------------------

def poly_sup_bound(d:PolyData, T:Optional[Fraction]=None) -> Fraction:
    """
    max over components of Σ|coefficient|: a sup bound on [0,1]^m. For (t, x) data the t-powers are bounded by
    max(1, T)^degree on [0, T].
    """
    t_scale = max(Fraction(1), Fraction(T)) if (d.time_dependent and T is not None) else Fraction(1)
    best = Fraction(0)
    for comp in d.components:
        total = Fraction(0)
        for c, exps in comp:
            total += abs(c) * (t_scale ** exps[0] if d.time_dependent else 1)
        best = max(best, total)
    return best


def _positive_lower(x:RealAlgebraic) -> Fraction:
    width = Fraction(1, 2**32)
    while True:
        lo, _ = rational_bounds(x, width)
        if lo > 0:
            return lo
        width /= 2**16


def lambda_ratio_upper(p:HyperbolicProblem) -> Fraction:
    spec = a_spectrum(p)
    return rational_upper(spec.lambda_max) / _positive_lower(spec.lambda_min)


def kappa_bound(p:HyperbolicProblem) -> Fraction:
    """Rational upper bound on sqrt(λ_max(A)/λ_min(A)), the A-norm / L2-norm equivalence constant."""
    return sqrt_upper(lambda_ratio_upper(p))


def _derivative_bound(p:HyperbolicProblem, T:Optional[Fraction]) -> Fraction:
    best = Fraction(0)
    for i in range(p.m):
        for j in range(i, p.m):
            best = max(best, poly_sup_bound(poly_partial(poly_partial(p.phi, i), j)))
    if p.has_source:
        assert p.f is not None
        axes:Sequence[Any] = ['t', *range(p.m)]
        best = max(best, poly_sup_bound(p.f, T))
        for a in axes:
            first = poly_partial(p.f, a)
            best = max(best, poly_sup_bound(first, T))
            for b in axes:
                best = max(best, poly_sup_bound(poly_partial(first, b), T))
    return best


def _matrix_bound(p:HyperbolicProblem) -> Fraction:
    a_inv = mat_inverse(p.A)
    speeds = [a_inv @ b for b in p.B]
    candidates = [frobenius_bound(p.A)] + [frobenius_bound(b) for b in p.B] + [frobenius_bound(g @ g) for g in speeds]
    for i in range(p.m):
        for j in range(i + 1, p.m):
            candidates.append(frobenius_bound((speeds[i] @ speeds[j]) - (speeds[j] @ speeds[i])))
    return max(candidates)


def data_bounds(p:HyperbolicProblem, T:Optional[Fraction]=None) -> Dict[str, Fraction]:
    """The three factors of P, each a rational upper bound."""
    return {
        "lambda_ratio": lambda_ratio_upper(p),
        "derivatives": _derivative_bound(p, T if T is not None else p.T_override),
        "matrix_norms": _matrix_bound(p),
    }


def compute_P(p:HyperbolicProblem, T:Optional[Fraction]=None) -> Fraction:
    bounds = data_bounds(p, T)
    P = bounds["lambda_ratio"] * bounds["derivatives"] * bounds["matrix_norms"]
    if p.M is not None and all(v <= p.M for v in bounds.values()):
        P = min(P, p.M**3)
    log.debug(f"compute_P -> {bounds=}, {P=}")
    return P


# -- steps ---------------------------------------------------------------------------------------------

def choose_h(P_bound:Fraction, a:int) -> Tuple[int, Fraction]:
    if a < 1:
        raise ValueError(f"precision a must be ≥ 1, got {a}")
    threshold = 1 / (4 * a * max(Fraction(P_bound), Fraction(1)))
    N = 2
    while Fraction(1, 2**N) > threshold:
        N += 1
    return N, Fraction(1, 2**N)


def max_speed(pencil:PencilDecomposition) -> RealAlgebraic:
    lo, hi = abs(pencil.mu_min), abs(pencil.mu_max)
    return hi if alg_compare(hi, lo) >= 0 else lo


def cfl_bound(h:Fraction, pencils:Sequence[PencilDecomposition]) -> Optional[Fraction]:
    """
    A rational lower bound on min(h·(Σ 1/μ̄_i)⁻¹, h/Σ μ̄_i) over the axes with μ̄_i > 0, or None when nothing moves.
    """
    speeds = [max_speed(pc) for pc in pencils]
    moving = [s for s in speeds if alg_sign(s) > 0]
    if not moving:
        return None
    inverse_sum = sum((1 / _positive_lower(s) for s in moving), Fraction(0))
    speed_sum = sum((rational_upper(s) for s in moving), Fraction(0))
    return min(h / inverse_sum, h / speed_sum)


def cfl_holds(tau:Fraction, h:Fraction, pencils:Sequence[PencilDecomposition]) -> bool:
    """Exact check of τ·Σ 1/μ̄_i ≤ h and τ·Σ μ̄_i ≤ h."""
    moving = [s for s in (max_speed(pc) for pc in pencils) if alg_sign(s) > 0]
    inverse_sum, speed_sum = RealAlgebraic.rational(0), RealAlgebraic.rational(0)
    for s in moving:
        inverse_sum = alg_arith(inverse_sum, alg_arith(1, s, 'div'), 'add')
        speed_sum = alg_arith(speed_sum, s, 'add')
    return alg_compare(alg_arith(tau, inverse_sum, 'mul'), h) <= 0 and alg_compare(alg_arith(tau, speed_sum, 'mul'), h) <= 0


def choose_tau(h:Fraction, pencils:Sequence[PencilDecomposition], T:Fraction) -> Tuple[Fraction, int]:
    T = Fraction(T)
    if T == 0:
        return Fraction(0), 0
    bound = cfl_bound(Fraction(h), pencils)
    if bound is None:
        return T, 1
    L = math.ceil(T / bound)
    return T / L, L


# -- precision -----------------------------------------------------------------------------------------

class SchemeNorms(BaseModel):
    """Frobenius bounds of the per-axis scheme matrices (exact algebraic versions)."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    fro_T: Tuple[Fraction, ...]
    fro_T_inv: Tuple[Fraction, ...]
    fro_G: Tuple[Fraction, ...]
    fro_E: Tuple[Fraction, ...]
    fro_A_inv: Fraction


@functools.lru_cache(maxsize=64)
def scheme_norms(p:HyperbolicProblem) -> SchemeNorms:
    pencils = axis_pencils(p)
    a_inv = mat_inverse(p.A)
    fro_E = []
    for i, pencil in enumerate(pencils):
        if p.boundary is not None:
            E_left, E_right = boundary_maps(pencil, p.boundary[i].left, p.boundary[i].right)
            fro_E.append(frobenius_bound(E_left) + frobenius_bound(E_right))
        else:
            fro_E.append(Fraction(0))
    return SchemeNorms(
        fro_T=tuple(frobenius_bound(pc.T) for pc in pencils),
        fro_T_inv=tuple(frobenius_bound(pc.T_inv) for pc in pencils),
        fro_G=tuple(frobenius_bound(a_inv @ b) for b in p.B),
        fro_E=tuple(fro_E),
        fro_A_inv=frobenius_bound(a_inv),
    )


def operator_perturbation(norms:SchemeNorms, n:int, eps:Fraction, courant:Fraction, boundary:bool) -> Fraction:
    """
    Bound on ‖S̃ − S‖₂ for one step when every entry of T, T⁻¹, A⁻¹B (and the face maps) is off by at most eps.
    """
    ne = n * eps
    total = Fraction(0)
    for fro_T, fro_T_inv, fro_G, fro_E in zip(norms.fro_T, norms.fro_T_inv, norms.fro_G, norms.fro_E):
        d_flux = ne * fro_T_inv + (fro_T + ne) * ne
        u_norm = 2 * fro_T * fro_T_inv + fro_E
        d_u = 2 * d_flux + (2 * ne if boundary else 0)
        total += 2 * (ne * (u_norm + d_u) + fro_G * d_u)
    return courant * total


def solution_bound(p:HyperbolicProblem, T:Fraction, kappa:Fraction) -> Fraction:
    """Bound on the grid L2 norm of every layer of the unperturbed scheme."""
    root_n = sqrt_upper(Fraction(p.n))
    bound = root_n * poly_sup_bound(p.phi)
    if p.has_source:
        assert p.f is not None
        bound += T * root_n * scheme_norms(p).fro_A_inv * poly_sup_bound(p.f, T)
    return kappa * bound


def source_perturbation(p:HyperbolicProblem, tau:Fraction, eps:Fraction, T:Fraction) -> Fraction:
    if not p.has_source:
        return Fraction(0)
    assert p.f is not None
    return tau * p.n * eps * sqrt_upper(Fraction(p.n)) * poly_sup_bound(p.f, T)


def rounding_bound(kappa:Fraction, growth:Fraction, L:int, eps_op:Fraction, u_bound:Fraction, src:Fraction, n:int, eps:Fraction) -> Fraction:
    """κ·growth·(L·(ε_op·U + source + √n·ε/2) + √n·ε/2): the planned rounding_term."""
    per_entry = sqrt_upper(Fraction(n)) * eps / 2
    return kappa * growth * (L * (eps_op * u_bound + src + per_entry) + per_entry)


def choose_precision(p:HyperbolicProblem, kappa:Fraction, tau:Fraction, h:Fraction, L:int, T:Fraction, budget_round:Fraction) -> Dict[str, Any]:
    """Smallest bit count ≥ solver.min_precision_bits whose planned rounding bound is ≤ budget_round/2."""
    norms = scheme_norms(p)
    u_bound = solution_bound(p, T, kappa)
    courant = tau / h
    bits = SETTINGS.solver['min_precision_bits']
    while bits <= SETTINGS.solver['max_precision_bits']:
        eps = Fraction(1, 2**bits)
        eps_op = operator_perturbation(norms, p.n, eps, courant, p.boundary is not None)
        growth = pow_upper(1 + kappa * eps_op, L)
        src = source_perturbation(p, tau, eps, T)
        planned = rounding_bound(kappa, growth, L, eps_op, u_bound, src, p.n, eps)
        if planned <= budget_round / 2:
            return {"bits": bits, "eps": eps, "eps_op": eps_op, "growth": growth, "solution_bound": u_bound,
                    "source_perturbation": src, "planned": planned}
        bits += 1
    raise BudgetExceededError(f"no precision up to {SETTINGS.solver['max_precision_bits']} bits fits the rounding budget {budget_round}")


# -- plans ---------------------------------------------------------------------------------------------

def _diagnostics(p:HyperbolicProblem) -> Dict[str, Optional[Fraction]]:
    derivatives = time_derivative_data(p)
    if derivatives is None:
        return {"u_t_sup": None, "u_tt_sup": None}
    u_t, u_tt = derivatives
    return {"u_t_sup": poly_sup_bound(u_t), "u_tt_sup": poly_sup_bound(u_tt)}


def _assemble(p:HyperbolicProblem, dom:DomainH, N:int, P:Fraction) -> Tuple[GridPlan, ErrorBudget]:
    h = Fraction(1, 2**N)
    T = dom.T
    tau, L = choose_tau(h, axis_pencils(p), T)
    budget_disc = budget_round = Fraction(1, 2 * p.precision_a)
    kappa = kappa_bound(p)
    precision = choose_precision(p, kappa, tau, h, L, T, budget_round)
    plan_ = GridPlan(
        N=N, h=h, tau=tau, L=L, T=T, P_bound=P,
        budget_disc=budget_disc, budget_round=budget_round,
        dyadic_precision_bits=precision["bits"],
        kappa=kappa,
        eps_mat=precision["eps"],
        eps_op=precision["eps_op"],
        growth=precision["growth"],
        solution_bound=precision["solution_bound"],
        source_perturbation=precision["source_perturbation"],
        guaranteed=2 * P * h <= budget_disc,
        diagnostics=_diagnostics(p),
    )
    budget = ErrorBudget(
        c_int_bound=P,
        c_diff_bound=P,
        interpolation_term=P * h,
        scheme_term=P * h,
        rounding_term=precision["planned"],
    )
    log.info(f"plan: {N=}, {h=}, {tau=}, {L=}, bits={plan_.dyadic_precision_bits}, {P=}")
    return plan_, budget


def plan(p:HyperbolicProblem, dom:DomainH) -> Tuple[GridPlan, ErrorBudget]:
    P = compute_P(p, dom.T)
    N, _ = choose_h(P, p.precision_a)
    return _assemble(p, dom, N, P)


def plan_for_level(p:HyperbolicProblem, dom:DomainH, N:int) -> Tuple[GridPlan, ErrorBudget]:
    """The plan with a caller-fixed N; `guaranteed` is False when 2·P·h exceeds the discretization budget."""
    if N < 1:
        raise ValueError(f"N must be ≥ 1, got {N}")
    return _assemble(p, dom, N, compute_P(p, dom.T))
