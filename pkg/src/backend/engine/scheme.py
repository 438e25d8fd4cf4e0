#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple

from backend.errors import BudgetExceededError
from backend.linalg import ExactMatrix, PencilDecomposition, mat_inverse, rationalize
from backend.planner import GridPlan
from backend.problem import HyperbolicProblem, axis_pencils, boundary_maps


log = logging.getLogger(__name__)

RationalMatrix = List[List[Fraction]]


def branch_free_flux(v_left:Sequence[Any], v_right:Sequence[Any], s_minus:Sequence[int], s_plus:Sequence[int]) -> List[Any]:
    """W = S₋·v_right + S₊·v_left with 0/1 diagonal selectors; entries may be scalars or arrays."""
    return [sm * vr + sp * vl for vl, vr, sm, sp in zip(v_left, v_right, s_minus, s_plus)]


def branching_flux(v_left:Sequence[Any], v_right:Sequence[Any], signs:Sequence[int]) -> List[Any]:
    """Case split: a component moving left (μ < 0) is taken from the right cell, otherwise from the left cell."""
    return [vr if s < 0 else vl for vl, vr, s in zip(v_left, v_right, signs)]


def selectors(signs:Sequence[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """(S₋, S₊) diagonals; zero eigenvalues take the S₊ branch."""
    s_minus = tuple(1 if s < 0 else 0 for s in signs)
    return s_minus, tuple(1 - s for s in s_minus)


@dataclass(frozen=True)
class AxisScheme:
    pencil: PencilDecomposition
    signs: Tuple[int, ...]
    S_minus: Tuple[int, ...]
    S_plus: Tuple[int, ...]
    T: RationalMatrix
    T_inv: RationalMatrix
    G: RationalMatrix           # A⁻¹·B_i
    E_left: Optional[RationalMatrix] = None
    E_right: Optional[RationalMatrix] = None


@dataclass(frozen=True)
class SchemeData:
    """
    Everything step_layer needs, fixed once per run. The exact pencils are kept for reference; the stepping loop
    only touches the rationalized matrices, whose entries are multiples of 2^-bits within eps_mat of the exact ones.
    """
    A_inv: ExactMatrix
    A_inv_rational: RationalMatrix
    axes: Tuple[AxisScheme, ...]
    bits: int
    eps_mat: Fraction
    periodic: bool

    @property
    def T_per_axis(self) -> Tuple[ExactMatrix, ...]:
        return tuple(ax.pencil.T for ax in self.axes)

    @property
    def T_inv_per_axis(self) -> Tuple[ExactMatrix, ...]:
        return tuple(ax.pencil.T_inv for ax in self.axes)

    @property
    def mu_signs(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(ax.signs for ax in self.axes)


def precompute(p:HyperbolicProblem, plan:GridPlan) -> SchemeData:
    bits = plan.dyadic_precision_bits
    worst = Fraction(0)

    def rational(X:ExactMatrix) -> RationalMatrix:
        nonlocal worst
        rows, err = rationalize(X, bits)
        worst = max(worst, err)
        return rows

    A_inv = mat_inverse(p.A)
    axes = []
    for i, pencil in enumerate(axis_pencils(p)):
        s_minus, s_plus = selectors(pencil.signs)
        E_left = E_right = None
        if p.boundary is not None:
            exact_left, exact_right = boundary_maps(pencil, p.boundary[i].left, p.boundary[i].right)
            E_left, E_right = rational(exact_left), rational(exact_right)
        axes.append(AxisScheme(
            pencil=pencil,
            signs=pencil.signs,
            S_minus=s_minus,
            S_plus=s_plus,
            T=rational(pencil.T),
            T_inv=rational(pencil.T_inv),
            G=rational(A_inv @ p.B[i]),
            E_left=E_left,
            E_right=E_right,
        ))
    a_inv_rational = rational(A_inv)
    if worst > plan.eps_mat:
        raise BudgetExceededError(f"rationalized scheme matrices are off by {worst}, the plan allows {plan.eps_mat}")
    log.debug(f"precompute({bits=}, eps_mat={worst}, signs={[ax.signs for ax in axes]})")
    return SchemeData(A_inv, a_inv_rational, tuple(axes), bits, worst, p.kind == 'cauchy')
