#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
from fractions import Fraction

import pytest

from backend.algebra import sqrt_upper
from backend.linalg import ExactMatrix, pencil_decompose
from backend.planner import (ErrorBudget, GridPlan, cfl_bound, cfl_holds, choose_h, choose_tau, compute_P, data_bounds,
                             kappa_bound, operator_perturbation, plan, plan_for_level, poly_sup_bound, scheme_norms)
from backend.problem import PolyData, axis_pencils, compute_domain, problem_from_document


def speeds(*values):
    return [pencil_decompose(ExactMatrix.identity(1), ExactMatrix.diag([v])) for v in values]


def test_error_constant_of_advection(advection):
    bounds = data_bounds(advection)
    assert bounds == {"lambda_ratio": 1, "derivatives": 2, "matrix_norms": sqrt_upper(Fraction(2))}
    P = compute_P(advection)
    assert P == 2 * sqrt_upper(Fraction(2))
    assert Fraction(282, 100) < P <= 3


def test_linear_data_has_no_error_constant(linear_advection):
    assert compute_P(linear_advection) == 0


def test_fixed_M_keeps_P(advection, advection_doc):
    p = problem_from_document(advection_doc | {"M": 2})
    assert compute_P(p) == compute_P(advection) <= 2**3


def test_kappa(pencil, advection):
    assert kappa_bound(advection) == 1
    assert kappa_bound(pencil) == 2


def test_poly_sup_bound():
    d = PolyData.from_terms(1, [[(1, (2, 1)), (Fraction(-1, 2), (0, 0))]], time_dependent=True)
    assert poly_sup_bound(d) == Fraction(3, 2)
    assert poly_sup_bound(d, Fraction(2)) == Fraction(9, 2)


@pytest.mark.parametrize("P, a, N", [
    (Fraction(0), 1, 2),
    (Fraction(1), 1, 2),
    (2 * sqrt_upper(Fraction(2)), 10, 7),
    (Fraction(4), 1, 4),
    (Fraction(1), 100, 9),
])
def test_choose_h(P, a, N):
    assert choose_h(P, a) == (N, Fraction(1, 2**N))


def test_choose_h_rejects_bad_precision():
    with pytest.raises(ValueError):
        choose_h(Fraction(1), 0)


def test_choose_tau_takes_the_tighter_condition():
    pencils = speeds(1, 2)
    assert cfl_bound(Fraction(1, 8), pencils) == Fraction(1, 24)
    assert choose_tau(Fraction(1, 8), pencils, Fraction(1, 2)) == (Fraction(1, 24), 12)
    assert cfl_holds(Fraction(1, 24), Fraction(1, 8), pencils)
    assert not cfl_holds(Fraction(1, 23), Fraction(1, 8), pencils)


def test_fast_speeds_bind_on_the_speed_sum_not_the_inverse_sum():
    pencils = speeds(1, 2)
    h = Fraction(1, 8)
    # h·(Σ 1/μ̄)⁻¹ alone would give τ = 1/12, L = 6; the speed-2 axis then moves 1/6 > h per step
    inverse_sum_only = h / (1 + Fraction(1, 2))
    assert inverse_sum_only == Fraction(1, 12)
    assert not cfl_holds(inverse_sum_only, h, pencils)
    assert choose_tau(h, pencils, Fraction(1, 2)) == (Fraction(1, 24), 12)


def test_slow_axes_bind_on_the_inverse_sum():
    pencils = speeds(Fraction(1, 4), Fraction(1, 4))
    # Σ 1/μ̄ = 8 dominates Σ μ̄ = 1/2
    assert cfl_bound(Fraction(1, 8), pencils) == Fraction(1, 64)


def test_choose_tau_degenerate_cases():
    assert choose_tau(Fraction(1, 8), speeds(1), Fraction(0)) == (Fraction(0), 0)
    assert choose_tau(Fraction(1, 8), speeds(0), Fraction(1, 2)) == (Fraction(1, 2), 1)
    assert cfl_bound(Fraction(1, 8), speeds(0)) is None


def test_advection_plan(advection):
    dom = compute_domain(advection)
    grid, budget = plan(advection, dom)
    assert (grid.N, grid.L) == (7, 192)
    assert grid.h == Fraction(1, 128) and grid.tau == Fraction(1, 384)
    assert grid.L * grid.tau == grid.T == Fraction(1, 2)
    assert grid.cells == 128 and grid.courant == Fraction(1, 3)
    assert grid.guaranteed
    assert grid.budget_disc == grid.budget_round == Fraction(1, 20)
    assert budget.interpolation_term == budget.scheme_term == grid.P_bound * grid.h
    assert budget.rounding_term <= Fraction(1, 40)
    assert budget.total < Fraction(1, 10)
    assert cfl_holds(grid.tau, grid.h, axis_pencils(advection))
    assert grid.eps_mat == Fraction(1, 2**grid.dyadic_precision_bits)
    assert grid.diagnostics["u_t_sup"] is not None


def test_coarse_level_is_not_guaranteed(advection):
    grid, _ = plan_for_level(advection, compute_domain(advection), 3)
    assert grid.N == 3 and not grid.guaranteed
    with pytest.raises(ValueError):
        plan_for_level(advection, compute_domain(advection), 0)


def test_boundary_plan(boundary):
    grid, budget = plan(boundary, compute_domain(boundary))
    assert grid.P_bound == 0 and grid.N == 2
    assert (grid.tau, grid.L) == (Fraction(1, 4), 1)
    assert budget.total == budget.rounding_term


def test_plan_documents(advection):
    grid, budget = plan(advection, compute_domain(advection))
    doc = grid.to_document()
    assert doc["h"] == "1/128" and doc["L"] == 192
    assert GridPlan.from_document(doc) == grid
    assert budget.to_document()["total"] == str(budget.total)
    assert ErrorBudget(**{k: Fraction(v) for k, v in budget.to_document().items() if k != "total"}) == budget


def test_operator_perturbation_vanishes_without_rounding(advection, boundary):
    assert operator_perturbation(scheme_norms(advection), 2, Fraction(0), Fraction(1, 3), False) == 0
    norms = scheme_norms(boundary)
    assert operator_perturbation(norms, 2, Fraction(0), Fraction(1), True) == 0
    assert operator_perturbation(norms, 2, Fraction(1, 2**20), Fraction(1), True) > 0
