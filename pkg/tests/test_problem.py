#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
import dataclasses
from fractions import Fraction

import pytest

from backend.errors import BoundarySolveError, NoAdmissibleDomain, ProblemInvalid, ProblemParseError
from backend.linalg import ExactMatrix
from backend.problem import (PolyData, axis_pencils, boundary_maps, characteristic_roles, compute_domain, eval_poly,
                             face_reconstruction, load_problem, parse_problem, poly_partial, problem_from_document,
                             problem_hash, problem_to_document, require_valid, time_derivative_data, validate)
from conftest import ADVECTION, BOUNDARY, document, term


# -- parsing -------------------------------------------------------------------------------------------

def test_parse_advection(advection):
    assert (advection.kind, advection.m, advection.n, advection.precision_a) == ('cauchy', 2, 2, 10)
    assert advection.B[1] == ExactMatrix.diag([Fraction(1, 2), Fraction(-1, 2)])
    assert not advection.has_source
    assert eval_poly(advection.phi, [Fraction(1, 2), Fraction(3)]) == [Fraction(3, 4), Fraction(7, 2)]


def test_hjson_with_comments():
    p = parse_problem("""
    {
      # one transported component
      kind: cauchy
      m: 1
      n: 1
      A: [[1]]
      B: [[[1]]]
      phi: [[{coef: "1/2", exps: [1]}]]
      precision_a: 2
    }
    """)
    assert p.phi.components == (((Fraction(1, 2), (1,)),),)


def test_algebraic_entries(advection_doc):
    p = problem_from_document(document(advection_doc, A=[[{"minpoly": ["-2", "0", "1"], "root": 2}, 0], [0, 1]]))
    assert not p.A.is_rational
    assert validate(p).ok


@pytest.mark.parametrize("changes", [
    {"kind": "periodic"},
    {"m": 3},
    {"A": [[1, 0], [0, "one"]]},
    {"phi": [[{"coef": 1}], []]},
])
def test_schema_violations(advection_doc, changes):
    with pytest.raises(ProblemParseError) as e:
        problem_from_document(document(advection_doc, **changes))
    assert e.value.path is not None and e.value.path.startswith("$")


def test_malformed_rational(advection_doc):
    with pytest.raises(ProblemParseError):
        problem_from_document(document(advection_doc, A=[[1, 0], [0, "1/0"]]))


def test_inconsistent_shapes(advection_doc):
    with pytest.raises(ProblemParseError):
        problem_from_document(document(advection_doc, A=[[1]]))
    with pytest.raises(ProblemParseError):
        problem_from_document(document(advection_doc, phi=[[term(1, 1)], []]))


def test_syntax_errors_carry_position():
    with pytest.raises(ProblemParseError) as e:
        parse_problem('{"kind": "cauchy",\n  "m": [}')
    assert e.value.line is not None
    with pytest.raises(ProblemParseError):
        parse_problem("[1, 2]")


def test_load_missing_file(tmp_path):
    with pytest.raises(ProblemParseError):
        load_problem(tmp_path / "absent.json")


def test_load_problem(write_problem, advection):
    assert problem_hash(load_problem(write_problem(ADVECTION))) == problem_hash(advection)


def test_problem_hash(advection, advection_doc):
    assert problem_hash(advection) == problem_hash(problem_from_document(problem_to_document(advection)))
    other = problem_from_document(document(advection_doc, precision_a=11))
    assert problem_hash(other) != problem_hash(advection)
    # term order and duplicate terms do not change the problem
    shuffled = problem_from_document(document(advection_doc, phi=[[term(1, 2, 1)], [term("1/2", 0, 1), term(1, 1, 0), term("1/2", 0, 1)]]))
    assert problem_hash(shuffled) == problem_hash(advection)


# -- polynomial data -------------------------------------------------------------------------------------

def test_polydata_merges_terms():
    d = PolyData.from_terms(1, [[(1, (2,)), (Fraction(1, 2), (0,)), (-1, (2,))]])
    assert d.components == (((Fraction(1, 2), (0,)),),)
    with pytest.raises(ValueError):
        PolyData.from_terms(1, [[(1, (1, 1))]])


def test_poly_partial(advection):
    d = poly_partial(advection.phi, 0)
    assert eval_poly(d, [Fraction(3), Fraction(2)]) == [12, 1]
    d = poly_partial(advection.phi, 1)
    assert eval_poly(d, [Fraction(3), Fraction(2)]) == [9, 1]


def test_time_derivative_data(advection):
    u_t, u_tt = time_derivative_data(advection)
    one = [Fraction(1), Fraction(1)]
    assert eval_poly(u_t, one) == [Fraction(-5, 2), Fraction(3, 2)]
    # u1_tt = 2x + 2y
    assert eval_poly(u_tt, one)[0] == 4
    assert eval_poly(u_tt, one)[1] == 0


# -- validation ------------------------------------------------------------------------------------------

def test_valid_problems(advection, pencil, boundary):
    for p in (advection, pencil):
        assert validate(p).ok
    report = require_valid(boundary)
    assert report.strongly_dissipative


def test_non_symmetric_and_indefinite(advection_doc):
    report = validate(problem_from_document(document(advection_doc, A=[[1, 1], [0, 1]])))
    assert not report.ok
    assert "A symmetric" in report.failures
    with pytest.raises(ProblemInvalid) as e:
        require_valid(problem_from_document(document(advection_doc, A=[[1, 0], [0, -1]])))
    assert "A positive definite" in e.value.failed_checks


def test_boundary_row_counts():
    doc = document(BOUNDARY, boundary=[{"left": [[1, 0], [0, 1]], "right": [[0, 1]]}])
    report = validate(problem_from_document(doc))
    assert "Φ^(1) rows (axis 1)" in report.failures


def test_non_dissipative_face():
    doc = document(BOUNDARY, boundary=[{"left": [[0, 1]], "right": [[0, 1]]}])
    report = validate(problem_from_document(doc))
    assert "dissipative left face (axis 1)" in report.failures


def test_data_bound_check(advection_doc):
    assert validate(problem_from_document(document(advection_doc, M=100))).ok
    report = validate(problem_from_document(document(advection_doc, M="1/1000")))
    assert report.failures == ["data bounded by M"]


# -- domain ----------------------------------------------------------------------------------------------

def test_advection_domain(advection):
    dom = compute_domain(advection)
    assert dom.kind == 'cauchy'
    assert [m.as_fraction() for m in dom.mu_min] == [-1, Fraction(-1, 2)]
    assert [m.as_fraction() for m in dom.mu_max] == [1, Fraction(1, 2)]
    assert dom.T_apex == Fraction(1, 2)
    assert dom.T == Fraction(1, 2)


def test_irrational_apex_rounds_up(advection_doc):
    # B_1 = diag(√2, −1): T_apex = 1/(1 + √2) ≈ 0.41421
    root2 = {"minpoly": ["-2", "0", "1"], "root": 2}
    dom = compute_domain(problem_from_document(document(advection_doc, B=[[[root2, 0], [0, -1]], [["1/2", 0], [0, "-1/2"]]])))
    assert dom.T_apex < dom.T <= dom.T_apex + Fraction(1, 256)
    assert dom.T * 256 == int(dom.T * 256)


@pytest.mark.parametrize("B1, message", [
    ([[1, 0], [0, 2]], "μ_min>0 on axis 1"),
    ([[-1, 0], [0, -2]], "μ_max<0 on axis 1"),
    ([[0, 0], [0, 1]], "zero pencil eigenvalue on axis 1"),
])
def test_no_admissible_domain(advection_doc, B1, message):
    p = problem_from_document(document(advection_doc, B=[B1, [["1/2", 0], [0, "-1/2"]]]))
    with pytest.raises(NoAdmissibleDomain) as e:
        compute_domain(p)
    assert message in str(e.value)
    assert e.value.axis == 1


def test_boundary_domain(boundary):
    dom = compute_domain(boundary)
    assert dom.kind == 'boundary' and dom.T_apex is None
    assert dom.T == Fraction(1, 4)


def test_boundary_requires_T(boundary):
    doc = document(BOUNDARY)
    del doc["T"]
    with pytest.raises(ProblemParseError):
        problem_from_document(doc)
    with pytest.raises(ProblemInvalid):
        compute_domain(dataclasses.replace(boundary, T_override=None))


# -- faces -----------------------------------------------------------------------------------------------

def test_characteristic_roles():
    assert characteristic_roles((-1, 0, 1), 'left') == ([2], [0], [1])
    assert characteristic_roles((-1, 0, 1), 'right') == ([0], [2], [1])


def test_boundary_maps(boundary):
    (pencil,) = axis_pencils(boundary)
    pair = boundary.boundary[0]
    E_left, E_right = boundary_maps(pencil, pair.left, pair.right)
    assert E_left == ExactMatrix.diag([0, 1])
    assert E_right == ExactMatrix.diag([1, 0])


def test_face_reconstruction_errors(boundary):
    (pencil,) = axis_pencils(boundary)
    with pytest.raises(BoundarySolveError):
        face_reconstruction(pencil, ExactMatrix.from_rows([[1, 0], [0, 1]]), 'left')
    with pytest.raises(BoundarySolveError):
        face_reconstruction(pencil, ExactMatrix.from_rows([[0, 1]]), 'left')


def test_flipped_transport_is_not_dissipative():
    assert validate(problem_from_document(document(BOUNDARY))).ok
    report = validate(problem_from_document(document(BOUNDARY, B=[[[-1, 0], [0, 1]]])))
    assert "dissipative left face (axis 1)" in report.failures
    assert report.strongly_dissipative is False
