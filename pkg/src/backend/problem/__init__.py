#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
from .model import (PolyData, BoundaryPair, HyperbolicProblem, DomainH, eval_poly, poly_partial, poly_at_time_zero,
                    poly_matrix_apply, time_derivative_data, a_spectrum, axis_pencils)
from .checks import CheckResult, ValidationReport, validate, require_valid, compute_domain
from .io import parse_problem, load_problem, problem_from_document, problem_to_document, problem_hash, canonical_json
from .faces import characteristic_roles, face_reconstruction, boundary_maps
