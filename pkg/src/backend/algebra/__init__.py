#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
from .poly import RatPoly, poly_arith, squarefree_part, sturm_sequence, count_roots, isolate_intervals
from .real import (RealAlgebraic, IsolationResult, isolate_real_roots, alg_arith, alg_sign, alg_compare, alg_sqrt,
                   alg_poly_eval, alg_poly_sign, alg_to_decimal, rational_bounds, rational_upper, rational_lower, to_encoding, from_encoding)
from .field import NumberField, FieldVector, field_null_space
from .bounds import sqrt_upper, sqrt_lower, round_up_dyadic, round_down_dyadic, round_half_even_dyadic, pow_upper
