#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
from .matrix import (ExactMatrix, mat_arith, mat_transpose, mat_inverse, mat_det, mat_rank, mat_vec, null_space_basis,
                     gram_schmidt, frobenius_bound, rationalize)
from .spectral import (SpectralDecomposition, PencilDecomposition, EigenBlock, charpoly_newton, mat_trace, eigenvalues_with_multiplicity,
                       eigenblocks, eigenblocks_consistent, spectral_decompose, pencil_decompose)
