#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
from .interp import (Interpolant, LayerDistance, in_H, node_mask, restrict_H, interp_eval, grid_norm, layer_l2_squared,
                     compare_traces)
from .certificate import SolutionCertificate, certify, certificate_failures, verify_certificate, certificate_summary
from .convergence import exact_oracle, level_error, convergence_table, restrict_to_grid, successive_ratios
