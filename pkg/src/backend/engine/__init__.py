#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
from .scheme import AxisScheme, SchemeData, precompute, branch_free_flux, branching_flux, selectors
from .stepping import (GridLayer, GridTrace, Backend, cell_centres, grid_coordinates, evaluate_on_grid, init_layer,
                       round_layer, step_layer, source_values, matrix_term, run)
from .traceio import CsvLayerWriter, layer_frame, write_trace_csv, read_trace_csv
