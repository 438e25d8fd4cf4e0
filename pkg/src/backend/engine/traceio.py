#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
import logging
import pathlib as pl
from fractions import Fraction
from typing import Iterable, List

import numpy as np
import pandas as pd

from backend.errors import GridMismatchError, ProblemParseError
from backend.planner import GridPlan
from .stepping import Backend, GridLayer, GridTrace


log = logging.getLogger(__name__)


def layer_frame(layer:GridLayer) -> pd.DataFrame:
    """One row per cell: l, i, j (1-based, j = 1 when m = 1), u1..un as exact rational strings."""
    n, M = layer.n, layer.cells
    if layer.m == 1:
        i_idx, j_idx = np.arange(1, M + 1), np.ones(M, dtype=int)
        columns = {f"u{k + 1}": [str(v) for v in layer.values[k]] for k in range(n)}
    else:
        i_idx, j_idx = np.repeat(np.arange(1, M + 1), M), np.tile(np.arange(1, M + 1), M)
        columns = {f"u{k + 1}": [str(v) for v in layer.values[k].ravel()] for k in range(n)}
    return pd.DataFrame({"l": layer.level, "i": i_idx, "j": j_idx, **columns})


class CsvLayerWriter:
    """Observer that appends each layer to a CSV file as it is produced."""
    def __init__(self, path:pl.Path):
        self.path = pl.Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._first = True

    def __call__(self, layer:GridLayer):
        layer_frame(layer).to_csv(self.path, mode='w' if self._first else 'a', header=self._first, index=False, lineterminator='\n')
        self._first = False


def write_trace_csv(layers:Iterable[GridLayer], path:pl.Path) -> pl.Path:
    writer = CsvLayerWriter(path)
    for layer in layers:
        writer(layer)
    log.debug(f"write_trace_csv({path=})")
    return writer.path


def read_trace_csv(path:pl.Path, plan:GridPlan, m:int, backend:Backend='exact') -> GridTrace:
    """Rebuild the layers of a CSV written by write_trace_csv; every layer must fill the plan's grid."""
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ProblemParseError(f"cannot read trace {path}: {e}") from e
    components = [c for c in df.columns if c.startswith('u')]
    if not components or not {'l', 'i', 'j'} <= set(df.columns):
        raise GridMismatchError(f"trace {path} lacks the l,i,j,u1..un columns")
    M = plan.cells
    layers:List[GridLayer] = []
    for level, group in df.groupby(df['l'].astype(int), sort=True):
        expected = M**m
        if len(group) != expected:
            raise GridMismatchError(f"trace layer {level} has {len(group)} rows, the plan needs {expected}")
        i = group['i'].astype(int).to_numpy() - 1
        j = group['j'].astype(int).to_numpy() - 1
        shape = (len(components),) + (M,) * m
        values = np.empty(shape, dtype=object)
        for k, column in enumerate(components):
            parsed = [Fraction(v) for v in group[column]]
            if m == 1:
                values[k, i] = parsed
            else:
                values[k, i, j] = parsed
        layers.append(GridLayer(values, int(level), int(level) * plan.tau))
    return GridTrace(layers, plan, backend)

