#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
import logging
import math
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from backend.algebra import sqrt_upper
from backend.engine import Backend, GridTrace, run
from backend.errors import GridMismatchError
from backend.planner import plan_for_level
from backend.problem import DomainH, HyperbolicProblem, PolyData, eval_poly
from .interp import LayerDistance, Oracle, layer_l2_squared, node_mask


log = logging.getLogger(__name__)


def _is_diagonal(X) -> bool:
    return all(X[i, j].is_zero for i in range(X.rows) for j in range(X.cols) if i != j)


def exact_oracle(p:HyperbolicProblem) -> Optional[Oracle]:
    """
    u_k(t, x) = φ_k(x − μ_k t) with μ_k^(i) = B_i[k,k]/A[k,k], for Cauchy problems whose A and B_i are rational
    and diagonal and which have no source. None otherwise.
    """
    if p.kind != 'cauchy' or p.has_source:
        return None
    matrices = (p.A,) + tuple(p.B)
    if not all(X.is_rational and _is_diagonal(X) for X in matrices):
        return None
    speeds: List[Tuple[Fraction, ...]] = []
    for k in range(p.n):
        a_kk = p.A[k, k].as_fraction()
        speeds.append(tuple(B[k, k].as_fraction() / a_kk for B in p.B))
    components = [PolyData.from_terms(p.m, [comp]) for comp in p.phi.components]

    def oracle(t:Fraction, coords:Tuple[np.ndarray, ...]) -> np.ndarray:
        shape = np.broadcast_shapes(*(np.shape(c) for c in coords))
        values = []
        for component, mu in zip(components, speeds):
            shifted = [c - s * t for c, s in zip(coords, mu)]
            (value,) = eval_poly(component, shifted)
            values.append(np.broadcast_to(np.asarray(value, dtype=object), shape))
        return np.stack(values)

    log.debug(f"exact_oracle({speeds=})")
    return oracle


def level_error(p:HyperbolicProblem, dom:DomainH, N:int, backend:Optional[Backend]=None, oracle:Optional[Oracle]=None) -> Dict[str, Any]:
    """sL2 distance at the grid nodes of level N to the oracle, over H for Cauchy problems."""
    oracle = oracle or exact_oracle(p)
    if oracle is None:
        raise ValueError("level_error needs an exact-solution oracle for this problem")
    plan_, _ = plan_for_level(p, dom, N)
    distance = LayerDistance(oracle, plan_.h, p.m, dom)
    run(p, plan_, backend, keep='last', observers=[distance])
    log.info(f"level_error({N=}) -> {float(distance.value):.4e}")
    return {"N": N, "h": plan_.h, "L": plan_.L, "error": distance.value}


def restrict_to_grid(reference:GridTrace, t:Fraction, cells:int) -> np.ndarray:
    """
    The reference trace at time t (linear between its bracketing layers) averaged over the cells of a nested grid
    with `cells` cells per axis: each coarse cell gets the mean of the fine cells it contains.
    """
    plan_ = reference.plan
    if not reference.complete:
        raise GridMismatchError(f"restriction needs every reference layer: {len(reference.layers)} of {plan_.L + 1}")
    if cells < 1 or plan_.cells % cells:
        raise GridMismatchError(f"a grid of {cells} cells per axis is not nested in one of {plan_.cells}")
    layers = reference.layers
    t = Fraction(t)
    if plan_.L == 0:
        values = layers[0].values
    else:
        s = t / plan_.tau
        l = min(math.floor(s), plan_.L)
        theta = s - l
        values = layers[l].values if not theta else (1 - theta) * layers[l].values + theta * layers[l + 1].values
    r = plan_.cells // cells
    n, m = values.shape[0], values.ndim - 1
    if m == 1:
        blocks = values.reshape(n, cells, r).sum(axis=2)
    else:
        blocks = values.reshape(n, cells, r, cells, r).sum(axis=(2, 4))
    return blocks / r**m


def _reference_error(coarse:GridTrace, reference:GridTrace, dom:DomainH) -> Fraction:
    """sL2 distance between a coarse trace and the reference restricted to the coarse cells."""
    plan_ = coarse.plan
    worst = Fraction(0)
    for layer in coarse.layers:
        expected = restrict_to_grid(reference, layer.time, plan_.cells)
        mask = node_mask(dom, layer, plan_.h)
        worst = max(worst, layer_l2_squared(layer.values - expected, plan_.h, mask))
    return sqrt_upper(worst)


def successive_ratios(errors:List[Fraction]) -> List[Optional[float]]:
    ratios:List[Optional[float]] = [None]
    for previous, current in zip(errors, errors[1:]):
        ratios.append(float(previous / current) if current else None)
    return ratios


def convergence_table(p:HyperbolicProblem, dom:DomainH, levels:int, start:int, backend:Optional[Backend]=None) -> pd.DataFrame:
    """
    Errors at N = start, …, start+levels−1 against the exact oracle when one exists; otherwise the finest level,
    averaged onto each coarser grid, is the reference and the table covers the levels below it.
    """
    if levels < 1:
        raise ValueError(f"levels must be ≥ 1, got {levels}")
    oracle = exact_oracle(p)
    rows = []
    if oracle is not None:
        for N in range(start, start + levels):
            rows.append(level_error(p, dom, N, backend, oracle))
    else:
        if levels < 2:
            raise ValueError("self-reference needs at least two levels")
        finest, _ = plan_for_level(p, dom, start + levels - 1)
        reference = run(p, finest, backend, keep='all')
        for N in range(start, start + levels - 1):
            plan_, _ = plan_for_level(p, dom, N)
            error = _reference_error(run(p, plan_, backend, keep='all'), reference, dom)
            rows.append({"N": N, "h": plan_.h, "L": plan_.L, "error": error})
    df = pd.DataFrame(rows, columns=["N", "h", "L", "error"])
    df["ratio"] = successive_ratios(list(df["error"]))
    log.debug(f"convergence_table({levels=}, {start=}, mode={'oracle' if oracle else 'reference'})")
    return df
