#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, List, Literal, Optional, Sequence, Tuple

import numpy as np

from backend.algebra import sqrt_upper
from backend.errors import BudgetExceededError
from backend.planner import GridPlan
from backend.problem import HyperbolicProblem, PolyData, eval_poly
from backend.settings import SETTINGS
from .scheme import AxisScheme, RationalMatrix, SchemeData, branch_free_flux, precompute


log = logging.getLogger(__name__)

Backend = Literal['exact', 'dyadic']
Observer = Callable[['GridLayer'], None]


@dataclass(frozen=True, eq=False)
class GridLayer:
    """
    values[k, i] (m = 1) or values[k, i, j] (m = 2) is component k at the cell centre ((i+1/2)h, (j+1/2)h).
    `rounding` is the grid L2 norm of the rounding applied while producing this layer.
    """
    values: np.ndarray
    level: int
    time: Fraction
    rounding: Fraction = Fraction(0)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.ndim - 1

    @property
    def cells(self) -> int:
        return self.values.shape[1]


@dataclass
class GridTrace:
    layers: List[GridLayer]
    plan: GridPlan
    backend: Backend
    rounding_spent: Fraction = Fraction(0)
    matrix_term: Fraction = Fraction(0)
    rounding_per_layer: List[Fraction] = field(default_factory=list)

    @property
    def final(self) -> GridLayer:
        return self.layers[-1]

    @property
    def complete(self) -> bool:
        return len(self.layers) == self.plan.L + 1


# -- grid helpers -----------------------------------------------------------------------------------

def cell_centres(M:int, h:Fraction) -> np.ndarray:
    return np.array([(i + Fraction(1, 2)) * h for i in range(M)], dtype=object)


def grid_coordinates(m:int, M:int, h:Fraction) -> Tuple[np.ndarray, ...]:
    """Cell-centre coordinates shaped to broadcast to (M,) or (M, M)."""
    centres = cell_centres(M, h)
    if m == 1:
        return (centres,)
    return centres.reshape(M, 1), centres.reshape(1, M)


def evaluate_on_grid(d:PolyData, point:Sequence[Any], shape:Tuple[int, ...]) -> np.ndarray:
    values = eval_poly(d, point)
    return np.stack([np.broadcast_to(np.asarray(v, dtype=object), shape) for v in values])


def _apply(matrix:Sequence[Sequence[Any]], u:np.ndarray) -> np.ndarray:
    """matrix·u over the component axis, skipping zero entries."""
    rows = []
    for row in matrix:
        acc = None
        for coef, comp in zip(row, u):
            if coef:
                term = comp * coef
                acc = term if acc is None else acc + term
        rows.append(acc if acc is not None else np.zeros(u.shape[1:], dtype=object))
    return np.stack(rows)


def _scaled(matrix:RationalMatrix, scale:int) -> List[List[int]]:
    out = []
    for row in matrix:
        scaled_row = []
        for q in row:
            k = q * scale
            if k.denominator != 1:
                raise ValueError(f"{q} is not a multiple of 1/{scale}")
            scaled_row.append(k.numerator)
        out.append(scaled_row)
    return out


def _round_half_even_div(num:int, den:int) -> int:
    q, r = divmod(num, den)
    if 2 * r > den or (2 * r == den and q % 2):
        q += 1
    return q


_round_div = np.frompyfunc(_round_half_even_div, 2, 1)
_round_fraction = np.frompyfunc(round, 1, 1)


def _to_fractions(u:np.ndarray, scale:int) -> np.ndarray:
    return np.frompyfunc(lambda k: Fraction(k, scale), 1, 1)(u).astype(object)


def _to_scaled_ints(u:np.ndarray, scale:int) -> np.ndarray:
    def numerator(q:Fraction) -> int:
        k = Fraction(q) * scale
        if k.denominator != 1:
            raise ValueError(f"layer value {q} is not a multiple of 1/{scale}")
        return k.numerator
    return np.frompyfunc(numerator, 1, 1)(u).astype(object)


def _block_ranges(M:int, blocks:int) -> List[Tuple[int, int]]:
    blocks = max(1, min(blocks, M))
    bounds = [M * b // blocks for b in range(blocks + 1)]
    return [(bounds[b], bounds[b + 1]) for b in range(blocks)]


# -- one step ---------------------------------------------------------------------------------------

@dataclass(frozen=True)
class _StepMatrices:
    """The per-axis matrices in the arithmetic of one backend."""
    T: List[Any]
    T_inv: List[Any]
    G: List[Any]
    E_left: Optional[List[Any]]
    E_right: Optional[List[Any]]
    S_minus: Tuple[int, ...]
    S_plus: Tuple[int, ...]


def _step_matrices(sd:SchemeData, backend:Backend) -> List[_StepMatrices]:
    def convert(matrix:Optional[RationalMatrix]):
        if matrix is None or backend == 'exact':
            return matrix
        return _scaled(matrix, 2**sd.bits)
    out = []
    for ax in sd.axes:
        out.append(_StepMatrices(convert(ax.T), convert(ax.T_inv), convert(ax.G), convert(ax.E_left), convert(ax.E_right), ax.S_minus, ax.S_plus))
    return out


def _face_values(u:np.ndarray, ax:int, mats:_StepMatrices, faces:range, M:int, periodic:bool, boundary_scale:int) -> np.ndarray:
    """
    Interface values U for the faces in `faces` (face j separates cells j-1 and j) along array axis `ax`.
    Periodic closure wraps face 0 and face M onto the same pair of cells; otherwise the outer faces use E.
    """
    pieces = []
    if not periodic and faces[0] == 0:
        pieces.append(_apply(mats.E_left, np.take(u, [0], axis=ax)) * boundary_scale)
    interior = [j for j in faces if periodic or 0 < j < M]
    if interior:
        left = [(j - 1) % M for j in interior]
        right = [j % M for j in interior]
        cells = sorted(set(left) | set(right))
        position = {c: k for k, c in enumerate(cells)}
        v = _apply(mats.T_inv, np.take(u, cells, axis=ax))
        v_left = np.take(v, [position[c] for c in left], axis=ax)
        v_right = np.take(v, [position[c] for c in right], axis=ax)
        W = np.stack(branch_free_flux(v_left, v_right, mats.S_minus, mats.S_plus))
        pieces.append(_apply(mats.T, W))
    if not periodic and faces[-1] == M:
        pieces.append(_apply(mats.E_right, np.take(u, [M - 1], axis=ax)) * boundary_scale)
    return np.concatenate(pieces, axis=ax)


def _increment(u:np.ndarray, matrices:Sequence[_StepMatrices], rows:Tuple[int, int], periodic:bool, boundary_scale:int) -> np.ndarray:
    """Σ_i G_i·(U_{i+1/2} − U_{i−1/2}) for the cells whose first index lies in [r0, r1)."""
    r0, r1 = rows
    M = u.shape[1]
    total = None
    for a, mats in enumerate(matrices):
        ax = a + 1
        if a == 0:
            faces = _face_values(u, ax, mats, range(r0, r1 + 1), M, periodic, boundary_scale)
        else:
            faces = _face_values(u[:, r0:r1], ax, mats, range(0, M + 1), M, periodic, boundary_scale)
        term = _apply(mats.G, np.diff(faces, axis=ax))
        total = term if total is None else total + term
    assert total is not None
    return total


def source_values(p:HyperbolicProblem, sd:SchemeData, plan:GridPlan, t:Fraction) -> Optional[np.ndarray]:
    """τ·A⁻¹·f(t, x) at every cell centre, or None without a source."""
    if not p.has_source:
        return None
    assert p.f is not None
    M = plan.cells
    shape = (M,) * p.m
    f_values = evaluate_on_grid(p.f, (t, *grid_coordinates(p.m, M, plan.h)), shape)
    return _apply(sd.A_inv_rational, f_values) * plan.tau


def _rounding_norm(square_sum:Fraction, h:Fraction, m:int) -> Fraction:
    return sqrt_upper(h**m * square_sum)


def step_layer(layer:GridLayer, sd:SchemeData, p:HyperbolicProblem, plan:GridPlan, backend:Backend='exact',
               blocks:int=1, workers:int=1) -> GridLayer:
    """
    u_new = u − (τ/h)·Σ_i A⁻¹B_i·(U_{i+1/2} − U_{i−1/2}) + τ·A⁻¹f(lτ, x).

    The grid is cut into `blocks` slabs along the first axis, optionally on `workers` threads; each slab reads only
    the old layer, so the result does not depend on the partition.
    """
    if layer.level >= plan.L:
        raise ValueError(f"layer {layer.level} is already the last one (L={plan.L})")
    M = plan.cells
    c = plan.courant
    source = source_values(p, sd, plan, layer.time)
    matrices = _step_matrices(sd, backend)
    scale = 2**sd.bits

    if backend == 'exact':
        u = layer.values

        def work(rows:Tuple[int, int]) -> Tuple[np.ndarray, Fraction]:
            r0, r1 = rows
            new = u[:, r0:r1] - _increment(u, matrices, rows, sd.periodic, 1) * c
            if source is not None:
                new = new + source[:, r0:r1]
            return new, Fraction(0)
    else:
        u = _to_scaled_ints(layer.values, scale)
        face_shift = scale**3 * c.denominator
        den = c.denominator * scale**3

        def work(rows:Tuple[int, int]) -> Tuple[np.ndarray, Fraction]:
            r0, r1 = rows
            numer = u[:, r0:r1] * face_shift - _increment(u, matrices, rows, sd.periodic, scale) * c.numerator
            if source is None:
                rounded = _round_div(numer, den).astype(object)
                remainder = rounded * den - numer
                squares = sum((int(r) * int(r) for r in remainder.flat), 0)
                return rounded, Fraction(squares, (den * scale)**2)
            exact = np.frompyfunc(lambda k: Fraction(k, den * scale), 1, 1)(numer) + source[:, r0:r1]
            rounded = _round_fraction(exact * scale).astype(object)
            error = _to_fractions(rounded, scale) - exact
            return rounded, sum((e * e for e in error.flat), Fraction(0))

    ranges = _block_ranges(M, blocks)
    if workers > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, ranges))
    else:
        results = [work(r) for r in ranges]
    values = np.concatenate([r[0] for r in results], axis=1)
    square_sum = sum((r[1] for r in results), Fraction(0))
    if backend == 'dyadic':
        values = _to_fractions(values, scale)
    rounding = _rounding_norm(square_sum, plan.h, p.m) if square_sum else Fraction(0)
    return GridLayer(values, layer.level + 1, layer.time + plan.tau, rounding)


# -- whole runs -------------------------------------------------------------------------------------

def init_layer(p:HyperbolicProblem, plan:GridPlan) -> GridLayer:
    M = plan.cells
    values = evaluate_on_grid(p.phi, grid_coordinates(p.m, M, plan.h), (M,) * p.m)
    return GridLayer(values, 0, Fraction(0))


def round_layer(layer:GridLayer, bits:int, h:Fraction) -> GridLayer:
    """Round every value to the nearest multiple of 2^-bits (ties to even) and record the rounding norm."""
    scale = 2**bits
    rounded = _to_fractions(_round_fraction(layer.values * scale).astype(object), scale)
    error = rounded - layer.values
    square_sum = sum((e * e for e in error.flat), Fraction(0))
    rounding = _rounding_norm(square_sum, h, layer.m) if square_sum else Fraction(0)
    return GridLayer(rounded, layer.level, layer.time, rounding)


def matrix_term(plan:GridPlan) -> Fraction:
    """κ·growth·L·(ε_op·U + source perturbation): what rationalizing the scheme matrices can cost over the run."""
    return plan.kappa * plan.growth * plan.L * (plan.eps_op * plan.solution_bound + plan.source_perturbation)


def run(p:HyperbolicProblem, plan:GridPlan, backend:Optional[Backend]=None, keep:Literal['all', 'last']='all',
        observers:Iterable[Observer]=(), blocks:Optional[int]=None, workers:Optional[int]=None,
        sd:Optional[SchemeData]=None) -> GridTrace:
    backend = backend or SETTINGS.solver['backend']
    if backend not in ('exact', 'dyadic'):
        raise ValueError(f"unknown backend {backend!r}")
    blocks = blocks or SETTINGS.solver['blocks']
    workers = workers or SETTINGS.solver['workers']
    sd = sd or precompute(p, plan)
    observers = list(observers)

    trace = GridTrace([], plan, backend, matrix_term=matrix_term(plan))
    layer = init_layer(p, plan)
    if backend == 'dyadic':
        layer = round_layer(layer, sd.bits, plan.h)
    raw = Fraction(0)

    def accept(current:GridLayer):
        nonlocal raw
        raw += current.rounding
        trace.rounding_per_layer.append(current.rounding)
        trace.rounding_spent = plan.kappa * plan.growth * raw
        if trace.rounding_spent + trace.matrix_term > plan.budget_round:
            raise BudgetExceededError(f"layer {current.level}: rounding {trace.rounding_spent} + matrix term {trace.matrix_term} exceeds the budget {plan.budget_round}")
        for observe in observers:
            observe(current)
        if keep == 'all' or current.level == plan.L:
            trace.layers.append(current)

    accept(layer)
    for _ in range(plan.L):
        layer = step_layer(layer, sd, p, plan, backend, blocks, workers)
        accept(layer)
        log.debug(f"run: layer {layer.level}/{plan.L} rounding={float(layer.rounding):.3e}")
    log.info(f"run({backend=}, L={plan.L}) -> rounding_spent={float(trace.rounding_spent):.3e}, matrix_term={float(trace.matrix_term):.3e}")
    return trace
