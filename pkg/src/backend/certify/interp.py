#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np

from backend.algebra import alg_arith, alg_sign, sqrt_upper
from backend.engine import GridLayer, GridTrace, grid_coordinates
from backend.errors import GridMismatchError, OutsideDomainError
from backend.problem import DomainH


log = logging.getLogger(__name__)

Oracle = Callable[[Fraction, Tuple[np.ndarray, ...]], np.ndarray]


@dataclass(frozen=True)
class Interpolant:
    """Multilinear in t and x over a complete trace; `restriction` limits where it may be evaluated."""
    trace: GridTrace
    restriction: Literal['full_cylinder', 'H'] = 'full_cylinder'
    domain: Optional[DomainH] = None

    def __post_init__(self):
        if not self.trace.complete:
            raise GridMismatchError(f"interpolation needs every layer: trace has {len(self.trace.layers)} of {self.trace.plan.L + 1}")
        if self.restriction == 'H' and self.domain is None:
            raise ValueError("restriction to H needs the domain")


def in_H(dom:DomainH, t:Fraction, x:Sequence[Fraction]) -> bool:
    """Exact membership in H (Cauchy) or in the cylinder [0, T]×Q (boundary problems)."""
    t = Fraction(t)
    if len(x) != dom.m:
        raise ValueError(f"point has {len(x)} coordinates, the domain has {dom.m}")
    if not 0 <= t <= dom.T:
        return False
    if dom.kind == 'boundary':
        return all(0 <= Fraction(xi) <= 1 for xi in x)
    for xi, lo, hi in zip(x, dom.mu_min, dom.mu_max):
        xi = Fraction(xi)
        if alg_sign(alg_arith(xi, alg_arith(hi, t, 'mul'), 'sub')) < 0:
            return False
        if alg_sign(alg_arith(xi - 1, alg_arith(lo, t, 'mul'), 'sub')) > 0:
            return False
    return True


def node_mask(dom:Optional[DomainH], layer:GridLayer, h:Fraction) -> np.ndarray:
    """Boolean mask of the cell centres of `layer` that lie in H (all True without a domain)."""
    M = layer.cells
    shape = (M,) * layer.m
    if dom is None or dom.kind == 'boundary':
        return np.ones(shape, dtype=bool)
    coords = [(i + Fraction(1, 2)) * h for i in range(M)]
    axis_ok = []
    for lo, hi in zip(dom.mu_min, dom.mu_max):
        axis_ok.append(np.array([in_H(DomainH('cauchy', (lo,), (hi,), dom.T_apex, dom.T), layer.time, [x]) for x in coords], dtype=bool))
    if layer.m == 1:
        return axis_ok[0]
    return np.logical_and.outer(axis_ok[0], axis_ok[1])


def restrict_H(itp:Interpolant, dom:DomainH) -> Interpolant:
    if dom.kind != 'cauchy':
        raise ValueError("restriction to H applies to Cauchy problems")
    return Interpolant(itp.trace, 'H', dom)


def _axis_weights(x:Fraction, M:int, h:Fraction) -> List[Tuple[int, Fraction]]:
    """Cells and weights of the linear interpolant along one axis, clamped outside [h/2, 1 − h/2]."""
    s = x / h - Fraction(1, 2)
    if M == 1 or s <= 0:
        return [(0, Fraction(1))]
    if s >= M - 1:
        return [(M - 1, Fraction(1))]
    i = math.floor(s)
    theta = s - i
    return [(i, 1 - theta), (i + 1, theta)] if theta else [(i, Fraction(1))]


def _spatial(layer:GridLayer, weights:Sequence[List[Tuple[int, Fraction]]]) -> List[Fraction]:
    out = [Fraction(0)] * layer.n
    if layer.m == 1:
        corners = [((i,), w) for i, w in weights[0]]
    else:
        corners = [((i, j), wi * wj) for i, wi in weights[0] for j, wj in weights[1]]
    for index, w in corners:
        for k in range(layer.n):
            out[k] += w * layer.values[(k, *index)]
    return out


def interp_eval(itp:Interpolant, t:Fraction, x:Sequence[Fraction]) -> List[Fraction]:
    plan = itp.trace.plan
    t = Fraction(t)
    x = [Fraction(xi) for xi in x]
    m = itp.trace.final.m
    if len(x) != m:
        raise ValueError(f"point has {len(x)} coordinates, the grid has {m}")
    if not 0 <= t <= plan.T or not all(0 <= xi <= 1 for xi in x):
        raise OutsideDomainError(f"({t}, {x}) is outside [0, {plan.T}]×Q")
    if itp.restriction == 'H' and itp.domain is not None and not in_H(itp.domain, t, x):
        raise OutsideDomainError(f"({t}, {x}) is outside H")
    M = plan.cells
    weights = [_axis_weights(xi, M, plan.h) for xi in x]
    layers = itp.trace.layers
    if plan.L == 0:
        return _spatial(layers[0], weights)
    s = t / plan.tau
    l = min(math.floor(s), plan.L)
    theta = s - l
    lower = _spatial(layers[l], weights)
    if not theta:
        return lower
    upper = _spatial(layers[l + 1], weights)
    return [(1 - theta) * a + theta * b for a, b in zip(lower, upper)]


def _squares(values:np.ndarray) -> np.ndarray:
    """⟨g, g⟩ at every node."""
    return sum((values[k] * values[k] for k in range(values.shape[0])), np.zeros(values.shape[1:], dtype=object) + Fraction(0))


def layer_l2_squared(values:np.ndarray, h:Fraction, mask:Optional[np.ndarray]=None) -> Fraction:
    squares = _squares(values)
    if mask is not None:
        squares = squares[mask]
    m = values.ndim - 1
    return h**m * sum(squares.flat, Fraction(0))


def grid_norm(g:Union[GridLayer, GridTrace], which:Literal['s', 'L2', 'sL2']) -> Fraction:
    """Rational upper bounds; exact whenever the square root is rational."""
    if isinstance(g, GridTrace):
        if which == 's':
            return max(grid_norm(layer, 's') for layer in g.layers)
        return max(grid_norm(layer, 'L2') for layer in g.layers)
    h = Fraction(1, g.cells)
    match which:
        case 's':
            return sqrt_upper(max(_squares(g.values).flat))
        case 'L2' | 'sL2':
            return sqrt_upper(layer_l2_squared(g.values, h))
        case _:
            raise ValueError(f"unknown norm {which!r}")


def _check_compatible(a:GridTrace, b:GridTrace):
    pa, pb = a.plan, b.plan
    if (pa.N, pa.L, pa.tau) != (pb.N, pb.L, pb.tau):
        raise GridMismatchError(f"grids differ: (N, L, τ) = {(pa.N, pa.L, pa.tau)} vs {(pb.N, pb.L, pb.tau)}")
    if a.final.values.shape != b.final.values.shape:
        raise GridMismatchError(f"layer shapes differ: {a.final.values.shape} vs {b.final.values.shape}")


class LayerDistance:
    """Observer keeping the running max over layers of the L2 distance to an oracle (restricted to H when given)."""
    def __init__(self, oracle:Oracle, h:Fraction, m:int, dom:Optional[DomainH]=None):
        self.oracle = oracle
        self.h = h
        self.m = m
        self.dom = dom
        self.squared = Fraction(0)
        self.per_layer:List[Fraction] = []

    def __call__(self, layer:GridLayer):
        coords = grid_coordinates(self.m, layer.cells, self.h)
        expected = self.oracle(layer.time, coords)
        mask = node_mask(self.dom, layer, self.h)
        distance = layer_l2_squared(layer.values - expected, self.h, mask)
        self.per_layer.append(distance)
        self.squared = max(self.squared, distance)

    @property
    def value(self) -> Fraction:
        return sqrt_upper(self.squared)


def compare_traces(t1:GridTrace, t2:Union[GridTrace, Oracle], dom:Optional[DomainH]=None) -> Fraction:
    """Upper bound on the sL2 distance at grid nodes; layers are matched by level."""
    h = t1.plan.h
    m = t1.final.m
    if isinstance(t2, GridTrace):
        _check_compatible(t1, t2)
        other = {layer.level: layer for layer in t2.layers}
        worst = Fraction(0)
        for layer in t1.layers:
            if layer.level not in other:
                continue
            mask = node_mask(dom, layer, h)
            worst = max(worst, layer_l2_squared(layer.values - other[layer.level].values, h, mask))
        return sqrt_upper(worst)
    distance = LayerDistance(t2, h, m, dom)
    for layer in t1.layers:
        distance(layer)
    return distance.value
