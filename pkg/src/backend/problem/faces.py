#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
"""
Face operators for dissipative boundary conditions.

At the face x_i = 0 the characteristic components with μ < 0 leave the domain and are copied from the adjacent
cell, the ones with μ > 0 enter and are solved from Φ^(1)·U = 0; at x_i = 1 the roles swap. Components with μ = 0
are set to 0 (B annihilates them). The result is a linear map U_face = E·u_cell.
"""
import logging
from typing import List, Literal, Tuple

from backend.algebra import RealAlgebraic, alg_arith
from backend.errors import BoundarySolveError, SingularMatrixError
from backend.linalg import ExactMatrix, PencilDecomposition, mat_inverse


log = logging.getLogger(__name__)


def characteristic_roles(signs:Tuple[int, ...], face:Literal['left', 'right']) -> Tuple[List[int], List[int], List[int]]:
    """(incoming, outgoing, zero) component indices at a face."""
    entering = 1 if face == 'left' else -1
    incoming = [k for k, s in enumerate(signs) if s == entering]
    outgoing = [k for k, s in enumerate(signs) if s == -entering]
    zero = [k for k, s in enumerate(signs) if s == 0]
    return incoming, outgoing, zero


def face_reconstruction(pencil:PencilDecomposition, phi:ExactMatrix, face:Literal['left', 'right']) -> ExactMatrix:
    """R with V_face = R·v_cell in characteristic coordinates."""
    n = pencil.n
    incoming, outgoing, _ = characteristic_roles(pencil.signs, face)
    if phi.rows != len(incoming):
        raise BoundarySolveError(f"{face} face: Φ has {phi.rows} rows for {len(incoming)} incoming characteristics")
    zero = RealAlgebraic.rational(0)
    rows = [[zero] * n for _ in range(n)]
    for k in outgoing:
        rows[k][k] = RealAlgebraic.rational(1)
    if incoming:
        M = phi @ pencil.T
        M_in = ExactMatrix.from_rows([[M[r, k] for k in incoming] for r in range(M.rows)])
        M_out = ExactMatrix.from_rows([[M[r, k] for k in outgoing] for r in range(M.rows)], cols=len(outgoing))
        try:
            solve = mat_inverse(M_in) @ M_out
        except SingularMatrixError as e:
            raise BoundarySolveError(f"{face} face: the incoming block of Φ·T is singular") from e
        for r, k in enumerate(incoming):
            for c, j in enumerate(outgoing):
                rows[k][j] = alg_arith(0, solve[r, c], 'sub')
    return ExactMatrix.from_rows(rows, cols=n)


def boundary_maps(pencil:PencilDecomposition, phi_left:ExactMatrix, phi_right:ExactMatrix) -> Tuple[ExactMatrix, ExactMatrix]:
    """(E_left, E_right) with E = T·R·T⁻¹ for the faces x_i = 0 and x_i = 1."""
    E_left = pencil.T @ face_reconstruction(pencil, phi_left, 'left') @ pencil.T_inv
    E_right = pencil.T @ face_reconstruction(pencil, phi_right, 'right') @ pencil.T_inv
    log.debug(f"boundary_maps({pencil.n=})")
    return E_left, E_right
