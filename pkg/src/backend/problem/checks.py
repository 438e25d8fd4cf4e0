#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
import logging
import math
from fractions import Fraction
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel

from backend.algebra import RealAlgebraic, alg_arith, alg_compare, alg_sign, rational_bounds
from backend.errors import NoAdmissibleDomain, ProblemInvalid
from backend.linalg import ExactMatrix, PencilDecomposition, null_space_basis, spectral_decompose
from backend.settings import SETTINGS
from .model import DomainH, HyperbolicProblem, a_spectrum, axis_pencils


log = logging.getLogger(__name__)


class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: str = ""
    severity: Literal['error', 'warning'] = 'error'


class ValidationReport(BaseModel):
    checks: List[CheckResult] = []
    strongly_dissipative: Optional[bool] = None

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks if c.severity == 'error')

    @property
    def failures(self) -> List[str]:
        return [c.name for c in self.checks if c.severity == 'error' and not c.passed]

    def add(self, name:str, passed:bool, detail:str="", severity:Literal['error', 'warning']='error'):
        self.checks.append(CheckResult(name=name, passed=passed, detail=detail, severity=severity))


def _restricted_form(B:ExactMatrix, phi:ExactMatrix) -> Optional[ExactMatrix]:
    """Zᵀ B Z for Z a basis of ker Φ, or None when the kernel is trivial."""
    kernel = null_space_basis(phi)
    if not kernel:
        return None
    Z = ExactMatrix.from_columns(kernel)
    return Z.T @ B @ Z


def _dissipativity(B:ExactMatrix, phi:ExactMatrix, face:Literal['left', 'right']) -> Tuple[bool, bool, str]:
    """(dissipative, strictly, detail). Left face: (Bu, u) ≤ 0 on ker Φ^(1); right face: ≥ 0 on ker Φ^(2)."""
    form = _restricted_form(B, phi)
    if form is None:
        return True, True, "ker Φ = {0}"
    spec = spectral_decompose(form)
    if face == 'left':
        extreme = spec.lambda_max
        s = alg_sign(extreme)
        return s <= 0, s < 0, f"largest eigenvalue of the restricted form is {extreme}"
    extreme = spec.lambda_min
    s = alg_sign(extreme)
    return s >= 0, s > 0, f"smallest eigenvalue of the restricted form is {extreme}"


def _boundary_checks(report:ValidationReport, p:HyperbolicProblem, pencils:Tuple[PencilDecomposition, ...]):
    assert p.boundary is not None
    strict_everywhere = True
    for i, (pair, pencil) in enumerate(zip(p.boundary, pencils)):
        axis = i + 1
        signs = pencil.signs
        positive, negative = sum(1 for s in signs if s > 0), sum(1 for s in signs if s < 0)
        report.add(f"Φ^(1) rows (axis {axis})", pair.left.rows == positive,
                   f"{pair.left.rows} rows, {positive} positive pencil eigenvalues")
        report.add(f"Φ^(2) rows (axis {axis})", pair.right.rows == negative,
                   f"{pair.right.rows} rows, {negative} negative pencil eigenvalues")
        for face, phi in (('left', pair.left), ('right', pair.right)):
            ok, strict, detail = _dissipativity(p.B[i], phi, face) #type: ignore
            report.add(f"dissipative {face} face (axis {axis})", ok, detail)
            strict_everywhere = strict_everywhere and strict
    report.strongly_dissipative = strict_everywhere
    report.add("coincidence constraints", True, "compatibility of φ with the boundary conditions is not checked mechanically", severity='warning')


def validate(p:HyperbolicProblem) -> ValidationReport:
    report = ValidationReport()
    a_symmetric = p.A.is_symmetric()
    report.add("A symmetric", a_symmetric)
    b_symmetric = []
    for i, b in enumerate(p.B):
        b_symmetric.append(b.is_symmetric())
        report.add(f"B_{i + 1} symmetric", b_symmetric[-1])
    a_positive = False
    if a_symmetric:
        lam_min = a_spectrum(p).lambda_min
        a_positive = alg_sign(lam_min) > 0
        report.add("A positive definite", a_positive, f"smallest eigenvalue {lam_min}")
    else:
        report.add("A positive definite", False, "not checked: A is not symmetric")
    if a_positive and all(b_symmetric):
        pencils = axis_pencils(p)
        if p.kind == 'boundary':
            _boundary_checks(report, p, pencils)
        if p.M is not None:
            from backend.planner import data_bounds #pylint: disable=import-outside-toplevel
            bounds = data_bounds(p)
            too_big = {k: v for k, v in bounds.items() if v > p.M}
            report.add("data bounded by M", not too_big,
                       "; ".join(f"{k} ≤ {v} > M" for k, v in too_big.items()) or f"all bounds ≤ {p.M}")
    log.debug(f"validate({p.kind=}) -> failures={report.failures}")
    return report


def require_valid(p:HyperbolicProblem) -> ValidationReport:
    report = validate(p)
    if not report.ok:
        raise ProblemInvalid(report.failures)
    return report


def _dyadic_ceiling(x:RealAlgebraic, bits:int) -> Fraction:
    scale = 2**bits
    if x.is_rational:
        return Fraction(math.ceil(x.as_fraction() * scale), scale)
    width = Fraction(1, scale)
    while True:
        lo, hi = rational_bounds(x, width)
        up_lo, up_hi = math.ceil(lo * scale), math.ceil(hi * scale)
        if up_lo == up_hi:
            return Fraction(up_hi, scale)
        width /= 16


def compute_domain(p:HyperbolicProblem) -> DomainH:
    pencils = axis_pencils(p)
    mu_min = tuple(pc.mu_min for pc in pencils)
    mu_max = tuple(pc.mu_max for pc in pencils)
    if p.kind == 'boundary':
        if p.T_override is None:
            raise ProblemInvalid(["T is required for boundary problems"])
        return DomainH('boundary', mu_min, mu_max, None, p.T_override)

    for i, pc in enumerate(pencils):
        axis = i + 1
        if alg_sign(pc.mu_min) > 0:
            raise NoAdmissibleDomain(f"μ_min>0 on axis {axis}", axis=axis)
        if alg_sign(pc.mu_max) < 0:
            raise NoAdmissibleDomain(f"μ_max<0 on axis {axis}", axis=axis)
        if any(s == 0 for s in pc.signs):
            raise NoAdmissibleDomain(f"zero pencil eigenvalue on axis {axis}", axis=axis)

    spans = [alg_arith(1, alg_arith(hi, lo, 'sub'), 'div') for lo, hi in zip(mu_min, mu_max)]
    T_apex = spans[0]
    for s in spans[1:]:
        if alg_compare(s, T_apex) < 0:
            T_apex = s
    T = _dyadic_ceiling(T_apex, SETTINGS.solver['domain_dyadic_bits'])
    if p.T_override is not None:
        log.warning(f"compute_domain: T={p.T_override} ignored for a Cauchy problem, using {T=}")
    log.debug(f"compute_domain -> {T_apex=}, {T=}")
    return DomainH('cauchy', mu_min, mu_max, T_apex, T)
