#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
"""
Precision certificates. The claim is ‖u − υ̃|_H‖_sL2 < 1/a with the bound split into an interpolation term, a scheme
term and a rounding term; every number is stored as an exact rational string so the inequality can be re-checked
from the document alone.
"""
import logging
from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict

from backend.engine import GridTrace
from backend.errors import CertificateRefused
from backend.planner import ErrorBudget, GridPlan


log = logging.getLogger(__name__)

CLAIM = "‖u − υ̃|_H‖_sL2 < 1/a"


class SolutionCertificate(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    plan: GridPlan
    budget: ErrorBudget
    precision_a: int
    rounding_spent: Fraction
    matrix_term: Fraction
    problem_hash: str
    backend: str
    restriction: Literal['H', 'full_cylinder']
    extensions: List[str] = []
    claim: str = CLAIM

    @property
    def target(self) -> Fraction:
        return Fraction(1, self.precision_a)

    @property
    def slack(self) -> Fraction:
        return self.target - self.budget.total

    def to_document(self) -> Dict[str, Any]:
        return {
            "claim": self.claim,
            "precision_a": self.precision_a,
            "target": str(self.target),
            "problem_hash": self.problem_hash,
            "backend": self.backend,
            "restriction": self.restriction,
            "extensions": list(self.extensions),
            "plan": self.plan.to_document(),
            "budgets": self.budget.to_document(),
            "constants": {
                "P_bound": str(self.plan.P_bound),
                "kappa": str(self.plan.kappa),
                "eps_mat": str(self.plan.eps_mat),
                "eps_op": str(self.plan.eps_op),
                "growth": str(self.plan.growth),
                "solution_bound": str(self.plan.solution_bound),
                "source_perturbation": str(self.plan.source_perturbation),
                "rounding_spent": str(self.rounding_spent),
                "matrix_term": str(self.matrix_term),
            },
        }


def certify(trace:GridTrace, plan:GridPlan, budget:ErrorBudget, precision_a:int, problem_hash:str="",
            kind:Literal['cauchy', 'boundary']='cauchy', has_source:bool=False) -> SolutionCertificate:
    """Build the certificate from the run's ledger; CertificateRefused when the recorded sum is not below 1/a."""
    if trace.plan != plan:
        raise CertificateRefused("the trace was computed under a different plan")
    final = budget.model_copy(update={
        "interpolation_term": plan.P_bound * plan.h,
        "scheme_term": plan.P_bound * plan.h,
        "rounding_term": trace.rounding_spent + trace.matrix_term,
    })
    target = Fraction(1, precision_a)
    if final.total >= target:
        raise CertificateRefused(f"error bound {final.total} is not below 1/a = {target}")
    extensions = ["source term: first-order explicit"] if has_source else []
    cert = SolutionCertificate(
        plan=plan,
        budget=final,
        precision_a=precision_a,
        rounding_spent=trace.rounding_spent,
        matrix_term=trace.matrix_term,
        problem_hash=problem_hash,
        backend=trace.backend,
        restriction='H' if kind == 'cauchy' else 'full_cylinder',
        extensions=extensions,
    )
    log.info(f"certify: total={float(final.total):.3e} < 1/{precision_a}, slack={float(cert.slack):.3e}")
    return cert


def certificate_failures(doc:Dict[str, Any]) -> List[str]:
    """Every recorded relation that does not hold; empty for a sound certificate."""
    failures:List[str] = []

    def check(name:str, holds:bool):
        if not holds:
            failures.append(name)

    try:
        a = int(doc["precision_a"])
        plan = {k: v for k, v in doc["plan"].items() if k not in ("guaranteed", "diagnostics")}
        budgets = {k: Fraction(v) for k, v in doc["budgets"].items()}
        constants = {k: Fraction(v) for k, v in doc["constants"].items()}
        N, L = int(plan["N"]), int(plan["L"])
        h, tau, T = Fraction(plan["h"]), Fraction(plan["tau"]), Fraction(plan["T"])
        P = Fraction(plan["P_bound"])
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        return [f"unreadable certificate: {e!r}"]
    if a < 1:
        return ["precision_a < 1"]
    target = Fraction(1, a)
    check("h = 2^-N", h == Fraction(1, 2**N))
    check("L·τ = T", (L == 0 and T == 0) or L * tau == T)
    check("P_bound recorded consistently", constants["P_bound"] == P)
    check("interpolation_term = P·h", budgets["interpolation_term"] == P * h)
    check("scheme_term = P·h", budgets["scheme_term"] == P * h)
    check("rounding_term = rounding_spent + matrix_term", budgets["rounding_term"] == constants["rounding_spent"] + constants["matrix_term"])
    expected_matrix = constants["kappa"] * constants["growth"] * L * (constants["eps_op"] * constants["solution_bound"] + constants["source_perturbation"])
    check("matrix_term = κ·growth·L·(ε_op·U + source)", constants["matrix_term"] == expected_matrix)
    total = budgets["interpolation_term"] + budgets["scheme_term"] + budgets["rounding_term"]
    check("total = sum of terms", budgets.get("total", total) == total)
    check("total < 1/a", total < target)
    check("target = 1/a", Fraction(doc.get("target", str(target))) == target)
    return failures


def verify_certificate(doc:Dict[str, Any]) -> bool:
    failures = certificate_failures(doc)
    for failure in failures:
        log.warning(f"verify_certificate: {failure}")
    return not failures


def certificate_summary(doc:Dict[str, Any], digits:Optional[int]=6) -> Dict[str, str]:
    budgets = doc["budgets"]
    summary = {"claim": doc["claim"], "target": doc["target"], "total": budgets["total"]}
    if digits is not None:
        summary["total_decimal"] = f"{float(Fraction(budgets['total'])):.{digits}g}"
    return summary
