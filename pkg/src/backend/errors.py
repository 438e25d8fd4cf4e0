#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
from typing import List, Optional


class SolverError(Exception):
    """
    Base for everything the solver raises on purpose. `exit_code` is what the CLI returns for it.
    """
    exit_code: int = 3


# -- exit 2 ---------------------------------------------------------------------------------------

class ProblemParseError(SolverError):
    exit_code = 2

    def __init__(self, message:str, path:Optional[str]=None, line:Optional[int]=None, column:Optional[int]=None):
        self.path = path
        self.line = line
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}" + (f" col {column}" if column is not None else ""))
        if path:
            where.append(f"at {path}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


# -- exit 1 ---------------------------------------------------------------------------------------

class ProblemInvalid(SolverError):
    exit_code = 1

    def __init__(self, failed_checks:List[str]):
        self.failed_checks = failed_checks
        super().__init__("problem failed validation: " + "; ".join(failed_checks))


class NoAdmissibleDomain(SolverError):
    exit_code = 1

    def __init__(self, message:str, axis:Optional[int]=None):
        self.axis = axis
        super().__init__(f"no admissible domain: {message}")


# -- exit 3 ---------------------------------------------------------------------------------------

class SolverRuntimeError(SolverError):
    exit_code = 3


class ConfigError(SolverRuntimeError):
    pass


class SingularMatrixError(SolverRuntimeError):
    pass


class NotSymmetricError(SolverRuntimeError):
    pass


class NotPositiveDefiniteError(SolverRuntimeError):
    pass


class DependentVectorsError(SolverRuntimeError):
    pass


class BoundarySolveError(SolverRuntimeError):
    pass


class BudgetExceededError(SolverRuntimeError):
    pass


class CertificateRefused(SolverRuntimeError):
    pass


class OutsideDomainError(SolverRuntimeError):
    pass


class GridMismatchError(SolverRuntimeError):
    pass
