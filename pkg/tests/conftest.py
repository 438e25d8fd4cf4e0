#pylint: disable=missing-docstring, line-too-long, trailing-whitespace, redefined-outer-name
import copy
import json
import os
from typing import Any, Dict

import hypothesis
import numpy as np
import pytest

from backend.problem import HyperbolicProblem, problem_from_document


np.seterr(all="warn")

hypothesis.settings.register_profile("default", max_examples=25, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.register_profile("debugger", report_multiple_bugs=False, deadline=None)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))


def term(coef, *exps) -> Dict[str, Any]:
    return {"coef": str(coef), "exps": list(exps)}


# A = I, B = diag(1, −1), C = diag(1/2, −1/2), φ = (x²y, x + y), a = 10
ADVECTION = {
    "kind": "cauchy",
    "m": 2,
    "n": 2,
    "A": [[1, 0], [0, 1]],
    "B": [[[1, 0], [0, -1]], [["1/2", 0], [0, "-1/2"]]],
    "phi": [[term(1, 2, 1)], [term(1, 1, 0), term(1, 0, 1)]],
    "precision_a": 10,
}

# A = diag(1, 4), B = [[0, 2], [2, 0]]: pencil eigenvalues ±1
PENCIL = {
    "kind": "cauchy",
    "m": 1,
    "n": 2,
    "A": [[1, 0], [0, 4]],
    "B": [[[0, 2], [2, 0]]],
    "phi": [[term(1, 2), term(-2, 3), term(1, 4)], []],
    "precision_a": 10,
}

# 1D, u1 moves right and is zero at x = 0, u2 moves left and is zero at x = 1
BOUNDARY = {
    "kind": "boundary",
    "m": 1,
    "n": 2,
    "A": [[1, 0], [0, 1]],
    "B": [[[1, 0], [0, -1]]],
    "phi": [[], [term(1, 0)]],
    "boundary": [{"left": [[1, 0]], "right": [[0, 1]]}],
    "precision_a": 1,
    "T": "1/4",
}


def document(base:Dict[str, Any], **changes) -> Dict[str, Any]:
    doc = copy.deepcopy(base)
    doc.update(changes)
    return doc


@pytest.fixture
def advection_doc() -> Dict[str, Any]:
    return document(ADVECTION)


@pytest.fixture
def advection() -> HyperbolicProblem:
    return problem_from_document(document(ADVECTION))


@pytest.fixture
def linear_advection() -> HyperbolicProblem:
    """The advection system with linear data: every second derivative vanishes, so P = 0."""
    return problem_from_document(document(ADVECTION, phi=[[term(1, 1, 0)], [term(1, 0, 1)]], precision_a=1))


@pytest.fixture
def pencil() -> HyperbolicProblem:
    return problem_from_document(document(PENCIL))


@pytest.fixture
def boundary() -> HyperbolicProblem:
    return problem_from_document(document(BOUNDARY))


@pytest.fixture
def write_problem(tmp_path):
    def write(doc:Dict[str, Any], name:str="problem.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc), encoding='utf8')
        return path
    return write


@pytest.fixture
def eager_queue():
    """Run celery tasks in-process, without a broker."""
    from backend.jobqueue import queue #pylint: disable=import-outside-toplevel
    queue.conf.task_always_eager = True
    queue.conf.task_eager_propagates = True
    yield queue
    queue.conf.task_always_eager = False
    queue.conf.task_eager_propagates = False
