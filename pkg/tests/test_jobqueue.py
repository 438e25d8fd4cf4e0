#pylint: disable=missing-docstring, line-too-long, trailing-whitespace, unused-argument
from fractions import Fraction

import pytest

from backend.certify import level_error
from backend.jobqueue import convergence_level, queue
from backend.problem import compute_domain, problem_to_document
from backend.settings import SETTINGS
from conftest import ADVECTION, PENCIL, document, term


def test_queue_is_configured_from_settings():
    assert queue.conf.broker_url == SETTINGS.jobqueue['broker']
    assert queue.conf.task_serializer == 'json'
    assert 'convergence_level' in queue.tasks


def test_convergence_level_task(eager_queue):
    doc = document(ADVECTION, phi=[[term(1, 0, 0)], [term(2, 0, 0)]])
    row = convergence_level.delay(doc, 2, 'exact').get()
    assert row == {"N": 2, "h": "1/4", "L": 6, "error": "0"}


def test_convergence_level_matches_local_computation(eager_queue, linear_advection):
    row = convergence_level.delay(problem_to_document(linear_advection), 2, 'dyadic').get()
    local = level_error(linear_advection, compute_domain(linear_advection), 2, 'dyadic')
    assert Fraction(row["error"]) == local["error"]


def test_convergence_level_without_oracle(eager_queue):
    with pytest.raises(ValueError):
        convergence_level.delay(document(PENCIL), 2, 'exact').get()
