#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
from typing import Any, Dict

from celery import Celery
from celery.utils.log import get_task_logger

from backend.certify import level_error
from backend.problem import compute_domain, problem_from_document, require_valid
from backend.settings import SETTINGS


log = get_task_logger(__name__)

queue = Celery(__name__, broker=SETTINGS.jobqueue['broker'], backend=SETTINGS.jobqueue['result_backend'])
queue.conf.update(task_serializer='json', result_serializer='json', accept_content=['json'])


@queue.task(name='convergence_level')
def convergence_level(document:Dict[str, Any], N:int, backend:str) -> Dict[str, Any]:
    """One row of the convergence table, computed against the exact-solution oracle; numbers as exact strings."""
    p = problem_from_document(document)
    require_valid(p)
    dom = compute_domain(p)
    log.info(f"convergence_level({N=}, {backend=})")
    row = level_error(p, dom, N, backend) #type:ignore
    return {"N": row["N"], "h": str(row["h"]), "L": row["L"], "error": str(row["error"])}
