#pylint: disable=missing-docstring, line-too-long, trailing-whitespace
import argparse
import json
import logging
import pathlib as pl
from fractions import Fraction
from typing import Any, Tuple

from backend.algebra import alg_to_decimal
from backend.errors import ProblemParseError
from backend.problem import DomainH, HyperbolicProblem, compute_domain, load_problem, require_valid
from backend.settings import SETTINGS


log = logging.getLogger(__name__)


def add_problem_argument(parser:argparse.ArgumentParser):
    parser.add_argument('file', type=pl.Path, help="problem file (JSON or hjson)")


def add_json_flag(parser:argparse.ArgumentParser):
    parser.add_argument('--json', action='store_true', help="machine-readable output")


def prepared(path:pl.Path) -> Tuple[HyperbolicProblem, DomainH]:
    p = load_problem(path)
    require_valid(p)
    return p, compute_domain(p)


def decimal(x:Any) -> str:
    return alg_to_decimal(x, SETTINGS.solver['decimal_digits'])


def parse_rational(text:str, what:str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ProblemParseError(f"{what}: not a rational number {text!r}") from e


def print_json(doc:Any):
    print(json.dumps(doc, indent=2, ensure_ascii=False))


def write_json(doc:Any, path:pl.Path) -> pl.Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf8', newline='\n') as f:
        json.dump(doc, f, indent=2, ensure_ascii=False, sort_keys=True)
        f.write('\n')
    log.debug(f"write_json({path=})")
    return path
